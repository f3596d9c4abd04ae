# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       format_name: percent
# ---

# %% [markdown]
# # The two bundled weight-2 matrices
#
# Both are scaled unitary up to 3: $\bar M^T M = 3I$. We compare their Newton
# polygon with their Hodge polygon and find where the two first separate.

# %%
from upslopes.corpus import load_fixture_matrix
from upslopes.padic import CMatrix
from upslopes.spectral import char_series, hodge_polygon, newton_polygon, progression_check

for name in ("m3", "m4"):
    M = load_fixture_matrix(name)
    n = M.shape[0]
    NP, HP = newton_polygon(char_series(M)), hodge_polygon(M)
    print(name, "unitary:", M.conj().T @ M == CMatrix.identity(M.ctx, n) * 3)
    print("  NP slopes", [str(s) for s in NP.slopes()])
    print("  HP slopes", [str(s) for s in HP.slopes()])
    rep = progression_check(NP, HP)
    print("  s0 =", rep.s0, " non-strict s0 =", rep.s0_nonstrict, " boundary", rep.boundary)
