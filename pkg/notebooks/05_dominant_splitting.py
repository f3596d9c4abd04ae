# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       format_name: percent
# ---

# %% [markdown]
# # Splitting off the dominant slope
#
# For the level-27 matrix the unit-root-like slope $1/6$ is isolated on a
# rank-one sublattice. The complement carries the remaining two slopes and
# the characteristic series factor accordingly.

# %%
import numpy as np

from upslopes.corpus import load_fixture_matrix
from upslopes.duality import (ResidualProjector, idempotent_limit, random_unit_matrix,
                              separate_dominant_slope, split_and_factor)

ds = separate_dominant_slope(load_fixture_matrix("m3", prec=160), 40)
print("dominant eigenvalue valuation", ds.eigenvalue.valuation())

# %% [markdown]
# Hide the splitting behind a random change of basis, then recover it from
# the residual eigenvalues of the Hecke operator.

# %%
ctx = ds.matrix.ctx
U = random_unit_matrix(ctx, 3, np.random.default_rng(1))
Ui = U.inverse()
Mc, Tc = U @ ds.matrix @ Ui, U @ ds.hecke @ Ui
P = ResidualProjector.from_hecke(ctx, [(Tc, 1, [0])], "dominant")
Q = ResidualProjector.from_hecke(ctx, [(Tc, 0, [1])], "rest")
sp = split_and_factor(Mc, [idempotent_limit(P), idempotent_limit(Q)])
print("ranks", sp.ranks)
print("slopes", [[str(s) for s in part] for part in sp.slopes()])
print("factors multiply back:", sp.product_ok)
