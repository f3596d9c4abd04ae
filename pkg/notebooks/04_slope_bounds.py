# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       format_name: percent
# ---

# %% [markdown]
# # Lower bounds on slopes for synthetic recipes
#
# Seeded recipes over $\mathbb{Z}_3[\zeta_{81}]$ give operators whose Newton
# polygon must lie above the general bound and touch the improved bound
# at its breakpoints.

# %%
from upslopes.padic import DiskPoint
from upslopes.spectral import check_sharp_bound, check_theorem_A, improved_bound_slopes
from upslopes.upmat import alpha_lists, assemble, synthetic_context, synthetic_recipe

for seed in range(6):
    t = 1 + seed % 3
    r = synthetic_recipe(seed, t)
    ctx = synthetic_context(r, 20)
    T = assemble(r, DiskPoint(r.psi, 0), 5, ctx)
    cs = T.char_series()
    bound = improved_bound_slopes(alpha_lists(r, ctx), t, 5 * t)
    sharp = check_sharp_bound(cs, bound, t, 3)
    print(seed, t, check_theorem_A(cs, t), sharp.passed)
