# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       format_name: percent
# ---

# %% [markdown]
# # Slopes of $U_3$ on the Hurwitz-order example
#
# The operator is assembled from a recipe of quaternion cosets acting on
# power series, truncated to $N$ rows. The first six slopes are $1/2, 3/2,
# \dots, 11/2$ and do not depend on the weight.

# %%
from upslopes.scenarios import seeded_w0
from upslopes.spectral import newton_polygon
from upslopes.upmat import example53_up

for w0 in (0, 1, 3, seeded_w0(0)):
    T = example53_up(w0, N=12, prec=40)
    NP = newton_polygon(T.char_series())
    print(w0, [str(s) for s in NP.slopes()[:6]])

# %% [markdown]
# The same computation through a scenario, as the command line runs it.

# %%
from upslopes.scenarios import builtin_scenarios, run_scenario

rep = run_scenario(builtin_scenarios()["example-5"])
print(rep.status)
for r in rep.results:
    print(r.name, r.status)
