# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       format_name: percent
# ---

# %% [markdown]
# # Cyclotomic 3-adic arithmetic
#
# Elements of $\mathbb{Z}_3[\zeta_9]$ are stored in the basis of powers of
# $\pi = \zeta - 1$. Valuations are measured in units of $v(\pi)$.

# %%
from upslopes.padic import CycloElt, PadicContext
from upslopes.upmat import EXAMPLE_PSI

ctx = PadicContext(3, m=3, prec=20)
z = CycloElt.zeta(ctx, 1)
pi = z - CycloElt.one(ctx)
print("v(pi) =", pi.valuation())
print("v(3)  =", (CycloElt.one(ctx) * 3).valuation())

# %% [markdown]
# Valuations are additive on products and ultrametric on sums.

# %%
a = pi * pi + pi * 3
b = pi * pi * pi
print(a.valuation(), b.valuation(), (a * b).valuation(), (a + b).valuation())

# %% [markdown]
# A character of conductor 9 takes values in the 9th roots of unity.

# %%
for d in (2, 4, 7, 8):
    print(d, EXAMPLE_PSI.value(d, ctx).literal())
