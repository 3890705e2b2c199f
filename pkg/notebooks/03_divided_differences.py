# %% [markdown]
# # Divided differences in exact arithmetic
#
# `M_operator(g, MQuery(i, j, u, v))` differentiates the divided difference
# `(g(v) - g(u)) / (v - u)` i times in u and j times in v. For polynomial g
# everything is exact rational arithmetic, so identities among these values
# hold with residual exactly zero.

# %%
from fractions import Fraction

from recordchar import MQuery, M_operator, Polynomial
from recordchar.diffops import (I_integral, beta_function, check_I_recursion, check_identity_13,
                                check_identity_17, rhs_prior_characterization)

g = Polynomial([Fraction(1, 2), 0, -1, 0, Fraction(3, 7)])
u, v = Fraction(1, 3), Fraction(5, 2)
print("g =", g)
print("M(0,0) =", M_operator(g, MQuery(0, 0, u, v)), "=", (g(v) - g(u)) / (v - u))
print("M(2,1) =", M_operator(g, MQuery(2, 1, u, v)))

# %%
print("derivative identity residual:", check_identity_13(g, 2, u, v))
print("mixed recursion residual:    ", check_identity_17(g, 2, 3, u, v))
print("integration-by-parts residual:", check_I_recursion(g, 2, 3, u, v))

# %%
j, s = 2, 3
print("I(j, s)                      =", I_integral(g, j, s, u, v))
print("(v-u)^(s+j-1) M(j-1, s-1)    =", (v - u) ** (s + j - 1) * M_operator(g, MQuery(j - 1, s - 1, u, v)))
print("B(2, 3) =", beta_function(2, 3), "  M(1, 2)/B(2, 3) =", rhs_prior_characterization(g, 2, 3, u, v))

# %% [markdown]
# The `verify-identities` command runs these checks over random polynomials:
#
#     recordchar verify-identities --config identities-default --out results/identities
