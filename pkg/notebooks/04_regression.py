# %% [markdown]
# # Record regression and the exponential law
#
# For an exponential parent, `E[psi(R_n) | R_(n-s) = u, R_(n+r) = v]` equals
# the expectation of psi under the generalized Beta on `[u, v]`, for every
# u, v and n. For other parents the two sides separate. Each report compares
# a quadrature value, a Monte Carlo value and the Beta value.

# %%
import numpy as np

from recordchar import DistributionSpec
from recordchar.regression import quantile_grid, verify_proposition

index_set = [(3, 1, 1), (4, 2, 2)]
for spec in [DistributionSpec.exponential(2.0, 1.0), DistributionSpec.weibull(2.0, 1.0),
             DistributionSpec.pareto(2.0, 1.0)]:
    reports = verify_proposition(spec, index_set, lambda n, s, r: quantile_grid(spec, n, s, r, 3),
                                 ["x", "exp_neg"], 20_000, np.random.SeedSequence(11))
    worst = max(reports, key=lambda rep: abs(rep.discrepancy))
    verdicts = [rep.verdict for rep in reports]
    print(f"{spec!s:34s} largest |quad - beta| = {abs(worst.discrepancy):.2e} "
          f"at (u, v) = ({worst.u:.3f}, {worst.v:.3f}); violated {verdicts.count('violated')}/{len(verdicts)}")

# %% [markdown]
# With psi the identity the Beta side is the weighted mean
# `(r u + s v)/(r + s)`, so the regression of the middle record on its
# neighbours is linear exactly when the parent is exponential.

# %%
from recordchar.regression import PSI_LIBRARY, RegressionQuery, regression_lhs_quadrature

u, v = 0.8, 2.2
for spec in [DistributionSpec.exponential(), DistributionSpec.weibull(2.0, 1.0)]:
    lhs = regression_lhs_quadrature(RegressionQuery(spec, 3, 1, 2, u, v, PSI_LIBRARY["x"]))
    print(f"{spec!s:34s} E[R_3 | u, v] = {lhs:.6f}   (2u + v)/3 = {(2 * u + v) / 3:.6f}")
