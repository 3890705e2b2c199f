# %% [markdown]
# # Testing exponentiality with record triples
#
# Each series contributes one triple `(R_(n-s), R_n, R_(n+r))`. Under an
# exponential parent the middle value has mean `(r u + s v)/(r + s)` given
# the outer two, so the residuals average to zero. The statistic is their
# studentized mean, calibrated by a parametric bootstrap from the fitted
# exponential.

# %%
import numpy as np

from recordchar import DistributionSpec, goodness_of_fit
from recordchar.cli import resolve_data
from recordchar.seriesio import read_series

for name in ["exponential_500x300", "weibull2_500x300"]:
    series = read_series(resolve_data(f"bundled:{name}"))
    report = goodness_of_fit(series, np.random.SeedSequence(5), B=500)
    print(name)
    print(report.summary())
    print()

# %% [markdown]
# Requiring four records inside a series of length 300 favours series whose
# early records are small, so even under the null the residual mean is
# slightly negative. The bootstrap replicates undergo the same selection;
# by default the p-value measures distance from the bootstrap centre rather
# than from zero. `centered=False` gives the plain `|T|` comparison.

# %%
series = read_series(resolve_data("bundled:weibull2_500x300"))
for centered in (True, False):
    rep = goodness_of_fit(series, np.random.SeedSequence(5), B=500, centered=centered)
    print(f"centered={centered!s:5s} T = {rep.statistic:+.3f}  null mean {rep.null_statistics.mean():+.3f}  "
          f"p = {rep.pvalue:.3f}")

# %% [markdown]
# The same test from the command line (exit code 3 means rejection):
#
#     recordchar goftest --config gof-weibull
#     recordchar goftest --data my_series.txt --seed 1
