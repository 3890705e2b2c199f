"""Exponential characterization through bivariate regression of record values.

Submodules:

- :mod:`~recordchar.distributions` -- exponential law and non-exponential controls
- :mod:`~recordchar.genbeta` -- four-parameter Beta law and Gauss-Jacobi expectations
- :mod:`~recordchar.records` -- record extraction, simulation, record densities
- :mod:`~recordchar.diffops` -- exact polynomials and divided-difference operators
- :mod:`~recordchar.regression` -- both sides of the regression identity, sweeps
- :mod:`~recordchar.goftest` -- record-regression goodness-of-fit test
- :mod:`~recordchar.cli` -- ``recordchar`` command-line runner
"""

from .diffops import (
    MQuery,
    Polynomial,
    TestFunction,
    I_integral,
    M_numeric,
    M_operator,
    check_I_recursion,
    check_identity_13,
    check_identity_17,
    poly_derivative,
    rhs_prior_characterization,
)
from .distributions import DistributionSpec, cdf, cumulative_hazard, hazard, inverse_cumulative_hazard, pdf, quantile, sample_iid
from .errors import (
    DegenerateConditioningError,
    DomainError,
    EstimationError,
    InsufficientDataError,
    UnreliableNullError,
)
from .genbeta import (
    GenBetaParams,
    genbeta_expect,
    genbeta_mean,
    genbeta_pdf,
    genbeta_sample,
    genbeta_sample_via_increments,
)
from .goftest import (
    GofReport,
    TripleSample,
    bootstrap_pvalue,
    collect_triples,
    estimate_exponential_params,
    gof_statistic,
    goodness_of_fit,
)
from .records import (
    RecordSequence,
    extract_records,
    record_conditional_pdf,
    record_joint_pdf,
    record_pdf,
    sample_record_conditional,
    simulate_record_process,
    simulate_records,
)
from .regression import (
    RegressionQuery,
    VerificationReport,
    regression_lhs_monte_carlo,
    regression_lhs_quadrature,
    regression_rhs_beta,
    verify_identity_12,
    verify_proposition,
)

__version__ = "0.1.0"
