"""High-precision numerical checks of sum formulas for multiple zeta and
multiple Hurwitz zeta values."""
from .compositions import Composition, count_compositions, enumerate_compositions
from .errors import (
    CancellationError,
    ConvergenceError,
    DepthUnsupported,
    DivisionByZero,
    DomainError,
    IllConditioned,
    MzvError,
    NonFinite,
    PoleError,
)
from .extrapolate import TruncationPlan
from .hpcore import (
    Method,
    PrecisionContext,
    SeriesValue,
    bernoulli_numbers,
    digamma,
    hurwitz_zeta,
    parse_complex,
    pochhammer,
)
from .identities import (
    check_cor2,
    check_gf_prop1,
    check_gf_prop3,
    check_prop1,
    check_prop3,
    check_sum_formula,
)
from .multiseries import (
    WeightVariant,
    lhs_double_pole,
    multiple_hurwitz_zeta,
    weighted_multiple_series,
)
from .quadrature import (
    QuadResult,
    check_change_of_variables,
    iterated_integral_prop1,
    iterated_integral_prop3,
    tanh_sinh,
)
from .report import IdentityReport
from .taylor import TruncSeries, pochhammer_ratio_coeffs, pochhammer_ratio_series, prop3_rhs

__version__ = "0.1.0"
