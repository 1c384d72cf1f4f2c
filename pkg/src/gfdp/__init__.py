"""Group-pattern factorizations of weighted running-sum workloads.

The pipeline: a weight spec induces a lower-triangular Toeplitz
workload; evaluating its generating polynomial on the 2n-th roots of
unity yields an explicit complex factorization, which is rewritten over
the reals and rotated into lower-triangular streaming form.  On top of
that sit norm bounds with closed forms for the named families, and a
differentially private streaming mechanism whose measured error is
checked against the theoretical envelope.
"""

from .errors import (
    CapacityError,
    NumericError,
    ParameterError,
    StateError,
    VerificationError,
)
from .evaluator import ErrorReport, compare, empirical_err, theoretical_bound
from .factorizer import (
    PatternFactorization,
    RealFactorization,
    TriangularFactorization,
    build_pattern,
    factorize,
    realify,
    triangularize,
)
from .mechanism import PrivacyParams, StreamState, run, sigma
from .norms import (
    BoundReport,
    baseline_sqrt_bound,
    build_report,
    col_norm,
    counting_closed_form,
    counting_log_bound,
    gamma_upper_formula,
    lower_mathias,
    lower_matousek,
    lower_schatten,
    row_norm,
    sliding_bounds,
    striped_upper,
    trace_p,
)
from .polyeval import (
    RootsProfile,
    build_profile,
    eval_a,
    eval_b,
    eval_m,
    generator_sum,
    sqrt_spectrum,
)
from .weights import WeightSpec, Workload, build_matrix, coefficients

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "CapacityError",
    "ErrorReport",
    "NumericError",
    "ParameterError",
    "PatternFactorization",
    "PrivacyParams",
    "RealFactorization",
    "RootsProfile",
    "StateError",
    "StreamState",
    "TriangularFactorization",
    "VerificationError",
    "WeightSpec",
    "Workload",
    "baseline_sqrt_bound",
    "build_matrix",
    "build_pattern",
    "build_profile",
    "build_report",
    "coefficients",
    "col_norm",
    "compare",
    "counting_closed_form",
    "counting_log_bound",
    "empirical_err",
    "eval_a",
    "eval_b",
    "eval_m",
    "factorize",
    "gamma_upper_formula",
    "generator_sum",
    "lower_mathias",
    "lower_matousek",
    "lower_schatten",
    "realify",
    "row_norm",
    "run",
    "sigma",
    "sliding_bounds",
    "sqrt_spectrum",
    "striped_upper",
    "theoretical_bound",
    "trace_p",
    "triangularize",
]
