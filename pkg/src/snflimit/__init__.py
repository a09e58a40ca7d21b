"""Smith normal forms over Laurent series and the log_t singular value limit."""

from .errors import InputError, NumericError, SnfLimitError
from .harness import convergence_table, log_singular_values, sandwich_check
from .parsing import format_series, load_matrix, parse_matrix, parse_series
from .series import LaurentSeries, SeriesMatrix, evaluate, evaluate_matrix, ord_t
from .smith import invariant_factors, minor_valuation_oracle, smith_normal_form, verify_decomposition
from .svd import hermitian_eigenvalues, singular_values, svd
from .tropical import amoeba_sample_line, distance_to_rayset, tropical_line, trop_point

__all__ = [
    "InputError",
    "LaurentSeries",
    "NumericError",
    "SeriesMatrix",
    "SnfLimitError",
    "amoeba_sample_line",
    "convergence_table",
    "distance_to_rayset",
    "evaluate",
    "evaluate_matrix",
    "format_series",
    "hermitian_eigenvalues",
    "invariant_factors",
    "load_matrix",
    "log_singular_values",
    "minor_valuation_oracle",
    "ord_t",
    "parse_matrix",
    "parse_series",
    "sandwich_check",
    "singular_values",
    "smith_normal_form",
    "svd",
    "trop_point",
    "tropical_line",
    "verify_decomposition",
]
