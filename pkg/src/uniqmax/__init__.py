"""uniqmax: exact, asymptotic and Monte Carlo analysis of maximum-score
uniqueness in round-robin tournaments between equally strong players."""

__version__ = "0.1.0"

from ._backend import backend_name
from .models import (PayoffModel, make_chess, make_classic, make_uniform,
                     moments, score_vector, validate)
from .pmf import (LatticePMF, Threshold, expected_wn_exact, expected_wn_upper,
                  prop1_lower_bound, score_pmf, tail_prob, threshold)

__all__ = [
    "__version__", "backend_name",
    "PayoffModel", "make_classic", "make_chess", "make_uniform",
    "moments", "score_vector", "validate",
    "LatticePMF", "Threshold", "score_pmf", "tail_prob", "threshold",
    "expected_wn_exact", "expected_wn_upper", "prop1_lower_bound",
]
