"""Numerical checks of universal eigenvalue inequalities derived from commutator trace identities."""

from .core import (CommutatorConstants, EigenDecomposition, Spectrum, load_spectrum,
                   normalize_to_positive, save_spectrum, shift_spectrum)
from .eigen import solve_symmetric_eigen
from .functions import FunctionSpec, check_hypotheses, make_family, parse_family
from .models import (MatrixModel, box_spectrum, discretize_dirichlet, discretize_schrodinger_1d,
                     oscillator_spectrum)
from .reports import InequalityReport, MonotonicityReport

__version__ = "0.1.0"

__all__ = [
    "CommutatorConstants", "EigenDecomposition", "FunctionSpec", "InequalityReport",
    "MatrixModel", "MonotonicityReport", "Spectrum", "box_spectrum", "check_hypotheses",
    "discretize_dirichlet", "discretize_schrodinger_1d", "load_spectrum", "make_family",
    "normalize_to_positive", "oscillator_spectrum", "parse_family", "save_spectrum",
    "shift_spectrum", "solve_symmetric_eigen",
]
