"""K0 of projective space: Euler form, operators, isometries and mutations."""

from .errors import K0Error
from .exceptional import ExceptionalTuple, apply_word, is_exceptional, mutate, parse_word, standard_tuple
from .isometry import GeneratorSet, IsometryDescriptor, classify_isometry, compute_generators, is_lattice_isometry
from .lattice import BasisTag, K0Class, chi, gram_matrix, line_bundle, point_class, structure_sheaf
from .operators import OperatorMatrix, OperatorSeries, d_operator, kappa
from .tensor import operator_class, tensor

__all__ = [
    "BasisTag",
    "ExceptionalTuple",
    "GeneratorSet",
    "IsometryDescriptor",
    "K0Class",
    "K0Error",
    "OperatorMatrix",
    "OperatorSeries",
    "__version__",
    "apply_word",
    "chi",
    "classify_isometry",
    "compute_generators",
    "d_operator",
    "gram_matrix",
    "is_exceptional",
    "is_lattice_isometry",
    "kappa",
    "line_bundle",
    "mutate",
    "operator_class",
    "parse_word",
    "point_class",
    "standard_tuple",
    "structure_sheaf",
    "tensor",
]
__version__ = "0.1.0"
