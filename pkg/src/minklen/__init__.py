"""Minkowski length of 2D and 3D lattice polytopes.

``length(P)`` is the template algorithm, ``oracle_length(P)`` a brute-force
check, and :mod:`minklen.classify` holds the mod-3 machinery for polytopes
of length one.
"""

__version__ = "0.1.0"

from .lattice import Mod3Class, UnimodularMap, all_mod3_classes, class_combinations, mod3_class
from .minkowski import Decomposition, LengthResult, TemplateBasis, length, length_2d, length_3d, max_cap
from .oracle import OracleBudgetExceeded, OracleResult, oracle_length, oracle_length_of_sum
from .polytope import DegenerateInputError, LatticePolytope, hull, minkowski_sum

__all__ = [
    "Decomposition",
    "DegenerateInputError",
    "LatticePolytope",
    "LengthResult",
    "Mod3Class",
    "OracleBudgetExceeded",
    "OracleResult",
    "TemplateBasis",
    "UnimodularMap",
    "all_mod3_classes",
    "class_combinations",
    "hull",
    "length",
    "length_2d",
    "length_3d",
    "max_cap",
    "minkowski_sum",
    "mod3_class",
    "oracle_length",
    "oracle_length_of_sum",
]
