"""
Kac polynomials of quivers and their covering-quiver decomposition.

Exposes the quiver model, the Kac polynomial engine, the covering-class
enumeration with the a(1) identity check, and the tree-module counts.
"""

__version__ = "0.1.0"
__author__ = "Nikhil Joseph"

from .covering import enumerate_compatible, verify_main_theorem
from .kac import kac_polynomial
from .quiver import DimVector, Quiver, classify_root
from .quiver_file import builtin_quiver, load_quiver, parse_quiver
from .trees import cover_thin_count, spanning_tree_count

__all__ = [
    "Quiver",
    "DimVector",
    "classify_root",
    "kac_polynomial",
    "enumerate_compatible",
    "verify_main_theorem",
    "spanning_tree_count",
    "cover_thin_count",
    "parse_quiver",
    "load_quiver",
    "builtin_quiver",
]
