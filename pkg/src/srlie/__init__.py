"""Closed-form sub-Riemannian geometry of SU(2)xR and SO(3)xR.

Geodesics, conjugate and cut times, cut/conjugate loci and exact distances
from the identity for two left-invariant metrics with three-dimensional
generating distributions, together with an independent ODE/shooting oracle.
"""

from srlie.algebra import AlgebraVector, BasisKind
from srlie.groups import GroupKind, So3RPoint, Su2RPoint
from srlie.geodesics import GeodesicParams

__all__ = [
    "AlgebraVector",
    "BasisKind",
    "GeodesicParams",
    "GroupKind",
    "So3RPoint",
    "Su2RPoint",
]

__version__ = "0.1.0"
