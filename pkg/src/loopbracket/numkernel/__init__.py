"""Exact-structure numerical kernel: rational matrix functions, graded
Laurent matrices, contour quadrature, polynomial roots and theta
functions."""

from .quadrature import Contour, contour_quad
from .roots import poly_roots, adjugate
from .ratmat import RationalMatrix, split_on_disk
from .graded import GradedLaurentMatrix
from .theta import ThetaParams, theta_eval, theta1

__all__ = [
    "Contour", "contour_quad", "poly_roots", "adjugate",
    "RationalMatrix", "split_on_disk", "GradedLaurentMatrix",
    "ThetaParams", "theta_eval", "theta1",
]
