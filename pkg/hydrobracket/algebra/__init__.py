from hydrobracket.algebra.calculus import (
    closedness_defects,
    gradient,
    hessian,
    integrate_gradient,
    integrate_hessian,
    partial,
    third_derivatives,
)
from hydrobracket.algebra.jet import flow_velocity, jet_total_x_derivative, total_x_derivative
from hydrobracket.algebra.matrix import ConstSymMatrix, PolyMatrix, PolyTensor, bareiss_determinant, commutator, mat_mul
from hydrobracket.algebra.poly import JetPoly, Poly, as_scalar

__all__ = [
    "ConstSymMatrix",
    "JetPoly",
    "Poly",
    "PolyMatrix",
    "PolyTensor",
    "as_scalar",
    "bareiss_determinant",
    "closedness_defects",
    "commutator",
    "flow_velocity",
    "gradient",
    "hessian",
    "integrate_gradient",
    "integrate_hessian",
    "jet_total_x_derivative",
    "mat_mul",
    "partial",
    "third_derivatives",
    "total_x_derivative",
]
