"""Exact symbolic algebra in the independent variables xi and xibar."""

from .matrix import MatrixRF, VectorRF, commutator, determinant, mat_sum, outer
from .polynomial import DEGREE_CAP, Monomial, Polynomial, render_polynomial
from .rational import RationalFunction, rf_equal, rf_sum


def wirtinger_d(a: RationalFunction, which: str) -> RationalFunction:
    """Formal derivative treating xi and xibar as independent."""
    return RationalFunction.coerce(a).derivative(which)


def dagger(m: MatrixRF) -> MatrixRF:
    return m.dagger()


XI = RationalFunction.xi()
XIBAR = RationalFunction.xibar()

__all__ = [
    "DEGREE_CAP",
    "MatrixRF",
    "Monomial",
    "Polynomial",
    "RationalFunction",
    "VectorRF",
    "XI",
    "XIBAR",
    "commutator",
    "dagger",
    "determinant",
    "mat_sum",
    "outer",
    "render_polynomial",
    "rf_equal",
    "rf_sum",
    "wirtinger_d",
]
