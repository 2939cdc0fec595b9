"""Dense vectors and matrices of rational functions."""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

import numpy as np

from ..errors import DimensionMismatch
from .polynomial import Polynomial
from .rational import RationalFunction, _common_den, _lifted_num, rf_sum

RF = RationalFunction


def _rf(x) -> RationalFunction:
    return x if isinstance(x, RationalFunction) else RationalFunction.coerce(x)


class VectorRF:
    __slots__ = ("entries",)

    def __init__(self, entries: Iterable) -> None:
        self.entries = tuple(_rf(e) for e in entries)
        if not self.entries:
            raise DimensionMismatch("empty vector")

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> RationalFunction:
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    @classmethod
    def zeros(cls, n: int) -> VectorRF:
        return cls([0] * n)

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def map(self, fn: Callable[[RationalFunction], RationalFunction]) -> VectorRF:
        return VectorRF(fn(e) for e in self.entries)

    def __add__(self, other: VectorRF) -> VectorRF:
        _check_same(self.dim, other.dim)
        return VectorRF(a + b for a, b in zip(self.entries, other.entries))

    def __sub__(self, other: VectorRF) -> VectorRF:
        _check_same(self.dim, other.dim)
        return VectorRF(a - b for a, b in zip(self.entries, other.entries))

    def __neg__(self) -> VectorRF:
        return self.map(lambda e: -e)

    def scale(self, c) -> VectorRF:
        c = _rf(c)
        return self.map(lambda e: e * c)

    def derivative(self, which: str) -> VectorRF:
        return self.map(lambda e: e.derivative(which))

    def dagger_dot(self, other: VectorRF) -> RationalFunction:
        """``self^dagger . other`` with the involution applied to ``self``."""
        _check_same(self.dim, other.dim)
        return rf_sum(a.involution() * b for a, b in zip(self.entries, other.entries))

    def norm2(self) -> RationalFunction:
        return self.dagger_dot(self)

    def equals(self, other: VectorRF) -> bool:
        return self.dim == other.dim and all(a.equals(b) for a, b in zip(self.entries, other.entries))

    def evaluate(self, xi, xibar) -> np.ndarray:
        return np.array([e.evaluate(xi, xibar) for e in self.entries])

    def __str__(self) -> str:
        return "(" + ", ".join(str(e) for e in self.entries) + ")"

    def __repr__(self) -> str:
        return f"VectorRF{self}"


class MatrixRF:
    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence]) -> None:
        rows = [tuple(_rf(e) for e in row) for row in entries]
        if not rows or not rows[0]:
            raise DimensionMismatch("empty matrix")
        if any(len(r) != len(rows[0]) for r in rows):
            raise DimensionMismatch("ragged matrix")
        self.entries = tuple(rows)
        self.rows = len(rows)
        self.cols = len(rows[0])

    @classmethod
    def identity(cls, n: int) -> MatrixRF:
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> MatrixRF:
        return cls([[0] * (n if m is None else m) for _ in range(n)])

    @classmethod
    def diagonal(cls, values: Sequence) -> MatrixRF:
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> RationalFunction:
        i, j = ij
        return self.entries[i][j]

    def map(self, fn: Callable[[RationalFunction], RationalFunction]) -> MatrixRF:
        return MatrixRF([[fn(e) for e in row] for row in self.entries])

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def nonzero_entries(self) -> list[tuple[int, int]]:
        return [(i, j) for i, row in enumerate(self.entries) for j, e in enumerate(row) if not e.is_zero()]

    def equals(self, other: MatrixRF) -> bool:
        if self.shape != other.shape:
            return False
        return all(
            a.equals(b) for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb)
        )

    def __add__(self, other: MatrixRF) -> MatrixRF:
        _check_same(self.shape, other.shape)
        return MatrixRF([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)])

    def __sub__(self, other: MatrixRF) -> MatrixRF:
        _check_same(self.shape, other.shape)
        return MatrixRF([[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)])

    def __neg__(self) -> MatrixRF:
        return self.map(lambda e: -e)

    def scale(self, c) -> MatrixRF:
        c = _rf(c)
        if c.is_zero():
            return MatrixRF.zeros(self.rows, self.cols)
        return self.map(lambda e: e * c)

    def __matmul__(self, other):
        if isinstance(other, VectorRF):
            if self.cols != other.dim:
                raise DimensionMismatch(f"{self.shape} @ vector of length {other.dim}")
            return VectorRF(
                rf_sum(a * b for a, b in zip(row, other.entries) if not a.is_zero() and not b.is_zero())
                for row in self.entries
            )
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        cols = list(zip(*other.entries))
        return MatrixRF(
            [
                [
                    rf_sum(a * b for a, b in zip(row, col) if not a.is_zero() and not b.is_zero())
                    for col in cols
                ]
                for row in self.entries
            ]
        )

    def commutator(self, other: MatrixRF) -> MatrixRF:
        return (self @ other) - (other @ self)

    def trace(self) -> RationalFunction:
        if self.rows != self.cols:
            raise DimensionMismatch("trace of a non-square matrix")
        return rf_sum(self.entries[i][i] for i in range(self.rows))

    def transpose(self) -> MatrixRF:
        return MatrixRF([list(col) for col in zip(*self.entries)])

    def dagger(self) -> MatrixRF:
        """Transpose, then swap xi <-> xibar and conjugate coefficients entry-wise."""
        return MatrixRF([[e.involution() for e in col] for col in zip(*self.entries)])

    def is_hermitian(self) -> bool:
        return self.equals(self.dagger())

    def derivative(self, which: str) -> MatrixRF:
        return self.map(lambda e: e.derivative(which))

    def apply(self, v: VectorRF) -> VectorRF:
        return self @ v

    def evaluate(self, xi, xibar) -> np.ndarray:
        """Numeric values; extra leading axes broadcast over the sample arrays."""
        vals = np.array([[e.evaluate(xi, xibar) for e in row] for row in self.entries])
        return np.moveaxis(vals, (0, 1), (-2, -1)) if vals.ndim > 2 else vals

    def __str__(self) -> str:
        return "[" + ",\n ".join("[" + ", ".join(str(e) for e in row) + "]" for row in self.entries) + "]"

    def __repr__(self) -> str:
        return f"MatrixRF({self.rows}x{self.cols})"


def outer(u: VectorRF, v: VectorRF) -> MatrixRF:
    """``u (x) v^dagger``."""
    vd = [e.involution() for e in v.entries]
    return MatrixRF([[a * b for b in vd] for a in u.entries])


def commutator(a: MatrixRF, b: MatrixRF) -> MatrixRF:
    return a.commutator(b)


def mat_sum(mats: Iterable[MatrixRF]) -> MatrixRF:
    mats = list(mats)
    if not mats:
        raise DimensionMismatch("empty sum")
    shape = mats[0].shape
    for m in mats[1:]:
        _check_same(shape, m.shape)
    return MatrixRF(
        [[rf_sum(m.entries[i][j] for m in mats) for j in range(shape[1])] for i in range(shape[0])]
    )


def determinant(m: MatrixRF) -> RationalFunction:
    """Exact determinant: clear denominators, then fraction-free Bareiss elimination."""
    if m.rows != m.cols:
        raise DimensionMismatch("determinant of a non-square matrix")
    n = m.rows
    flat = [e for row in m.entries for e in row if not e.is_zero()]
    if not flat:
        return RationalFunction.zero()
    mono, factors = _common_den(flat)
    rows = [[_lifted_num(e, mono, factors) for e in row] for row in m.entries]
    sign = 1
    prev = Polynomial.one()
    for k in range(n - 1):
        if rows[k][k].is_zero():
            swap = next((r for r in range(k + 1, n) if not rows[r][k].is_zero()), None)
            if swap is None:
                return RationalFunction.zero()
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                q = (rows[i][j] * rows[k][k] - rows[i][k] * rows[k][j]).exact_div(prev)
                if q is None:
                    raise ArithmeticError("Bareiss division was not exact")
                rows[i][j] = q
        prev = rows[k][k]
    det_num = rows[n - 1][n - 1] if sign > 0 else -rows[n - 1][n - 1]
    # every row carried the common denominator once
    return RationalFunction._raw(
        det_num, (mono[0] * n, mono[1] * n), {f: e * n for f, e in factors.items()}
    )


def _check_same(a, b) -> None:
    if a != b:
        raise DimensionMismatch(f"shape mismatch: {a} vs {b}")
