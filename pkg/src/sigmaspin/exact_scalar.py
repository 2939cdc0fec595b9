"""Exact scalars: rationals, Gaussian rationals and Q(i)-combinations of square roots.

A :class:`RadicalScalar` represents ``sum_d c_d * sqrt(d)`` where every ``d`` is a
distinct squarefree positive integer (``d = 1`` is the rational part) and every
``c_d`` is a Gaussian rational.  The canonical form drops zero coefficients, so
structural equality coincides with value equality.

Internally the coefficients are kept flat, keyed by ``(d, part)`` with
``part = 0`` for the real and ``part = 1`` for the imaginary component.  The
polynomial layer reuses this layout for its inner loops.
"""

from __future__ import annotations

import math
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping, Union

import gmpy2
from gmpy2 import mpq

from .errors import DivisionByZero, RadicandOverflow

BigRational = type(mpq(0))

FACTOR_BOUND = 10**6
RADICAND_LIMIT = 64

_ZERO = mpq(0)
_ONE = mpq(1)


def to_rational(value) -> BigRational:
    """Coerce ints, Fractions, mpq and ``"a/b"`` strings to an exact rational."""
    if isinstance(value, BigRational):
        return value
    if isinstance(value, bool):
        return mpq(int(value))
    if isinstance(value, (int, Rational)):
        return mpq(value.numerator, value.denominator) if not isinstance(value, int) else mpq(value)
    if isinstance(value, str):
        return mpq(value.strip())
    if type(value).__name__ == "mpz":
        return mpq(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


@lru_cache(maxsize=None)
def squarefree_decompose(n: int, bound: int = FACTOR_BOUND) -> tuple[int, int]:
    """Return ``(g, d)`` with ``n == g*g*d`` and ``d`` squarefree.

    Trial division runs up to ``bound``; a leftover cofactor is classified with
    a probabilistic primality test and a perfect-square test.
    """
    if n <= 0:
        raise ValueError("radicand must be a positive integer")
    g, d, m = 1, 1, n
    p = 2
    while p <= bound and p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            g *= p ** (e // 2)
            if e % 2:
                d *= p
        p += 1 if p == 2 else 2
    if m == 1:
        return g, d
    if p * p > m or gmpy2.is_prime(m):
        return g, d * m
    if gmpy2.is_square(m):
        return g * int(gmpy2.isqrt(m)), d
    # every prime factor of m exceeds the bound; below bound**3 it must be p*q
    if m < bound**3:
        return g, d * m
    raise RadicandOverflow(f"cannot extract the square part of {n} within the factorisation bound")


@lru_cache(maxsize=None)
def radical_product(d1: int, d2: int) -> tuple[int, int]:
    """``sqrt(d1)*sqrt(d2) == g*sqrt(d)`` for squarefree ``d1``, ``d2``."""
    g = math.gcd(d1, d2)
    return g, (d1 // g) * (d2 // g)


class GaussianRational:
    """Exact complex number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0) -> None:
        self.re = to_rational(re)
        self.im = to_rational(im)

    @classmethod
    def coerce(cls, value) -> GaussianRational:
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, tuple):
            return cls(*value)
        return cls(value)

    def __repr__(self) -> str:
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"({self.im})*i"
        return f"{self.re} + ({self.im})*i"

    def __eq__(self, other) -> bool:
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __neg__(self) -> GaussianRational:
        return GaussianRational(-self.re, -self.im)

    def __add__(self, other) -> GaussianRational:
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other) -> GaussianRational:
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other) -> GaussianRational:
        return GaussianRational.coerce(other) - self

    def __mul__(self, other) -> GaussianRational:
        other = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def norm(self) -> BigRational:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> GaussianRational:
        n = self.norm()
        if not n:
            raise DivisionByZero("inverse of zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other) -> GaussianRational:
        return self * GaussianRational.coerce(other).inverse()

    def __rtruediv__(self, other) -> GaussianRational:
        return GaussianRational.coerce(other) * self.inverse()

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))


ScalarLike = Union["RadicalScalar", GaussianRational, int, BigRational, Rational]


def _flat_mul(a: Mapping, b: Mapping) -> dict:
    out: dict = {}
    for (d1, p1), v1 in a.items():
        for (d2, p2), v2 in b.items():
            g, d = radical_product(d1, d2)
            v = v1 * v2 * g
            if p1 & p2:
                v = -v
            key = (d, p1 ^ p2)
            out[key] = out.get(key, _ZERO) + v
    return {k: v for k, v in out.items() if v}


class RadicalScalar:
    """Exact element of Q(i)(sqrt(d1), sqrt(d2), ...).

    >>> RadicalScalar.sqrt(2) * RadicalScalar.sqrt(3)
    RadicalScalar('sqrt(6)')
    """

    __slots__ = ("_flat", "_hash")

    def __init__(self, terms: Mapping[int, object] | object = None) -> None:
        if terms is not None and not isinstance(terms, Mapping):
            terms = {1: terms}
        flat: dict = {}
        for d, c in (terms or {}).items():
            g, sd = squarefree_decompose(int(d))
            c = GaussianRational.coerce(c)
            for part, v in ((0, c.re), (1, c.im)):
                if v:
                    flat[(sd, part)] = flat.get((sd, part), _ZERO) + v * g
        self._flat = {k: v for k, v in flat.items() if v}
        self._hash = None

    @classmethod
    def _from_flat(cls, flat: dict) -> RadicalScalar:
        obj = cls.__new__(cls)
        obj._flat = flat
        obj._hash = None
        return obj

    @classmethod
    def coerce(cls, value) -> RadicalScalar:
        if isinstance(value, RadicalScalar):
            return value
        if isinstance(value, GaussianRational):
            return cls({1: value})
        if isinstance(value, complex):
            raise TypeError("floating complex values are not exact")
        return cls({1: to_rational(value)})

    @classmethod
    def zero(cls) -> RadicalScalar:
        return cls._from_flat({})

    @classmethod
    def one(cls) -> RadicalScalar:
        return cls._from_flat({(1, 0): _ONE})

    @classmethod
    def imag_unit(cls) -> RadicalScalar:
        return cls._from_flat({(1, 1): _ONE})

    @classmethod
    def sqrt(cls, n) -> RadicalScalar:
        """Positive square root of a nonnegative rational."""
        q = to_rational(n)
        if q < 0:
            raise ValueError("sqrt of a negative rational; multiply by i explicitly")
        if not q:
            return cls.zero()
        # sqrt(a/b) = sqrt(a*b)/b
        num, den = int(q.numerator), int(q.denominator)
        g, d = squarefree_decompose(num * den)
        return cls._from_flat({(d, 0): mpq(g, den)})

    # -- views -----------------------------------------------------------
    @property
    def terms(self) -> dict[int, GaussianRational]:
        out: dict[int, GaussianRational] = {}
        for (d, part), v in sorted(self._flat.items()):
            c = out.get(d, GaussianRational())
            out[d] = c + (GaussianRational(v, 0) if part == 0 else GaussianRational(0, v))
        return out

    def radicands(self) -> set[int]:
        return {d for d, _ in self._flat}

    def rational_part(self) -> GaussianRational:
        return GaussianRational(self._flat.get((1, 0), _ZERO), self._flat.get((1, 1), _ZERO))

    def is_zero(self) -> bool:
        return not self._flat

    def is_rational(self) -> bool:
        return all(k == (1, 0) for k in self._flat)

    def is_real(self) -> bool:
        return all(part == 0 for _, part in self._flat)

    def __bool__(self) -> bool:
        return bool(self._flat)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RadicalScalar):
            try:
                other = RadicalScalar.coerce(other)
            except TypeError:
                return NotImplemented
        return self._flat == other._flat

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._flat.items()))
        return self._hash

    # -- arithmetic ------------------------------------------------------
    def __neg__(self) -> RadicalScalar:
        return RadicalScalar._from_flat({k: -v for k, v in self._flat.items()})

    def __add__(self, other) -> RadicalScalar:
        other = RadicalScalar.coerce(other)
        out = dict(self._flat)
        for k, v in other._flat.items():
            s = out.get(k, _ZERO) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return RadicalScalar._from_flat(out)

    __radd__ = __add__

    def __sub__(self, other) -> RadicalScalar:
        return self + (-RadicalScalar.coerce(other))

    def __rsub__(self, other) -> RadicalScalar:
        return RadicalScalar.coerce(other) - self

    def __mul__(self, other) -> RadicalScalar:
        other = RadicalScalar.coerce(other)
        out = _flat_mul(self._flat, other._flat)
        if len({d for d, _ in out}) > RADICAND_LIMIT:
            raise RadicandOverflow(f"more than {RADICAND_LIMIT} distinct radicands")
        return RadicalScalar._from_flat(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> RadicalScalar:
        if n < 0:
            return self.inverse() ** (-n)
        result, base = RadicalScalar.one(), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> RadicalScalar:
        """Complex conjugate; every sqrt(d) is real and positive, so radicands are fixed."""
        return RadicalScalar._from_flat({k: (-v if k[1] else v) for k, v in self._flat.items()})

    def _flip_prime(self, p: int) -> RadicalScalar:
        return RadicalScalar._from_flat({k: (-v if k[0] % p == 0 else v) for k, v in self._flat.items()})

    def inverse(self) -> RadicalScalar:
        """Multiplicative inverse via a tower of sign-flipped conjugates.

        Flipping the sign of every sqrt(d) with ``p | d`` is a field automorphism
        for each prime ``p``; multiplying by the flipped copy removes ``p`` from
        all radicands of the denominator.
        """
        if not self._flat:
            raise DivisionByZero("inverse of zero")
        num = RadicalScalar.one()
        den = self
        while True:
            primes = _prime_divisors_of_radicands(den.radicands())
            if not primes:
                break
            conj = den._flip_prime(primes[0])
            num = num * conj
            den = den * conj
        inv = den.rational_part().inverse()
        return num * RadicalScalar({1: inv})

    def __truediv__(self, other) -> RadicalScalar:
        return self * RadicalScalar.coerce(other).inverse()

    def __rtruediv__(self, other) -> RadicalScalar:
        return RadicalScalar.coerce(other) * self.inverse()

    # -- numeric ---------------------------------------------------------
    def __complex__(self) -> complex:
        total = 0j
        for (d, part), v in self._flat.items():
            x = float(v) * math.sqrt(d)
            total += complex(0.0, x) if part else complex(x, 0.0)
        return total

    def __float__(self) -> float:
        if not self.is_real():
            raise TypeError("scalar has an imaginary part")
        return complex(self).real

    # -- text ------------------------------------------------------------
    def __repr__(self) -> str:
        return f"RadicalScalar({str(self)!r})"

    def __str__(self) -> str:
        return render_scalar(self)


def _prime_divisors_of_radicands(radicands: Iterable[int]) -> list[int]:
    primes: set[int] = set()
    for d in radicands:
        if d == 1:
            continue
        m, p = d, 2
        while p * p <= m:
            while m % p == 0:
                primes.add(p)
                m //= p
            p += 1
        if m > 1:
            primes.add(m)
    return sorted(primes)


def _render_rational(v: BigRational) -> str:
    return str(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def render_scalar(a: RadicalScalar) -> str:
    """Render as ``a/b + (c/d)*i + (e/f)*sqrt(n) + ...`` in a parseable grammar."""
    if not a._flat:
        return "0"
    pieces: list[tuple[bool, str]] = []
    for (d, part), v in sorted(a._flat.items()):
        neg = v < 0
        mag = -v if neg else v
        factors = []
        if mag != 1 or (d == 1 and part == 0):
            txt = _render_rational(mag)
            factors.append(f"({txt})" if "/" in txt and (part or d != 1) else txt)
        if part:
            factors.append("i")
        if d != 1:
            factors.append(f"sqrt({d})")
        pieces.append((neg, "*".join(factors)))
    out = ("-" if pieces[0][0] else "") + pieces[0][1]
    for neg, txt in pieces[1:]:
        out += (" - " if neg else " + ") + txt
    return out


def as_scalar(value) -> RadicalScalar:
    return RadicalScalar.coerce(value)


I = RadicalScalar.imag_unit()
