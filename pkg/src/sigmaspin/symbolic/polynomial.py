"""Bivariate polynomials in the independent formal variables xi and xibar.

Coefficients live in the radical field of :mod:`sigmaspin.exact_scalar`.  The
storage is flat, ``{(a, b, d, part): rational}`` meaning
``rational * i**part * sqrt(d) * xi**a * xibar**b``; :attr:`Polynomial.terms`
gives the ``Monomial -> RadicalScalar`` view.
"""

from __future__ import annotations

from typing import Iterator, Mapping, NamedTuple

import numpy as np
from gmpy2 import mpq

from ..errors import DegreeOverflow, DivisionByZero
from ..exact_scalar import RadicalScalar, radical_product, render_scalar

DEGREE_CAP = 512

_ZERO = mpq(0)


class Monomial(NamedTuple):
    xi_power: int
    xibar_power: int

    def degree(self) -> int:
        return self.xi_power + self.xibar_power


def _order_key(m: tuple[int, int]) -> tuple[int, int]:
    # graded lexicographic with xi > xibar
    return (m[0] + m[1], m[0])


def _check_cap(flat: Mapping) -> None:
    for a, b, _, _ in flat:
        if a > DEGREE_CAP or b > DEGREE_CAP:
            raise DegreeOverflow(f"exponent above degree cap {DEGREE_CAP}")


class Polynomial:
    __slots__ = ("_flat", "_hash", "_grouped")

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None) -> None:
        flat: dict = {}
        for (a, b), c in (terms or {}).items():
            if a < 0 or b < 0:
                raise ValueError("negative exponent")
            for (d, part), v in RadicalScalar.coerce(c)._flat.items():
                key = (int(a), int(b), d, part)
                flat[key] = flat.get(key, _ZERO) + v
        self._flat = {k: v for k, v in flat.items() if v}
        _check_cap(self._flat)
        self._hash = None
        self._grouped = None

    @classmethod
    def _from_flat(cls, flat: dict) -> Polynomial:
        obj = cls.__new__(cls)
        obj._flat = flat
        obj._hash = None
        obj._grouped = None
        return obj

    @classmethod
    def constant(cls, c) -> Polynomial:
        c = RadicalScalar.coerce(c)
        return cls._from_flat({(0, 0, d, p): v for (d, p), v in c._flat.items()})

    @classmethod
    def monomial(cls, a: int, b: int, c=1) -> Polynomial:
        c = RadicalScalar.coerce(c)
        return cls._from_flat({(a, b, d, p): v for (d, p), v in c._flat.items()})

    @classmethod
    def xi(cls) -> Polynomial:
        return cls.monomial(1, 0)

    @classmethod
    def xibar(cls) -> Polynomial:
        return cls.monomial(0, 1)

    @classmethod
    def zero(cls) -> Polynomial:
        return cls._from_flat({})

    @classmethod
    def one(cls) -> Polynomial:
        return cls.monomial(0, 0)

    @classmethod
    def coerce(cls, value) -> Polynomial:
        if isinstance(value, Polynomial):
            return value
        return cls.constant(value)

    # -- views -----------------------------------------------------------
    def _groups(self) -> dict[tuple[int, int], dict]:
        if self._grouped is None:
            g: dict = {}
            for (a, b, d, p), v in self._flat.items():
                g.setdefault((a, b), {})[(d, p)] = v
            self._grouped = g
        return self._grouped

    @property
    def terms(self) -> dict[Monomial, RadicalScalar]:
        return {
            Monomial(*m): RadicalScalar._from_flat(dict(c))
            for m, c in sorted(self._groups().items(), key=lambda kv: _order_key(kv[0]), reverse=True)
        }

    def coefficient(self, a: int, b: int) -> RadicalScalar:
        return RadicalScalar._from_flat(dict(self._groups().get((a, b), {})))

    def monomials(self) -> list[Monomial]:
        return [Monomial(*m) for m in sorted(self._groups(), key=_order_key, reverse=True)]

    def is_zero(self) -> bool:
        return not self._flat

    def __bool__(self) -> bool:
        return bool(self._flat)

    def is_constant(self) -> bool:
        return all(a == 0 and b == 0 for a, b, _, _ in self._flat)

    def is_holomorphic(self) -> bool:
        return all(b == 0 for _, b, _, _ in self._flat)

    def degree(self) -> int:
        return max((a + b for a, b, _, _ in self._flat), default=-1)

    def degrees(self) -> tuple[int, int]:
        if not self._flat:
            return (-1, -1)
        return max(k[0] for k in self._flat), max(k[1] for k in self._flat)

    def n_terms(self) -> int:
        return len(self._groups())

    def leading_monomial(self) -> tuple[int, int]:
        return max(self._groups(), key=_order_key)

    def leading_coefficient(self) -> RadicalScalar:
        return self.coefficient(*self.leading_monomial())

    def monomial_content(self) -> tuple[int, int]:
        """Largest (a, b) such that xi^a xibar^b divides every term."""
        if not self._flat:
            return (0, 0)
        return min(k[0] for k in self._flat), min(k[1] for k in self._flat)

    # -- comparison ------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            try:
                other = Polynomial.coerce(other)
            except TypeError:
                return NotImplemented
        return self._flat == other._flat

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._flat.items()))
        return self._hash

    # -- arithmetic ------------------------------------------------------
    def __neg__(self) -> Polynomial:
        return Polynomial._from_flat({k: -v for k, v in self._flat.items()})

    def __add__(self, other) -> Polynomial:
        other = Polynomial.coerce(other)
        out = dict(self._flat)
        for k, v in other._flat.items():
            s = out.get(k, _ZERO) + v
            if s:
                out[k] = s
            else:
                del out[k]
        return Polynomial._from_flat(out)

    __radd__ = __add__

    def __sub__(self, other) -> Polynomial:
        other = Polynomial.coerce(other)
        out = dict(self._flat)
        for k, v in other._flat.items():
            s = out.get(k, _ZERO) - v
            if s:
                out[k] = s
            else:
                del out[k]
        return Polynomial._from_flat(out)

    def __rsub__(self, other) -> Polynomial:
        return Polynomial.coerce(other) - self

    def __mul__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            other = Polynomial.coerce(other)
        if not self._flat or not other._flat:
            return Polynomial.zero()
        out: dict = {}
        get = out.get
        rp = radical_product
        for (a1, b1, d1, p1), v1 in self._flat.items():
            for (a2, b2, d2, p2), v2 in other._flat.items():
                if d1 == 1:
                    g, d = 1, d2
                elif d2 == 1:
                    g, d = 1, d1
                else:
                    g, d = rp(d1, d2)
                v = v1 * v2
                if g != 1:
                    v = v * g
                if p1 & p2:
                    v = -v
                key = (a1 + a2, b1 + b2, d, p1 ^ p2)
                out[key] = get(key, _ZERO) + v
        out = {k: v for k, v in out.items() if v}
        _check_cap(out)
        return Polynomial._from_flat(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Polynomial:
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Polynomial.one(), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, da: int, db: int) -> Polynomial:
        """Multiply by xi^da xibar^db (negative shifts must stay in range)."""
        out = {(a + da, b + db, d, p): v for (a, b, d, p), v in self._flat.items()}
        if any(k[0] < 0 or k[1] < 0 for k in out):
            raise ValueError("shift produces a negative exponent")
        _check_cap(out)
        return Polynomial._from_flat(out)

    def scale(self, c) -> Polynomial:
        return self * Polynomial.constant(c)

    def derivative(self, which: str) -> Polynomial:
        """Formal partial derivative with respect to ``"xi"`` or ``"xibar"``."""
        out: dict = {}
        if which == "xi":
            for (a, b, d, p), v in self._flat.items():
                if a:
                    out[(a - 1, b, d, p)] = v * a
        elif which == "xibar":
            for (a, b, d, p), v in self._flat.items():
                if b:
                    out[(a, b - 1, d, p)] = v * b
        else:
            raise ValueError(f"unknown variable {which!r}")
        return Polynomial._from_flat(out)

    def involution(self) -> Polynomial:
        """Swap xi <-> xibar and conjugate every coefficient."""
        return Polynomial._from_flat(
            {(b, a, d, p): (-v if p else v) for (a, b, d, p), v in self._flat.items()}
        )

    def exact_div(self, divisor: Polynomial) -> Polynomial | None:
        """Quotient if ``divisor`` divides ``self`` exactly, else ``None``."""
        if divisor.is_zero():
            raise DivisionByZero("polynomial division by zero")
        if not self._flat:
            return Polynomial.zero()
        lm = divisor.leading_monomial()
        lc = divisor.leading_coefficient()
        lc_inv = None if lc == RadicalScalar.one() else lc.inverse()
        da, db = self.degrees()
        if lm[0] > da or lm[1] > db:
            return None
        rem = self
        quot: dict = {}
        while rem._flat:
            m = rem.leading_monomial()
            if m[0] < lm[0] or m[1] < lm[1]:
                return None
            c = rem.coefficient(*m)
            if lc_inv is not None:
                c = c * lc_inv
            term = Polynomial.monomial(m[0] - lm[0], m[1] - lm[1], c)
            for k, v in term._flat.items():
                quot[k] = quot.get(k, _ZERO) + v
            rem = rem - term * divisor
        return Polynomial._from_flat({k: v for k, v in quot.items() if v})

    def monic(self) -> tuple[RadicalScalar, Polynomial]:
        """Split into (leading coefficient, monic polynomial)."""
        lc = self.leading_coefficient()
        if lc == RadicalScalar.one():
            return lc, self
        return lc, self * Polynomial.constant(lc.inverse())

    # -- numeric ---------------------------------------------------------
    def compile(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Exponent arrays and complex coefficients for float evaluation."""
        groups = self._groups()
        mons = sorted(groups)
        a = np.array([m[0] for m in mons], dtype=int)
        b = np.array([m[1] for m in mons], dtype=int)
        c = np.array([complex(RadicalScalar._from_flat(dict(groups[m]))) for m in mons], dtype=complex)
        return a, b, c

    def evaluate(self, xi, xibar):
        """Evaluate at complex points (scalars or arrays), Horner in xi then xibar."""
        xi = np.asarray(xi, dtype=complex)
        xibar = np.asarray(xibar, dtype=complex)
        groups = self._groups()
        if not groups:
            return np.zeros(np.broadcast(xi, xibar).shape, dtype=complex)
        by_a: dict[int, dict[int, complex]] = {}
        for (a, b), c in groups.items():
            by_a.setdefault(a, {})[b] = complex(RadicalScalar._from_flat(dict(c)))
        amax = max(by_a)
        acc = np.zeros(np.broadcast(xi, xibar).shape, dtype=complex)
        for a in range(amax, -1, -1):
            inner = by_a.get(a)
            val = np.zeros_like(acc)
            if inner:
                for b in range(max(inner), -1, -1):
                    val = val * xibar + inner.get(b, 0.0)
            acc = acc * xi + val
        return acc

    # -- text ------------------------------------------------------------
    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"

    def __str__(self) -> str:
        return render_polynomial(self)

    def __iter__(self) -> Iterator:
        return iter(self.terms.items())


def _render_monomial(a: int, b: int) -> str:
    parts = []
    if a:
        parts.append("xi" if a == 1 else f"xi^{a}")
    if b:
        parts.append("xibar" if b == 1 else f"xibar^{b}")
    return "*".join(parts)


def render_polynomial(p: Polynomial) -> str:
    """Deterministic text form, graded lexicographic with xi before xibar."""
    if p.is_zero():
        return "0"
    out = ""
    for m, c in p.terms.items():
        mono = _render_monomial(*m)
        ctext = render_scalar(c)
        neg = False
        single = len(c._flat) == 1
        if single and ctext.startswith("-"):
            neg, ctext = True, ctext[1:]
        if mono:
            if ctext == "1":
                body = mono
            elif single and ("/" not in ctext or ctext.startswith("(")):
                body = f"{ctext}*{mono}"
            else:
                body = f"({ctext})*{mono}"
        else:
            body = ctext if single else f"({ctext})"
        if not out:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out


XI = Polynomial.xi()
XIBAR = Polynomial.xibar()
ONE_PLUS_XIXIBAR = Polynomial({(0, 0): 1, (1, 1): 1})
