"""Rational functions in xi, xibar over the radical field.

The denominator is stored factored: a monomial ``xi^a xibar^b`` times powers of
monic, monomial-free polynomial factors.  Sums take the LCM of the factored
denominators, products merge them, and after every operation the numerator is
trial-divided by each denominator factor.  No polynomial GCD is ever computed;
equality is decided by cross-multiplication, so the representation does not
need to be unique.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Mapping

from ..errors import DivisionByZero
from ..exact_scalar import RadicalScalar
from .polynomial import ONE_PLUS_XIXIBAR, Polynomial, render_polynomial

DEFAULT_HINTS: tuple[Polynomial, ...] = (ONE_PLUS_XIXIBAR,)

_VARIABLES = ("xi", "xibar")


@lru_cache(maxsize=4096)
def _power(f: Polynomial, e: int) -> Polynomial:
    return f**e


def _factor_poly(
    poly: Polynomial, hints: Iterable[Polynomial]
) -> tuple[RadicalScalar, tuple[int, int], dict[Polynomial, int]]:
    """Split a nonzero polynomial into scalar, monomial and trial-divided factors."""
    if poly.is_zero():
        raise DivisionByZero("rational function with zero denominator")
    ma, mb = poly.monomial_content()
    if ma or mb:
        poly = poly.shift(-ma, -mb)
    factors: dict[Polynomial, int] = {}
    seen = set()
    for h in hints:
        if h in seen or h.is_constant():
            continue
        seen.add(h)
        while not poly.is_constant():
            q = poly.exact_div(h)
            if q is None:
                break
            factors[h] = factors.get(h, 0) + 1
            poly = q
    if poly.is_constant():
        return poly.coefficient(0, 0), (ma, mb), factors
    lc, rest = poly.monic()
    factors[rest] = factors.get(rest, 0) + 1
    return lc, (ma, mb), factors


class RationalFunction:
    __slots__ = ("num", "_mono", "_factors")

    def __init__(self, num=0, den=1, hints: Iterable[Polynomial] = DEFAULT_HINTS) -> None:
        num = Polynomial.coerce(num)
        den = Polynomial.coerce(den)
        scalar, mono, factors = _factor_poly(den, hints)
        if scalar != RadicalScalar.one():
            num = num * Polynomial.constant(scalar.inverse())
        self._set(*_reduce(num, mono, factors, factors))

    def _set(self, num: Polynomial, mono: tuple[int, int], factors: dict) -> None:
        self.num = num
        self._mono = mono
        self._factors = factors

    @classmethod
    def _raw(cls, num: Polynomial, mono: tuple[int, int], factors: dict, try_factors=None) -> RationalFunction:
        obj = cls.__new__(cls)
        obj._set(*_reduce(num, mono, factors, factors if try_factors is None else try_factors))
        return obj

    @classmethod
    def coerce(cls, value) -> RationalFunction:
        if isinstance(value, RationalFunction):
            return value
        return cls._raw(Polynomial.coerce(value), (0, 0), {}, ())

    @classmethod
    def zero(cls) -> RationalFunction:
        return cls.coerce(0)

    @classmethod
    def one(cls) -> RationalFunction:
        return cls.coerce(1)

    @classmethod
    def xi(cls) -> RationalFunction:
        return cls.coerce(Polynomial.xi())

    @classmethod
    def xibar(cls) -> RationalFunction:
        return cls.coerce(Polynomial.xibar())

    # -- structure -------------------------------------------------------
    @property
    def den(self) -> Polynomial:
        """Expanded denominator polynomial."""
        d = Polynomial.monomial(*self._mono)
        for f, e in self._factors.items():
            d = d * _power(f, e)
        return d

    @property
    def den_factors(self) -> list[tuple[Polynomial, int]]:
        return sorted(self._factors.items(), key=lambda fe: (fe[0].degree(), str(fe[0])))

    @property
    def den_monomial(self) -> tuple[int, int]:
        return self._mono

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self._mono == (0, 0) and not self._factors

    def is_constant(self) -> bool:
        return self.is_polynomial() and self.num.is_constant()

    def constant_value(self) -> RadicalScalar:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num.coefficient(0, 0)

    # -- arithmetic ------------------------------------------------------
    def __neg__(self) -> RationalFunction:
        return RationalFunction._raw(-self.num, self._mono, dict(self._factors), ())

    def __add__(self, other) -> RationalFunction:
        return rf_sum((self, other))

    __radd__ = __add__

    def __sub__(self, other) -> RationalFunction:
        return rf_sum((self, -RationalFunction.coerce(other)))

    def __rsub__(self, other) -> RationalFunction:
        return rf_sum((RationalFunction.coerce(other), -self))

    def __mul__(self, other) -> RationalFunction:
        if not isinstance(other, RationalFunction):
            other = RationalFunction.coerce(other)
        if self.is_zero() or other.is_zero():
            return RationalFunction.zero()
        if self._factors and other._factors:
            self, other = _refined_items([self, other])
        num = self.num * other.num
        mono = (self._mono[0] + other._mono[0], self._mono[1] + other._mono[1])
        factors = dict(self._factors)
        for f, e in other._factors.items():
            factors[f] = factors.get(f, 0) + e
        return RationalFunction._raw(num, mono, factors)

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if self.is_zero():
            raise DivisionByZero("inverse of the zero rational function")
        hints = list(self._factors) + list(DEFAULT_HINTS)
        scalar, mono, factors = _factor_poly(self.num, hints)
        num = self.den * Polynomial.constant(scalar.inverse())
        return RationalFunction._raw(num, mono, factors)

    def __truediv__(self, other) -> RationalFunction:
        return self * RationalFunction.coerce(other).inverse()

    def __rtruediv__(self, other) -> RationalFunction:
        return RationalFunction.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> RationalFunction:
        if n < 0:
            return self.inverse() ** (-n)
        result, base = RationalFunction.one(), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def derivative(self, which: str) -> RationalFunction:
        """Formal partial derivative (Wirtinger derivative) in ``"xi"`` or ``"xibar"``.

        Uses the logarithmic derivative of the factored denominator so each
        factor exponent grows by at most one.
        """
        if which not in _VARIABLES:
            raise ValueError(f"unknown variable {which!r}")
        dnum = self.num.derivative(which)
        # (G, exponent, dG) for every denominator piece with a nonzero derivative
        pieces: list[tuple[Polynomial, int, Polynomial]] = []
        ma, mb = self._mono
        if which == "xi" and ma:
            pieces.append((Polynomial.xi(), ma, Polynomial.one()))
        if which == "xibar" and mb:
            pieces.append((Polynomial.xibar(), mb, Polynomial.one()))
        for f, e in self._factors.items():
            df = f.derivative(which)
            if not df.is_zero():
                pieces.append((f, e, df))
        if not pieces:
            return RationalFunction._raw(dnum, self._mono, dict(self._factors), ())
        prod_all = Polynomial.one()
        for g, _, _ in pieces:
            prod_all = prod_all * g
        num = dnum * prod_all
        for idx, (g, e, dg) in enumerate(pieces):
            others = Polynomial.constant(e) * dg
            for jdx, (h, _, _) in enumerate(pieces):
                if jdx != idx:
                    others = others * h
            num = num - self.num * others
        mono = list(self._mono)
        factors = dict(self._factors)
        grown = []
        for g, _, _ in pieces:
            if g == Polynomial.xi():
                mono[0] += 1
            elif g == Polynomial.xibar():
                mono[1] += 1
            else:
                factors[g] += 1
                grown.append(g)
        return RationalFunction._raw(num, (mono[0], mono[1]), factors, grown)

    def d_xi(self) -> RationalFunction:
        return self.derivative("xi")

    def d_xibar(self) -> RationalFunction:
        return self.derivative("xibar")

    def involution(self) -> RationalFunction:
        """Swap xi <-> xibar and complex-conjugate all coefficients."""
        num = self.num.involution()
        factors: dict[Polynomial, int] = {}
        scale = RadicalScalar.one()
        for f, e in self._factors.items():
            lc, m = f.involution().monic()
            factors[m] = factors.get(m, 0) + e
            scale = scale * lc**e
        if scale != RadicalScalar.one():
            num = num * Polynomial.constant(scale.inverse())
        return RationalFunction._raw(num, (self._mono[1], self._mono[0]), factors, ())

    # -- comparison ------------------------------------------------------
    def equals(self, other) -> bool:
        return rf_equal(self, RationalFunction.coerce(other))

    def __eq__(self, other) -> bool:
        try:
            other = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        return rf_equal(self, other)

    __hash__ = None  # type: ignore[assignment]

    # -- numeric ---------------------------------------------------------
    def evaluate(self, xi, xibar):
        return self.num.evaluate(xi, xibar) / self.evaluate_den(xi, xibar)

    def evaluate_den(self, xi, xibar):
        import numpy as np

        xi = np.asarray(xi, dtype=complex)
        xibar = np.asarray(xibar, dtype=complex)
        d = xi ** self._mono[0] * xibar ** self._mono[1]
        for f, e in self._factors.items():
            d = d * f.evaluate(xi, xibar) ** e
        return d

    # -- text ------------------------------------------------------------
    def render_den(self) -> str:
        parts = []
        ma, mb = self._mono
        if ma:
            parts.append("xi" if ma == 1 else f"xi^{ma}")
        if mb:
            parts.append("xibar" if mb == 1 else f"xibar^{mb}")
        for f, e in self.den_factors:
            parts.append(f"({render_polynomial(f)})" + (f"^{e}" if e > 1 else ""))
        if len(parts) == 1:
            return parts[0]
        return "(" + "*".join(parts) + ")"

    def __str__(self) -> str:
        if self.is_polynomial():
            return render_polynomial(self.num)
        num = render_polynomial(self.num)
        if self.num.n_terms() > 1 or " " in num or "/" in num:
            num = f"({num})"
        return f"{num}/{self.render_den()}"

    def __repr__(self) -> str:
        return f"RationalFunction({str(self)!r})"


def _reduce(
    num: Polynomial, mono: tuple[int, int], factors: dict, try_factors: Iterable[Polynomial]
) -> tuple[Polynomial, tuple[int, int], dict]:
    if num.is_zero():
        return num, (0, 0), {}
    ca, cb = num.monomial_content()
    ca, cb = min(ca, mono[0]), min(cb, mono[1])
    if ca or cb:
        num = num.shift(-ca, -cb)
        mono = (mono[0] - ca, mono[1] - cb)
    for f in list(try_factors):
        e = factors.get(f, 0)
        while e > 0:
            q = num.exact_div(f)
            if q is None:
                break
            num = q
            e -= 1
        if e:
            factors[f] = e
        else:
            factors.pop(f, None)
    return num, mono, factors


@lru_cache(maxsize=8192)
def _split(g: Polynomial, f: Polynomial) -> Polynomial | None:
    """``g / f`` when the monic factor ``f`` divides ``g`` properly."""
    if f.degree() >= g.degree() or f == g:
        return None
    return g.exact_div(f)


def _refine(factor_sets: list[dict[Polynomial, int]]) -> list[dict[Polynomial, int]]:
    """Rewrite factor dicts over a common basis in which no factor divides another."""
    basis = set()
    for fs in factor_sets:
        basis.update(fs)
    if len(basis) < 2:
        return factor_sets
    expansion: dict[Polynomial, dict[Polynomial, int]] = {}
    changed = True
    while changed:
        changed = False
        for g in sorted(basis, key=lambda p: p.degree(), reverse=True):
            for f in basis:
                q = _split(g, f)
                if q is not None:
                    basis.discard(g)
                    basis.add(f)
                    parts = {f: 1}
                    if not q.is_constant():
                        basis.add(q)
                        parts[q] = parts.get(q, 0) + 1
                    expansion[g] = parts
                    changed = True
                    break
            if changed:
                break
    if not expansion:
        return factor_sets

    def expand(p: Polynomial) -> dict[Polynomial, int]:
        if p not in expansion:
            return {p: 1}
        out: dict[Polynomial, int] = {}
        for part, e in expansion[p].items():
            for leaf, k in expand(part).items():
                out[leaf] = out.get(leaf, 0) + e * k
        return out

    result = []
    for fs in factor_sets:
        new: dict[Polynomial, int] = {}
        for p, e in fs.items():
            for leaf, k in expand(p).items():
                new[leaf] = new.get(leaf, 0) + e * k
        result.append(new)
    return result


def _refined_items(items: list[RationalFunction]) -> list[RationalFunction]:
    sets = [t._factors for t in items]
    new_sets = _refine(sets)
    if new_sets is sets:
        return items
    out = []
    for t, fs in zip(items, new_sets):
        if fs is t._factors:
            out.append(t)
            continue
        obj = RationalFunction.__new__(RationalFunction)
        obj._set(t.num, t._mono, fs)
        out.append(obj)
    return out


def _common_den(items: list[RationalFunction]) -> tuple[tuple[int, int], dict[Polynomial, int]]:
    ma = max(t._mono[0] for t in items)
    mb = max(t._mono[1] for t in items)
    factors: dict[Polynomial, int] = {}
    for t in items:
        for f, e in t._factors.items():
            if e > factors.get(f, 0):
                factors[f] = e
    return (ma, mb), factors


def _lifted_num(t: RationalFunction, mono: tuple[int, int], factors: Mapping[Polynomial, int]) -> Polynomial:
    num = t.num
    for f, e in factors.items():
        k = e - t._factors.get(f, 0)
        if k:
            num = num * _power(f, k)
    da, db = mono[0] - t._mono[0], mono[1] - t._mono[1]
    if da or db:
        num = num.shift(da, db)
    return num


def rf_sum(terms: Iterable) -> RationalFunction:
    """Exact sum of rational functions over the LCM of their factored denominators."""
    items = [RationalFunction.coerce(t) for t in terms]
    items = [t for t in items if not t.is_zero()]
    if not items:
        return RationalFunction.zero()
    if len(items) == 1:
        return items[0]
    items = _refined_items(items)
    mono, factors = _common_den(items)
    num = Polynomial.zero()
    for t in items:
        num = num + _lifted_num(t, mono, factors)
    return RationalFunction._raw(num, mono, factors)


def rf_equal(a: RationalFunction, b: RationalFunction) -> bool:
    """True iff ``a.num * b.den == b.num * a.den``.

    Shared denominator factors are cancelled before cross-multiplying.
    """
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    a, b = _refined_items([a, b])
    mono, factors = _common_den([a, b])
    return _lifted_num(a, mono, factors) == _lifted_num(b, mono, factors)
