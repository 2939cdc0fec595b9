"""Independent sympy oracle for exact results.

Our rendered strings are valid sympy input once ``^`` becomes ``**``; xi and
xibar are independent real symbols so that conjugation only flips ``I``.
"""

from __future__ import annotations

import sympy as sp

xi, xibar = sp.symbols("xi xibar", real=True)
NAMES = {"xi": xi, "xibar": xibar, "i": sp.I, "sqrt": sp.sqrt}


def to_sympy(obj) -> sp.Expr:
    return sp.sympify(str(obj).replace("^", "**"), locals=NAMES)


def same(a, b) -> bool:
    """Exact equality of two expressions (ours or sympy's) as rational functions."""
    ea = a if isinstance(a, sp.Basic) else to_sympy(a)
    eb = b if isinstance(b, sp.Basic) else to_sympy(b)
    return sp.simplify(sp.together(ea - eb)) == 0


def dagger_expr(e: sp.Expr) -> sp.Expr:
    """Swap xi <-> xibar and conjugate the coefficients."""
    return sp.conjugate(e).xreplace({xi: xibar, xibar: xi})


def matrix(m) -> sp.Matrix:
    return sp.Matrix([[to_sympy(e) for e in row] for row in m.entries])


def chain(seed: list[sp.Expr]) -> list[sp.Matrix]:
    """Projectors of the solution chain, built directly in sympy."""
    n = len(seed)
    f = sp.Matrix(seed)
    out = []
    for _ in range(n):
        fd = f.applyfunc(dagger_expr).T
        P = (f * fd / (fd * f)[0, 0]).applyfunc(sp.cancel)
        out.append(P)
        df = f.diff(xi)
        f = ((sp.eye(n) - P) * df).applyfunc(sp.cancel)
    return out
