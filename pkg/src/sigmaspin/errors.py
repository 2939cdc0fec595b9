"""Exception hierarchy shared by all modules."""


class SigmaSpinError(Exception):
    """Base class for every error raised by this package."""


class RadicandOverflow(SigmaSpinError):
    """Too many distinct square roots, or a radicand that cannot be reduced."""


class DivisionByZero(SigmaSpinError, ZeroDivisionError):
    pass


class DegreeOverflow(SigmaSpinError):
    """A monomial exponent exceeded the configured degree cap."""


class DimensionMismatch(SigmaSpinError, ValueError):
    pass


class ZeroSeed(SigmaSpinError, ValueError):
    pass


class DegenerateChain(SigmaSpinError):
    """A t_j trace vanished identically, so the chain stops early."""


class IndexOutOfRange(SigmaSpinError, IndexError):
    pass


class ParameterOutOfRange(SigmaSpinError, ValueError):
    pass


class ConventionBoundary(SigmaSpinError):
    pass


class PoleAtAxis(SigmaSpinError):
    pass


class NearPole(SigmaSpinError, ArithmeticError):
    pass


class NotUnitary(SigmaSpinError, ValueError):
    pass


class GridTooSmall(SigmaSpinError, ValueError):
    pass


class NoDecomposition(SigmaSpinError):
    pass


class NonHolomorphic(SigmaSpinError, ValueError):
    pass


class NegativeExponent(SigmaSpinError, ValueError):
    pass


class ExpressionSyntaxError(SigmaSpinError, SyntaxError):
    """Parse failure; ``position`` is the 0-based offset into the source text."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.position = position
