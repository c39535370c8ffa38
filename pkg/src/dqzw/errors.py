"""Exception types raised across the package."""


class DQZWError(Exception):
    """Base class for all errors raised by dqzw."""


class DimensionMismatch(DQZWError, ValueError):
    pass


class ZeroDivisor(DQZWError, ZeroDivisionError):
    pass


class UndefinedDivision(DQZWError, ZeroDivisionError):
    pass


class DomainError(DQZWError, ValueError):
    pass


class NotAppreciable(DQZWError, ZeroDivisionError):
    pass


class ConsistencyError(DQZWError, ArithmeticError):
    """A quantity that must be real (or structured) by construction is not."""


class SingularMinor(DQZWError, ArithmeticError):
    """A leading principal block of the standard part is (numerically) singular.

    ``order`` is the 1-based size of the offending leading block.
    """

    def __init__(self, order: int, pivot: float = 0.0):
        self.order = order
        self.pivot = pivot
        super().__init__(f"leading {order}x{order} minor is singular (|pivot| = {pivot:.3e})")


class RankDeficient(DQZWError, ArithmeticError):
    def __init__(self, index: int, value: float = 0.0):
        self.index = index
        self.value = value
        super().__init__(f"R_s[{index},{index}] = {value:.3e} is below tolerance")


class DegenerateSpectrum(DQZWError, ArithmeticError):
    def __init__(self, k: int, l: int, gap: float):
        self.pair = (k, l)
        self.gap = gap
        super().__init__(f"singular values {k} and {l} coincide (gap {gap:.3e})")


class ConvergenceFailure(DQZWError, ArithmeticError):
    pass


class NotSquare(DQZWError, ValueError):
    pass


class BadKey(DQZWError, ValueError):
    pass


class ZeroImage(DQZWError, ValueError):
    pass


class BadParameters(DQZWError, ValueError):
    pass


class FormatError(DQZWError, ValueError):
    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)


class MethodError(DQZWError):
    """Wraps a factorization failure with the watermarking method that hit it."""

    def __init__(self, method: str, cause: Exception):
        self.method = method
        self.cause = cause
        super().__init__(f"{method}: {cause}")
