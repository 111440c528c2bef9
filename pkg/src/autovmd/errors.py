"""Exception types raised by autovmd."""


class AutoVmdError(Exception):
    """Base class for all package errors."""


class EmptySignal(AutoVmdError):
    pass


class NonFinite(AutoVmdError):
    pass


class BadPadFraction(AutoVmdError):
    pass


class LengthMismatch(AutoVmdError):
    pass


class UnknownSignal(AutoVmdError):
    pass


class ParseError(AutoVmdError):
    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class EmptyFile(AutoVmdError):
    pass


class GridTooSmall(AutoVmdError):
    pass


class OrderOutOfRange(AutoVmdError):
    pass


class NonPositiveAlpha(AutoVmdError):
    pass


class SingularSystem(AutoVmdError):
    pass


class NonFiniteIterate(AutoVmdError):
    """A non-finite value appeared in the baseline iterate."""

    def __init__(self, iteration):
        super().__init__(f"non-finite baseline value at iteration {iteration}")
        self.iteration = iteration


class MaxIterExceeded(AutoVmdError):
    pass


class EmptyInput(AutoVmdError):
    pass


class NonPositiveBandwidth(AutoVmdError):
    pass


class IndexOutOfRange(AutoVmdError):
    pass


class ShapeMismatch(AutoVmdError):
    pass


class ConfigError(AutoVmdError):
    pass


class DegenerateInput(AutoVmdError):
    pass


class ZeroSource(AutoVmdError):
    pass


class CountMismatch(LengthMismatch):
    """Center lists of different length were compared."""

    def __init__(self, n_ours, n_reference):
        super().__init__(f"count mismatch: {n_ours} vs {n_reference}")
        self.n_ours = n_ours
        self.n_reference = n_reference


class MissingTraces(AutoVmdError):
    pass
