"""Exception types shared across the package."""


class MutselError(Exception):
    """Base class for all package errors."""


# grid / operators
class InvalidDomain(MutselError):
    pass


class UnknownSpec(MutselError):
    pass


class LengthMismatch(MutselError):
    pass


class NotElliptic(MutselError):
    pass


class SingularSystem(MutselError):
    pass


# eigen solvers
class NoConvergence(MutselError):
    pass


class NotPositiveWeight(MutselError):
    pass


class DegenerateGap(MutselError):
    pass


# time integration
class NonFiniteState(MutselError):
    pass


class BlowUp(MutselError):
    pass


# entropy machinery
class NotPositiveReference(MutselError):
    pass


class DegenerateState(MutselError):
    pass


class NotStationaryReference(MutselError):
    pass


class ZeroReference(MutselError):
    pass


class UnsupportedExponent(MutselError):
    pass


# steady states
class NoPositiveSteadyState(MutselError):
    pass


class ContinuationStall(MutselError):
    pass


# experiment configs
class ConfigError(MutselError):
    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        loc = ""
        if path is not None:
            loc = f"{path}:" if line is None else f"{path}:{line}: "
        super().__init__(f"{loc}{message}")
        self.path = path
        self.line = line
