"""Exception hierarchy. Every error the CLI can surface carries its exit code."""


class MultimorseError(Exception):
    exit_code = 1


class ParseError(MultimorseError):
    exit_code = 2

    def __init__(self, message: str, path=None, line: int | None = None):
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(f"{where}{message}")
        self.path = path
        self.line = line


class ComplexError(MultimorseError):
    exit_code = 2


class InjectivityError(MultimorseError):
    exit_code = 3


class VerificationError(MultimorseError):
    exit_code = 4


class ConfigError(MultimorseError):
    exit_code = 5


class SimplexNotFoundError(MultimorseError, KeyError):
    pass


class IllegalPairingError(MultimorseError):
    pass


class GradientCycleError(MultimorseError):
    pass


class BoundaryError(MultimorseError):
    """Raised when an incidence function violates the boundary-of-boundary rule."""


class NonMonotoneFilterError(MultimorseError, ValueError):
    pass


class OracleGuardError(MultimorseError):
    pass
