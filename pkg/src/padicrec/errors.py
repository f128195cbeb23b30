"""Exception hierarchy shared by every module of the package."""


class RecurrenceError(Exception):
    """Base class for all errors raised by padicrec."""


class InputError(RecurrenceError):
    """Bad user input; the CLI maps these to exit code 1."""


class ResourceError(RecurrenceError):
    """Precision or iteration budget exhausted; the CLI maps these to exit code 2."""


class NonIntegralTerm(RecurrenceError):
    pass


class DegenerateCharPoly(InputError):
    pass


class InadmissiblePrime(InputError):
    pass


class NotAUnit(RecurrenceError):
    pass


class DomainError(RecurrenceError):
    pass


class PrecisionExhausted(ResourceError):
    pass


class Indeterminate(ResourceError):
    """Available precision cannot separate the coefficient valuations."""


class HenselFails(RecurrenceError):
    pass


class ReducibleCharPoly(InputError):
    pass


class DegenerateRatio(RecurrenceError):
    pass


class HypothesisFailed(InputError):
    pass


class NoLawAvailable(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MissingKey(InputError):
    pass


class ValidationError(InputError):
    pass
