class LPadicError(Exception):
    pass


class PrecisionError(LPadicError, ArithmeticError):
    """
    Raised whenever a result would claim more precision than the inputs justify,
    e.g. when dividing by something that is zero at the tracked precision.
    """


class DomainError(LPadicError, ValueError):
    pass


class LevelError(LPadicError, LookupError):
    """
    A query needs intervals (or grid points) deeper than what was stored.
    """


class IndeterminateError(LPadicError, ArithmeticError):
    pass


class NonOrdinaryError(LPadicError, ValueError):
    pass


class SupersingularError(NonOrdinaryError):
    pass


class NotNewformError(LPadicError, ValueError):
    pass


class ResourceError(LPadicError, RuntimeError):
    pass


class ConfigError(LPadicError, ValueError):
    pass


class ProviderError(LPadicError, RuntimeError):
    pass
