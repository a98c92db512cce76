"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid physical or numerical input.

    ``field`` names the offending input so callers can report it distinctly.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class QuadratureBudgetError(RuntimeError):
    """A requested tolerance could not be met inside the iteration/panel budget."""


class NegativeExponentError(ArithmeticError):
    """A decoherence exponent came out negative beyond its tolerance."""


class NyquistError(ConfigError):
    """Sampling grid too coarse for the requested range."""
