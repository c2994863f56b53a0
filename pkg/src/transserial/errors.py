"""Exception types shared across the package."""


class TransserialError(Exception):
    pass


class Obstruction(TransserialError):
    """A mathematical obstruction (the CLI exits with status 2)."""


class IdentityMonomial(TransserialError, ValueError):
    pass


class ZeroSeries(TransserialError, ValueError):
    pass


class NotInfinitesimal(TransserialError, ValueError):
    pass


class NotPositive(TransserialError, ValueError):
    pass


class NotPurelyInfinite(TransserialError, ValueError):
    pass


class NotNormalizable(TransserialError, ValueError):
    pass


class SummabilityViolation(TransserialError, ArithmeticError):
    pass


class LevelMismatch(TransserialError, ValueError):
    pass


class TowerDepthExceeded(TransserialError, ValueError):
    pass


class TruncationError(TransserialError, ValueError):
    """A lazy stream could not be resolved within the scan limit."""


class AtThetaHat(Obstruction):
    def __init__(self, message="no asymptotic integral: input ≍ θ̂", partial=None):
        super().__init__(message)
        self.partial = partial


class NoPsiFound(Obstruction):
    pass


class ConstantInExpArg(TransserialError, ValueError):
    def __init__(self, message="exp of a nonzero constant term is unsupported"):
        super().__init__(message)


class NotPositiveLogArg(NotPositive):
    pass


class ParseError(TransserialError, SyntaxError):
    """Malformed expression; ``pos`` is the 0-based character offset."""

    def __init__(self, message, pos):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos
