class SlopeGapError(Exception):
    """Base class for every error raised by slopegaps."""


class DomainError(SlopeGapError, ValueError):
    pass


class SectionError(SlopeGapError, ValueError):
    """A point does not lie in the Poincaré section."""


class OracleError(SlopeGapError):
    """No candidate vector is admissible at the queried point."""


class ConfigError(SlopeGapError, ValueError):
    pass


class QuadratureError(SlopeGapError):
    def __init__(self, message: str, achieved: float, requested: float) -> None:
        super().__init__(f"{message} (achieved {achieved:.3g}, requested {requested:.3g})")
        self.achieved = achieved
        self.requested = requested
