"""Exception types shared across the package."""


class DomainError(ValueError):
    """A physical parameter leaves the validity domain of the model."""


class ConfigError(ValueError):
    """A run configuration file cannot be parsed or fails validation."""


class MetricsError(RuntimeError):
    """Spectrum metrics cannot be extracted from the supplied curve."""


class NoPeakError(MetricsError):
    """The maximum sits on a grid boundary, or the grid is too short."""


class NoCrossingError(MetricsError):
    """A half-maximum crossing is missing on one side of the peak."""

    def __init__(self, side: str, message: str | None = None):
        self.side = side
        super().__init__(message or f"no half-maximum crossing on the {side} side")


class InfeasibleError(RuntimeError):
    """No search-space point satisfies the optimization constraints."""

    def __init__(self, message: str, best_peak_point=None):
        self.best_peak_point = best_peak_point
        super().__init__(message)
