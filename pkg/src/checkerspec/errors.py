"""Exception types raised across the package."""


class CheckerspecError(Exception):
    pass


class FormatError(CheckerspecError, ValueError):
    """Malformed file header or bad magic."""


class LengthError(FormatError):
    """Payload shorter than the header declares."""


class UnsupportedFormatError(FormatError):
    pass


class DimensionError(CheckerspecError, ValueError):
    """Image too small for the requested crop size."""


class ShapeError(CheckerspecError, ValueError):
    pass


class TrainingError(CheckerspecError, ValueError):
    pass


class DomainError(CheckerspecError, ValueError):
    """Score outside [0, 1]."""


class UndefinedMetricError(CheckerspecError, ValueError):
    """Metric undefined for the given labels (e.g. no positives)."""
