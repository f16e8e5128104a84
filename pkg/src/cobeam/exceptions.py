"""Exception types raised across the package."""


class CobeamError(Exception):
    """Base class for all package errors."""


class DimensionError(CobeamError, ValueError):
    """Array shapes are incompatible with the requested operation."""


class InvalidInputError(CobeamError, ValueError):
    """Input contains NaN/Inf or otherwise invalid values."""


class DegenerateInputError(CobeamError, ValueError):
    """Input is valid but sits on a measure-zero degenerate configuration."""


class ConfigError(CobeamError, ValueError):
    """Scenario or experiment configuration is invalid."""
