"""Exception hierarchy shared by the models, the simulator and the CLI."""
from typing import Optional


class BlockCalcError(Exception):
    """Base class for every error raised on purpose by blockcalc."""

    exit_code = 1


class ConfigError(BlockCalcError, ValueError):
    """Invalid parameters, patterns, presets or experiment files."""

    exit_code = 2


class DistributionMismatchError(ConfigError):
    """Two probability vectors that must share a key grid do not."""


class DataError(BlockCalcError, ValueError):
    """Measurement data that cannot be parsed or fitted."""

    exit_code = 3


class MeasurementParseError(DataError):
    """A measurement file row failed to parse."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InsufficientSamplesError(DataError):
    """Fewer samples than the fit needs."""


class DegenerateFitError(DataError):
    """Samples do not determine a line (all batch sizes equal)."""
