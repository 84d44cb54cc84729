from .manager import ConfigManager
from .presets import PRESET_DESCRIPTIONS, PRESETS
from .schema import (
    DEFAULT_FIXED,
    DEFAULT_GRIDS,
    BlockCalcSettings,
    ExperimentKind,
    ExperimentSpec,
    Sweep,
    SweepParameter,
)

__all__ = [
    "BlockCalcSettings",
    "ConfigManager",
    "DEFAULT_FIXED",
    "DEFAULT_GRIDS",
    "ExperimentKind",
    "ExperimentSpec",
    "PRESETS",
    "PRESET_DESCRIPTIONS",
    "Sweep",
    "SweepParameter",
]
