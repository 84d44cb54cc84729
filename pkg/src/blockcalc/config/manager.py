"""Configuration manager: settings, presets and experiment files."""
from __future__ import annotations

from pathlib import Path
from typing import Optional, Union

import yaml
from pydantic import ValidationError

from ..errors import ConfigError
from .presets import PRESETS
from .schema import BlockCalcSettings, ExperimentFile, ExperimentSpec


class ConfigManager:
    """Loads settings and turns `experiment` targets into ExperimentSpecs."""

    def __init__(self, settings: Optional[BlockCalcSettings] = None):
        self._settings = settings

    def load(self) -> BlockCalcSettings:
        if self._settings is None:
            self._settings = BlockCalcSettings()
        return self._settings

    @staticmethod
    def preset_names() -> list[str]:
        return sorted(PRESETS)

    def resolve(self, target: Union[str, Path]) -> list[ExperimentSpec]:
        """Preset name or YAML file path -> experiment specs."""
        name = str(target)
        if name in PRESETS:
            return list(PRESETS[name])

        path = Path(target)
        if not path.is_file():
            known = ", ".join(self.preset_names())
            raise ConfigError(f"'{name}' is neither a preset ({known}) nor a file")
        return self.load_file(path)

    def load_file(self, path: Path) -> list[ExperimentSpec]:
        try:
            with open(path, "r", encoding="utf-8") as f:
                document = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"{path}: invalid YAML: {e}") from e

        if not isinstance(document, dict):
            raise ConfigError(f"{path}: expected a mapping at the top level")
        if "experiments" not in document:
            document = {"experiments": [document]}

        try:
            parsed = ExperimentFile.model_validate(document)
        except ValidationError as e:
            raise ConfigError(f"{path}: {e}") from e

        # Relative measurement paths are relative to the experiment file.
        specs = []
        for spec in parsed.experiments:
            if spec.measurements is not None and not spec.measurements.is_absolute():
                spec = spec.model_copy(update={"measurements": path.parent / spec.measurements})
            specs.append(spec)
        return specs

    def dump_preset(self, name: str) -> str:
        if name not in PRESETS:
            raise ConfigError(f"unknown preset: {name}")
        document = {
            "experiments": [
                spec.model_dump(mode="json", exclude_none=True) for spec in PRESETS[name]
            ]
        }
        return yaml.safe_dump(document, sort_keys=False)
