from pathlib import Path
from typing import Any, Literal, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from graphene_ndr.config import BiasSweep, DeviceConfig
from graphene_ndr.errors import ConfigError

base_dir = Path(__file__).resolve().parent
DEFAULT_PRESETS = base_dir / "presets.yml"


class FamilyPreset(BaseModel):
    """One figure: a curve per value of the varied parameter."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    parameter: Literal["alpha", "phi1", "D"]
    values: list[float] = Field(..., min_length=2)
    overrides: dict[str, Any] = Field(default_factory=dict)
    bias_sweep: Optional[BiasSweep] = None

    @field_validator("values")
    def strictly_increasing(cls, values):
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("values must be strictly increasing")
        return values

    def column(self, prefix: str, value: float) -> str:
        return f"{prefix}_{self.parameter}_{value:g}"

    def configs(self, base: DeviceConfig) -> list[tuple[float, DeviceConfig]]:
        """Validated configuration of every curve, in ``values`` order."""
        changes = dict(self.overrides)
        if self.bias_sweep is not None:
            changes["bias_sweep"] = self.bias_sweep.model_dump()
        try:
            return [(v, base.replace(**{**changes, self.parameter: v})) for v in self.values]
        except ValidationError as e:
            raise ConfigError(f"preset family '{self.parameter}' is invalid: {e.errors()[0]['msg']}") from e


class FigurePresets(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    version: Literal[1]
    base: DeviceConfig
    fig2: FamilyPreset
    fig3: FamilyPreset
    fig4: FamilyPreset
    width: Optional[FamilyPreset] = None


def load_presets(path: Optional[Path] = None) -> FigurePresets:
    """
    Load the figure presets document.

    Args:
        path: alternative YAML document; the packaged presets when None.

    Raises:
        ConfigError: unreadable, malformed or invalid document.
    """
    path = path or DEFAULT_PRESETS
    try:
        with open(path, "r", encoding="utf-8") as file:
            data = yaml.safe_load(file)
    except OSError as e:
        raise ConfigError(f"cannot read presets {path}: {e}", key="presets") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"malformed presets document {path}: {e}", key="presets") from e

    if not isinstance(data, dict):
        raise ConfigError("presets document must be a mapping", key="presets")
    try:
        return FigurePresets(**data)
    except ValidationError as e:
        error = e.errors()[0]
        key = ".".join(str(part) for part in error["loc"])
        raise ConfigError(f"invalid presets key '{key}': {error['msg']}", key=key) from e
