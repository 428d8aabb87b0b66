"""Device configuration: the JSON document a run is described by.

All models are frozen, so a resolved configuration can be shared freely
between worker processes and used as a cache key.
"""

import argparse
import json
import math
import os
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)
from scipy.constants import c as C_LIGHT

from graphene_ndr.errors import ConfigError

DEFAULT_V_F = C_LIGHT / 300.0
DEFAULT_V0 = 200.0
DEFAULT_TEMPERATURE = 300.0
DEFAULT_LAMBDA_F0 = 50.0


class BiasSweep(BaseModel):
    """Uniform bias grid in mV."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    start: float = Field(0.0, description="First bias point (mV)")
    stop: float = Field(600.0, description="Last bias point (mV)")
    count: int = Field(201, ge=2, description="Number of grid points")

    @model_validator(mode="after")
    def check_order(self) -> "BiasSweep":
        if not self.start < self.stop:
            raise ValueError("start must be smaller than stop")
        return self

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    @property
    def step(self) -> float:
        return (self.stop - self.start) / (self.count - 1)


class QuadratureSpec(BaseModel):
    """Tolerances for the adaptive Landauer integral."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    rel_tol: float = Field(1e-6, gt=0.0)
    abs_tol: float = Field(1e-12, ge=0.0)
    max_subdivisions: int = Field(2000, ge=16)
    window_kT: float = Field(
        20.0, gt=0.0, description="Upper window margin in units of kT"
    )
    guard: float = Field(
        1e-9, gt=0.0, description="Offset (meV) placed around every breakpoint"
    )


class DeviceConfig(BaseModel):
    """Geometry, doping, incidence and sweep settings for one simulated barrier.

    Units: v_F in m/s, D and lambda_F0 in nm, energies in meV, phi1 in degrees,
    temperature in K, biases in mV.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    v_F: float = Field(DEFAULT_V_F, gt=0.0, description="Fermi velocity (m/s)")
    D: float = Field(..., gt=0.0, description="Barrier width (nm)")
    V0: float = Field(DEFAULT_V0, description="Barrier height (meV)")
    E_F: Optional[float] = Field(None, gt=0.0, description="Fermi energy (meV)")
    alpha: Optional[float] = Field(
        None, gt=0.0, description="Fermi wavenumber as a fraction of 2*pi/lambda_F0"
    )
    lambda_F0: float = Field(
        DEFAULT_LAMBDA_F0, gt=0.0, description="Reference Fermi wavelength (nm)"
    )
    phi1: float = Field(..., gt=-90.0, lt=90.0, description="Incidence angle (deg)")
    temperature: float = Field(DEFAULT_TEMPERATURE, ge=0.0, description="(K)")
    bias_sweep: BiasSweep = Field(default_factory=BiasSweep)
    quadrature: QuadratureSpec = Field(default_factory=QuadratureSpec)
    include_hole_branch: bool = False
    bias: float = Field(
        0.0, description="Operating bias (mV) for energy and angle sweeps"
    )

    @field_validator("V0", "bias")
    def finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("must be finite")
        return value

    @model_validator(mode="after")
    def exactly_one_fermi_spec(self) -> "DeviceConfig":
        if (self.E_F is None) == (self.alpha is None):
            raise ValueError("exactly one of E_F/alpha must be given")
        return self

    @property
    def phi1_rad(self) -> float:
        return math.radians(self.phi1)

    def replace(self, **changes: Any) -> "DeviceConfig":
        """Return a validated copy with ``changes`` applied."""
        data = self.model_dump()
        data.update(changes)
        return DeviceConfig.model_validate(data)

    def resolved(self) -> dict:
        """JSON-ready echo of every field, defaults included."""
        return self.model_dump(mode="json")


def _first_error(exc: ValidationError) -> ConfigError:
    error = exc.errors()[0]
    key = ".".join(str(part) for part in error["loc"]) or None
    message = error["msg"]
    if key is None:
        return ConfigError(f"invalid config: {message}")
    return ConfigError(f"invalid config key '{key}': {message}", key=key)


def load_config(source: Union[str, Path, Mapping[str, Any]]) -> DeviceConfig:
    """
    Parse and validate a device configuration.

    Args:
        source: a path to a JSON file, the JSON document itself, or an
            already-parsed mapping.

    Returns:
        Validated DeviceConfig with defaults applied.

    Raises:
        ConfigError: the document is malformed or violates a constraint.
    """
    if isinstance(source, Path):
        try:
            source = source.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"cannot read config file: {e}") from e

    if isinstance(source, str):
        try:
            data = json.loads(source)
        except json.JSONDecodeError as e:
            raise ConfigError(f"malformed config document: {e}") from e
    else:
        data = dict(source)

    if not isinstance(data, dict):
        raise ConfigError("config document must be a JSON object")

    try:
        return DeviceConfig.model_validate(data)
    except ValidationError as e:
        raise _first_error(e) from e


THREADS_ENV = "GRAPHENE_NDR_THREADS"
COMMANDS_NEEDING_CONFIG = ("transmission", "iv", "analyze")


def resolve_workers(value: Optional[str]) -> int:
    """Worker count from GRAPHENE_NDR_THREADS: unset means serial, 0 means one per CPU."""
    if value is None or value.strip() == "":
        return 1
    try:
        workers = int(value)
    except ValueError as e:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got '{value}'", key=THREADS_ENV) from e
    if workers < 0:
        raise ConfigError(f"{THREADS_ENV} must be >= 0", key=THREADS_ENV)
    return workers or (os.cpu_count() or 1)


@dataclass
class RunOptions:
    """Runtime options of one CLI invocation"""

    command: str
    out_dir: Path
    config_path: Optional[Path] = None
    sweep: Optional[str] = None
    svg: bool = False
    iv_csv: Optional[Path] = None
    presets: Optional[Path] = None
    workers: int = 1

    def __post_init__(self):
        """Validate options after initialization"""
        if self.command in COMMANDS_NEEDING_CONFIG and self.config_path is None:
            raise ConfigError(f"'{self.command}' requires --config", key="config")

        if self.command == "analyze" and self.iv_csv is None:
            raise ConfigError("'analyze' requires --iv", key="iv")

        if self.sweep is not None and self.command != "transmission":
            raise ConfigError("--sweep only applies to 'transmission'", key="sweep")

        if self.workers < 1:
            raise ConfigError("workers must be at least 1", key="workers")

        if self.out_dir.exists() and not self.out_dir.is_dir():
            raise ConfigError(f"output path {self.out_dir} is not a directory", key="out")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunOptions":
        """Create options from parsed arguments and the environment"""
        return cls(
            command=args.command,
            out_dir=Path(args.out),
            config_path=Path(args.config) if args.config else None,
            sweep=args.sweep,
            svg=args.svg,
            iv_csv=Path(args.iv) if args.iv else None,
            presets=Path(args.presets) if args.presets else None,
            workers=resolve_workers(os.getenv(THREADS_ENV)),
        )
