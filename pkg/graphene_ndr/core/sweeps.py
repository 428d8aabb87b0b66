"""Transmission sweeps over bias, energy or incidence angle."""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from graphene_ndr.config import DeviceConfig
from graphene_ndr.core.scattering import Regime, classify_regime, solve_barrier
from graphene_ndr.core.units import DerivedQuantities, derive
from graphene_ndr.errors import ConfigError, ScatteringError


class SweepKind(Enum):
    V = "V"  # bias, mV, at E = E_F
    E = "E"  # energy, meV, at the operating bias
    PHI1 = "phi1"  # incidence angle, degrees, at E = E_F and the operating bias


@dataclass(frozen=True)
class SweepSpec:
    kind: SweepKind
    start: float
    stop: float
    count: int

    @classmethod
    def parse(cls, text: str) -> "SweepSpec":
        """Parse ``<var>:<start>:<stop>:<count>``, e.g. ``V:300:400:1001``."""
        parts = text.split(":")
        if len(parts) != 4:
            raise ConfigError(
                f"sweep must look like <var>:<start>:<stop>:<count>, got '{text}'",
                key="sweep",
            )
        try:
            kind = SweepKind(parts[0])
            start, stop, count = float(parts[1]), float(parts[2]), int(parts[3])
        except ValueError as e:
            raise ConfigError(f"invalid sweep '{text}': {e}", key="sweep") from e
        spec = cls(kind, start, stop, count)
        spec.validate()
        return spec

    def validate(self) -> None:
        if self.count < 2:
            raise ConfigError("sweep count must be at least 2", key="sweep")
        if not self.start < self.stop:
            raise ConfigError("sweep start must be smaller than stop", key="sweep")
        if self.kind is SweepKind.PHI1 and not (-90.0 < self.start and self.stop < 90.0):
            raise ConfigError("phi1 sweep must stay inside (-90, 90) degrees", key="sweep")

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class TransmissionSample:
    x: float
    T: float
    regime: str


def _sample(
    x: float, E: float, k_y: float, V: float, cfg: DeviceConfig, dq: DerivedQuantities
) -> TransmissionSample:
    try:
        regime = classify_regime(E, k_y, V, cfg, dq)
        if regime is not Regime.PROPAGATING:
            # nothing is transmitted without modes in every region
            return TransmissionSample(x, 0.0, regime.value)
        solution = solve_barrier(E, k_y, V, cfg, dq)
    except ScatteringError as e:
        return TransmissionSample(x, math.nan, type(e).__name__)
    return TransmissionSample(x, solution.T, solution.regime.value)


def transmission_sweep(cfg: DeviceConfig, spec: SweepSpec) -> list[TransmissionSample]:
    return transmission_at(cfg, spec.kind, spec.grid().tolist())


def transmission_at(
    cfg: DeviceConfig, kind: SweepKind, values: Sequence[float]
) -> list[TransmissionSample]:
    """
    Transmission at the given points of one sweep axis.

    Points where the solver has no answer (Dirac-point or grazing
    degeneracies) carry T = nan and the error name as their regime. The
    barrier Dirac point off normal incidence lies inside the gap and is a
    BarrierGap row.
    """
    dq = derive(cfg)
    samples = []
    for x in values:
        x = float(x)
        match kind:
            case SweepKind.V:
                samples.append(_sample(x, dq.E_F, dq.k_y, x, cfg, dq))
            case SweepKind.E:
                samples.append(_sample(x, x, dq.k_y, cfg.bias, cfg, dq))
            case SweepKind.PHI1:
                k_y = dq.k_F * math.sin(math.radians(x))
                samples.append(_sample(x, dq.E_F, k_y, cfg.bias, cfg, dq))
    return samples
