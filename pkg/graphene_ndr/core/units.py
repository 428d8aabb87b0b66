"""Physical constants and the meV / nm unit system of the numeric core.

SI values only appear here and at the config boundary; everything the solver
sees is expressed in meV and nm, where hbar*v_F is of order 1e3 meV*nm.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import scipy.constants as sc

from graphene_ndr.config import DeviceConfig

MEV_PER_J = 1e3 / sc.e
NM_PER_M = 1e9
VALLEY_DEGENERACY = 2
SPIN_DEGENERACY = 2


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA values (SI)."""

    hbar: float = sc.hbar
    e_charge: float = sc.e
    k_B: float = sc.k
    c_light: float = sc.c
    h_planck: float = sc.h

    def __post_init__(self):
        for name in ("hbar", "e_charge", "k_B", "c_light", "h_planck"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if abs(self.h_planck - 2 * math.pi * self.hbar) > 1e-12 * self.h_planck:
            raise ValueError("h_planck must equal 2*pi*hbar")


CONSTANTS = PhysicalConstants()

# (2e/h) * 1 meV in amperes: the current carried by one spin-degenerate
# transverse mode per meV of open transport window.
CURRENT_UNIT_SI = SPIN_DEGENERACY * CONSTANTS.e_charge / CONSTANTS.h_planck * (
    1e-3 * CONSTANTS.e_charge
)


@dataclass(frozen=True)
class DerivedQuantities:
    """Quantities derived once per configuration, in meV / nm."""

    hbar_vF: float  # meV*nm
    E_F: float  # meV
    k_F: float  # 1/nm
    k_y: float  # 1/nm
    thermal_energy: float  # meV


def hbar_vf(v_F: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """hbar*v_F in meV*nm."""
    return constants.hbar * v_F * MEV_PER_J * NM_PER_M


def thermal_energy(temperature: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """k_B*T in meV."""
    return constants.k_B * temperature * MEV_PER_J


@lru_cache(maxsize=256)
def derive(cfg: DeviceConfig) -> DerivedQuantities:
    """Derive the meV/nm kinematic quantities of a configuration."""
    hv = hbar_vf(cfg.v_F)
    if cfg.E_F is not None:
        e_f = cfg.E_F
    else:
        e_f = hv * (cfg.alpha * 2.0 * math.pi / cfg.lambda_F0)
    k_f = e_f / hv
    return DerivedQuantities(
        hbar_vF=hv,
        E_F=e_f,
        k_F=k_f,
        k_y=k_f * math.sin(cfg.phi1_rad),
        thermal_energy=thermal_energy(cfg.temperature),
    )
