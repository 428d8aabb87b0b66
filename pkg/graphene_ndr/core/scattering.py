"""Three-region Dirac scattering through a biased, gated graphene barrier.

Region j carries the spinor pair

    (1,  s_j e^{+i phi_j}) e^{+i k_j x}      (right-moving in k)
    (1, -s_j e^{-i phi_j}) e^{-i k_j x}      (left-moving in k)

with amplitudes (1, r) in region 1, (a, b) in region 2 and (t, 0) in region 3.
Continuity of both spinor components at x = 0 and x = D fixes (r, a, b, t).

Region potentials use the step-drop bias model: U1 = 0, U2 = V0 - eV/2,
U3 = -eV. Energies are in meV, wavevectors in 1/nm, biases in mV (so eV in
meV equals V in mV numerically).
"""

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from graphene_ndr.config import DeviceConfig
from graphene_ndr.core.units import DerivedQuantities, derive
from graphene_ndr.errors import (
    DegenerateEnergy,
    GrazingOutput,
    NoInputMode,
    SingularSystem,
)

DEGENERACY_GUARD = 1e-9  # meV
GRAZING_GUARD = 1e-9
PIVOT_GUARD = 1e-13


class Regime(Enum):
    PROPAGATING = "Propagating"
    BARRIER_GAP = "BarrierGap"
    NO_OUTPUT_MODE = "NoOutputMode"
    NO_INPUT_MODE = "NoInputMode"


@dataclass(frozen=True)
class RegionState:
    """Kinematics of one region at fixed (E, k_y)."""

    index: int
    U: float
    s: int
    k_x: float
    phi: float
    propagating: bool


@dataclass(frozen=True)
class ScatteringSolution:
    """Amplitudes and probabilities of one scattering evaluation.

    Amplitudes that the model leaves undetermined (r, a, b in the gap regimes)
    are ``None``; t is exactly zero whenever nothing is transmitted.
    """

    r: Optional[complex]
    a: Optional[complex]
    b: Optional[complex]
    t: complex
    T: float
    R: float
    regime: Regime
    band_signs: tuple[int, int, int]

    @property
    def mixed_band_signs(self) -> bool:
        """Incident and transmitted regions carry opposite band signs.

        The flux-normalized T of such evaluations is reported as computed
        (it may be negative); no sign convention is imposed on it.
        """
        return self.band_signs[0] != self.band_signs[2]

    def amplitudes(self) -> np.ndarray:
        return np.array([self.r, self.a, self.b, self.t], dtype=complex)


def device_potentials(V: float, V0: float) -> tuple[float, float, float]:
    """Region potential energies (meV) for bias V (mV) under the step-drop model."""
    return 0.0, V0 - V / 2.0, -V


def region_kinematics(
    E: float, k_y: float, U: float, dq: DerivedQuantities, index: int = 1
) -> RegionState:
    """
    Longitudinal wavevector, angle and band sign of one region.

    Raises:
        DegenerateEnergy: |E - U| is within the degeneracy guard.
    """
    delta = E - U
    if abs(delta) <= DEGENERACY_GUARD:
        raise DegenerateEnergy(index, E, U)

    s = 1 if delta > 0 else -1
    discriminant = (delta / dq.hbar_vF) ** 2 - k_y * k_y
    if discriminant > 0.0:
        k_x = math.sqrt(discriminant)
        return RegionState(index, U, s, k_x, math.atan(k_y / k_x), True)
    # evanescent: no propagating solution is continued
    return RegionState(index, U, s, 0.0, math.copysign(math.pi / 2, k_y), False)


def _spinor_matrix(state: RegionState, x: float) -> np.ndarray:
    """Columns are the two spinor solutions of ``state`` evaluated at x."""
    forward = cmath.exp(1j * state.k_x * x)
    backward = cmath.exp(-1j * state.k_x * x)
    return np.array(
        [
            [forward, backward],
            [
                state.s * cmath.exp(1j * state.phi) * forward,
                -state.s * cmath.exp(-1j * state.phi) * backward,
            ],
        ],
        dtype=complex,
    )


def _regions(
    E: float, k_y: float, V: float, cfg: DeviceConfig, dq: DerivedQuantities
) -> tuple[RegionState, RegionState, RegionState]:
    potentials = device_potentials(V, cfg.V0)
    return tuple(
        region_kinematics(E, k_y, U, dq, index=i + 1) for i, U in enumerate(potentials)
    )


def _flux_ratio(r1: RegionState, r3: RegionState) -> float:
    return (r3.s * math.cos(r3.phi)) / (r1.s * math.cos(r1.phi))


def _classify(
    r1: RegionState, r2: RegionState, r3: RegionState
) -> Optional[ScatteringSolution]:
    """Settle the non-propagating regimes; ``None`` means the full problem must be solved."""
    signs = (r1.s, r2.s, r3.s)
    if not r1.propagating:
        raise NoInputMode(
            f"no propagating incident mode in region 1 (band sign {r1.s})"
        )
    if not r2.propagating:
        return ScatteringSolution(
            None, None, None, 0j, 0.0, 1.0, Regime.BARRIER_GAP, signs
        )
    if not r3.propagating:
        return ScatteringSolution(
            None, None, None, 0j, 0.0, 1.0, Regime.NO_OUTPUT_MODE, signs
        )
    if abs(math.cos(r3.phi)) < GRAZING_GUARD:
        raise GrazingOutput(f"|cos(phi3)| = {abs(math.cos(r3.phi)):.3g}")
    return None


def classify_regime(
    E: float,
    k_y: float,
    V: float,
    cfg: DeviceConfig,
    dq: Optional[DerivedQuantities] = None,
) -> Regime:
    """
    Regime of a point without solving for amplitudes; never raises NoInputMode.

    The barrier Dirac point E = U2 at k_y != 0 satisfies the gap inequality
    |E - U2| < hbar v_F |k_y| and is classified BarrierGap.

    Raises:
        DegenerateEnergy: E sits on the Dirac point of region 1 or 3, or of
            region 2 at normal incidence.
    """
    dq = dq or derive(cfg)
    u1, u2, u3 = device_potentials(V, cfg.V0)
    r1 = region_kinematics(E, k_y, u1, dq, index=1)
    if not r1.propagating:
        return Regime.NO_INPUT_MODE
    try:
        r2 = region_kinematics(E, k_y, u2, dq, index=2)
    except DegenerateEnergy:
        if k_y == 0.0:
            raise
        return Regime.BARRIER_GAP
    if not r2.propagating:
        return Regime.BARRIER_GAP
    r3 = region_kinematics(E, k_y, u3, dq, index=3)
    if not r3.propagating:
        return Regime.NO_OUTPUT_MODE
    return Regime.PROPAGATING


def solve_barrier(
    E: float,
    k_y: float,
    V: float,
    cfg: DeviceConfig,
    dq: Optional[DerivedQuantities] = None,
) -> ScatteringSolution:
    """
    Solve the barrier by cascading 2x2 interface matrices.

    With M_j(x) the spinor matrix of region j:
        M1(0) (1, r) = M2(0) (a, b),    M2(D) (a, b) = M3(D) (t, 0)
    so (t, 0) = P (1, r) with P = M3(D)^-1 M2(D) M2(0)^-1 M1(0).

    Raises:
        NoInputMode, DegenerateEnergy, GrazingOutput
    """
    dq = dq or derive(cfg)
    r1, r2, r3 = _regions(E, k_y, V, cfg, dq)
    settled = _classify(r1, r2, r3)
    if settled is not None:
        return settled

    D = cfg.D
    inner = np.linalg.solve(_spinor_matrix(r2, 0.0), _spinor_matrix(r1, 0.0))
    cascade = np.linalg.solve(_spinor_matrix(r3, D), _spinor_matrix(r2, D) @ inner)

    r = -cascade[1, 0] / cascade[1, 1]
    t = cascade[0, 0] + cascade[0, 1] * r
    a, b = inner @ np.array([1.0, r])

    T = _flux_ratio(r1, r3) * abs(t) ** 2
    return ScatteringSolution(
        complex(r),
        complex(a),
        complex(b),
        complex(t),
        float(T),
        float(abs(r) ** 2),
        Regime.PROPAGATING,
        (r1.s, r2.s, r3.s),
    )


def solve_barrier_oracle(
    E: float,
    k_y: float,
    V: float,
    cfg: DeviceConfig,
    dq: Optional[DerivedQuantities] = None,
) -> ScatteringSolution:
    """
    Independent solution of the same matching problem as one dense 4x4 system.

    Unknowns are ordered (r, a, b, t). Rows 0-1 are continuity at x = 0, rows
    2-3 continuity at x = D. The system is LU factorized with partial pivoting.

    Raises:
        SingularSystem: a pivot of the factorization is below 1e-13.
    """
    dq = dq or derive(cfg)
    r1, r2, r3 = _regions(E, k_y, V, cfg, dq)
    settled = _classify(r1, r2, r3)
    if settled is not None:
        return settled

    D = cfg.D
    m1 = _spinor_matrix(r1, 0.0)
    m2_left = _spinor_matrix(r2, 0.0)
    m2_right = _spinor_matrix(r2, D)
    m3 = _spinor_matrix(r3, D)

    system = np.zeros((4, 4), dtype=complex)
    rhs = np.zeros(4, dtype=complex)
    system[0:2, 0] = -m1[:, 1]
    system[0:2, 1:3] = m2_left
    rhs[0:2] = m1[:, 0]
    system[2:4, 1:3] = m2_right
    system[2:4, 3] = -m3[:, 0]

    lu, piv = lu_factor(system, check_finite=False)
    smallest = float(np.min(np.abs(np.diag(lu))))
    if smallest < PIVOT_GUARD:
        raise SingularSystem(
            "vanishing pivot",
            {"E": E, "k_y": k_y, "V": V, "V0": cfg.V0, "D": D, "pivot": smallest},
        )
    r, a, b, t = lu_solve((lu, piv), rhs, check_finite=False)

    T = _flux_ratio(r1, r3) * abs(t) ** 2
    return ScatteringSolution(
        complex(r),
        complex(a),
        complex(b),
        complex(t),
        float(T),
        float(abs(r) ** 2),
        Regime.PROPAGATING,
        (r1.s, r2.s, r3.s),
    )


def closed_form_unbiased(
    E: float, k_y: float, V0: float, D: float, dq: DerivedQuantities
) -> float:
    """
    Closed-form transmission of the unbiased barrier.

    With (k1, phi, s) in the outer regions and (q, theta, s') in the barrier:

        T = cos^2(phi) cos^2(theta) /
            [cos^2(qD) cos^2(phi) cos^2(theta) + sin^2(qD) (1 - s s' sin(phi) sin(theta))^2]

    Returns 0 when the barrier region is non-propagating (total reflection).

    Raises:
        NoInputMode, DegenerateEnergy
    """
    outer = region_kinematics(E, k_y, 0.0, dq, index=1)
    barrier = region_kinematics(E, k_y, V0, dq, index=2)
    if not outer.propagating:
        raise NoInputMode("no propagating incident mode")
    if not barrier.propagating:
        return 0.0

    cos_phi, sin_phi = math.cos(outer.phi), math.sin(outer.phi)
    cos_theta, sin_theta = math.cos(barrier.phi), math.sin(barrier.phi)
    qD = barrier.k_x * D
    numerator = (cos_phi * cos_theta) ** 2
    denominator = (math.cos(qD) * cos_phi * cos_theta) ** 2 + (
        math.sin(qD) * (1.0 - outer.s * barrier.s * sin_phi * sin_theta)
    ) ** 2
    return numerator / denominator
