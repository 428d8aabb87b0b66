"""Device-level metrics: transmission gap, NDR peak/valley, cutoff frequency, trends.

The report models are pydantic so they serialize straight into the JSON
report written by the ``analyze`` command.
"""

import math
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field

from graphene_ndr.config import DeviceConfig
from graphene_ndr.core.landauer import IVCurve
from graphene_ndr.core.units import CURRENT_UNIT_SI, derive
from graphene_ndr.errors import NoGapFound, NoNdrDetected, ZeroWidthGap

GAP_THRESHOLD = 1e-12
MIN_NDR_POINTS = 3
REPORTED_PVR_RANGE = (2.5, 4.0)


class GapReport(BaseModel):
    """Zero-transmission interval of a bias sweep.

    Attributes:
        V_low, V_high: first and last grid bias (mV) of the longest T = 0 run.
        predicted_low, predicted_high: analytic edges (mV), when a config is known.
        width: V_high - V_low (mV).
        on_off_ratio: max T outside the run over max(threshold, max T inside).
    """

    V_low: float
    V_high: float
    predicted_low: Optional[float] = None
    predicted_high: Optional[float] = None
    width: float
    on_off_ratio: Optional[float] = None


class NdrReport(BaseModel):
    """Negative differential resistance region of an I-V curve.

    Currents are in (2e/h)*meV per mode, biases in mV.
    """

    V_peak: float
    I_peak: float
    V_valley: float
    I_valley: float
    pvr: float = Field(..., description="I_peak / I_valley")
    min_dIdV: float = Field(..., description="Most negative finite-difference slope")
    f_c: float = Field(..., description="Transit-time cutoff frequency (THz)")
    I_peak_A: float = Field(..., description="Peak current per mode in amperes")

    @property
    def pvr_in_reported_range(self) -> bool:
        low, high = REPORTED_PVR_RANGE
        return low <= self.pvr <= high


class TrendVerdict(BaseModel):
    parameter: str
    values: list[float]
    pvr: list[float]
    I_peak: list[float]
    pvr_increasing: bool
    I_peak_decreasing: bool


def analytic_gap(cfg: DeviceConfig) -> tuple[float, float]:
    """
    Bias interval (mV) where the barrier region has no propagating mode at E = E_F.

    |E_F - V0 + eV/2| < hbar v_F |k_y|  <=>  eV in 2(V0 - E_F) -/+ 2 hbar v_F |k_y|

    Raises:
        ZeroWidthGap: phi1 = 0.
    """
    dq = derive(cfg)
    if math.sin(cfg.phi1_rad) == 0.0:
        raise ZeroWidthGap("normal incidence: the transmission gap has zero width")
    center = 2.0 * (cfg.V0 - dq.E_F)
    half_width = 2.0 * dq.hbar_vF * abs(dq.k_y)
    return center - half_width, center + half_width


def find_gap(
    samples: Sequence[tuple[float, float]],
    threshold: float = GAP_THRESHOLD,
    cfg: Optional[DeviceConfig] = None,
) -> GapReport:
    """
    Locate the longest contiguous run of samples with T <= threshold.

    Args:
        samples: (V, T) pairs on a strictly increasing V grid.
        threshold: transmission regarded as zero.
        cfg: when given (and phi1 != 0), predicted edges are filled in.

    Raises:
        ValueError: fewer than 3 samples or V not strictly increasing.
        NoGapFound: no run of at least two zero-transmission samples.
    """
    if len(samples) < 3:
        raise ValueError("find_gap needs at least 3 samples")
    V = np.array([s[0] for s in samples], dtype=float)
    T = np.array([s[1] for s in samples], dtype=float)
    if np.any(np.diff(V) <= 0):
        raise ValueError("sample biases must be strictly increasing")

    closed = T <= threshold  # nan compares False
    best_start, best_length, start = -1, 0, None
    for i, is_closed in enumerate([*closed.tolist(), False]):
        if is_closed and start is None:
            start = i
        elif not is_closed and start is not None:
            if i - start > best_length:
                best_start, best_length = start, i - start
            start = None
    if best_length < 2:
        raise NoGapFound(f"no run of T <= {threshold:g} spanning two samples")

    stop = best_start + best_length - 1
    inside = T[best_start : stop + 1]
    outside = np.concatenate([T[:best_start], T[stop + 1 :]])
    outside = outside[np.isfinite(outside)]
    on_off = None
    if outside.size:
        on_off = float(outside.max() / max(threshold, float(np.nanmax(inside))))

    predicted_low = predicted_high = None
    if cfg is not None and math.sin(cfg.phi1_rad) != 0.0:
        predicted_low, predicted_high = analytic_gap(cfg)

    return GapReport(
        V_low=float(V[best_start]),
        V_high=float(V[stop]),
        predicted_low=predicted_low,
        predicted_high=predicted_high,
        width=float(V[stop] - V[best_start]),
        on_off_ratio=on_off,
    )


def cutoff_frequency(cfg: DeviceConfig) -> float:
    """Ballistic transit-time cutoff v_F / (2 pi D) in THz."""
    return cfg.v_F / (2.0 * math.pi * cfg.D * 1e-9) / 1e12


def extract_ndr(curve: IVCurve) -> NdrReport:
    """
    Peak, valley and slope metrics of the first dominant NDR region.

    The valley candidate is the point with the largest fractional drop below
    the running maximum of the interior points preceding it; the peak is the
    maximum before that point, and the valley is then the minimum after the peak.

    Raises:
        NoNdrDetected: the current never falls below an earlier interior value.
    """
    V = curve.voltages
    I = curve.currents
    keep = V >= 0.0
    V, I = V[keep], I[keep]
    if V.size < MIN_NDR_POINTS:
        raise NoNdrDetected(f"need at least {MIN_NDR_POINTS} points with V >= 0")
    if np.all(np.diff(I) >= 0.0):
        raise NoNdrDetected("current is nondecreasing over the whole sweep")

    running_max = np.maximum.accumulate(I[1:-1])  # max of I[1..j-1] for j = 2..n-1
    later = I[2:]
    with np.errstate(divide="ignore", invalid="ignore"):
        drop = np.where(running_max > later, (running_max - later) / np.abs(running_max), 0.0)
    if not np.any(drop > 0.0):
        raise NoNdrDetected("no interior maximum is followed by a lower current")

    candidate = 2 + int(np.argmax(drop))
    peak = 1 + int(np.argmax(I[1:candidate]))
    valley = peak + 1 + int(np.argmin(I[peak + 1 :]))

    I_peak, I_valley = float(I[peak]), float(I[valley])
    pvr = I_peak / I_valley if I_valley > 0.0 else math.inf
    return NdrReport(
        V_peak=float(V[peak]),
        I_peak=I_peak,
        V_valley=float(V[valley]),
        I_valley=I_valley,
        pvr=pvr,
        min_dIdV=float(np.min(np.gradient(I, V))),
        f_c=cutoff_frequency(curve.config_echo),
        I_peak_A=I_peak * CURRENT_UNIT_SI,
    )


def trend_check(
    reports: Sequence[NdrReport], values: Sequence[float], parameter: str = "alpha"
) -> TrendVerdict:
    """Whether PVR rises and peak current falls along a family ordered by ``values``."""
    if len(reports) < 2 or len(reports) != len(values):
        raise ValueError("trend_check needs at least 2 reports, one per parameter value")
    if np.any(np.diff(np.asarray(values, dtype=float)) <= 0):
        raise ValueError("varied parameter must be strictly increasing")

    pvr = [r.pvr for r in reports]
    peaks = [r.I_peak for r in reports]
    return TrendVerdict(
        parameter=parameter,
        values=[float(v) for v in values],
        pvr=pvr,
        I_peak=peaks,
        pvr_increasing=bool(np.all(np.diff(pvr) > 0)),
        I_peak_decreasing=bool(np.all(np.diff(peaks) < 0)),
    )


def width_sensitivity(reference: NdrReport, other: NdrReport) -> float:
    """Relative shift of V_peak between two barrier widths."""
    return abs(other.V_peak - reference.V_peak) / abs(reference.V_peak)
