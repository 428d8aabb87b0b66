"""Finite-temperature Landauer current through the barrier at fixed k_y.

Currents are in units of (2e/h)*meV per transverse mode; multiply by
``CURRENT_UNIT_SI`` for amperes.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Optional, Sequence, Union

import numpy as np
from opentelemetry import trace
from scipy.integrate import quad
from scipy.special import expit

from graphene_ndr.config import BiasSweep, DeviceConfig
from graphene_ndr.core.scattering import device_potentials, solve_barrier
from graphene_ndr.core.units import DerivedQuantities, derive
from graphene_ndr.errors import QuadratureBudgetExceeded, ScatteringError
from graphene_ndr.shared.logging_config import get_logger

logger = get_logger(__name__)
tracer = trace.get_tracer(__name__)

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class IVPoint:
    V: float  # mV
    I: float  # (2e/h)*meV
    n_evals: int
    est_error: float
    converged: bool = True


@dataclass(frozen=True)
class IVCurve:
    points: tuple[IVPoint, ...]
    config_echo: DeviceConfig
    warnings: tuple[str, ...] = field(default=())

    @property
    def voltages(self) -> np.ndarray:
        return np.array([p.V for p in self.points])

    @property
    def currents(self) -> np.ndarray:
        return np.array([p.I for p in self.points])

    @property
    def flagged(self) -> list[IVPoint]:
        return [p for p in self.points if not p.converged]


def fermi_occupation(E: ArrayLike, mu: float, kT: float) -> ArrayLike:
    """Fermi-Dirac occupation; a step with value 1/2 at E = mu when kT = 0."""
    delta = np.asarray(E, dtype=float) - mu
    if kT == 0.0:
        occupation = np.where(delta < 0.0, 1.0, np.where(delta > 0.0, 0.0, 0.5))
    else:
        occupation = expit(-delta / kT)
    if np.ndim(occupation) == 0:
        return float(occupation)
    return occupation


def integration_window(
    V: float, cfg: DeviceConfig, dq: Optional[DerivedQuantities] = None, holes: bool = False
) -> tuple[float, float]:
    """Energy window (meV) of the electron branch, or of the hole branch when ``holes``."""
    dq = dq or derive(cfg)
    guard = cfg.quadrature.guard
    edge = dq.hbar_vF * abs(dq.k_y)
    reach = dq.E_F + abs(V) + cfg.quadrature.window_kT * dq.thermal_energy
    if holes:
        return -reach, -edge - guard
    return max(edge, 0.0) + guard, reach


def integration_breakpoints(
    V: float,
    k_y: float,
    cfg: DeviceConfig,
    dq: Optional[DerivedQuantities] = None,
    window: Optional[tuple[float, float]] = None,
) -> list[float]:
    """
    Energies inside the window where the Landauer integrand is not smooth.

    Band edges of all three regions and the region-2/3 Dirac points, plus
    the contact chemical potentials at zero temperature; each point is
    replaced by the pair point -/+ guard.
    """
    dq = dq or derive(cfg)
    low, high = window or integration_window(V, cfg, dq)
    guard = cfg.quadrature.guard
    edge = dq.hbar_vF * abs(k_y)
    _, u2, u3 = device_potentials(V, cfg.V0)

    centers = [edge, -edge, u2 - edge, u2, u2 + edge, u3 - edge, u3, u3 + edge]
    if dq.thermal_energy == 0.0:
        centers += [dq.E_F, dq.E_F - V]

    points = {c + offset for c in centers for offset in (-guard, guard)}
    return sorted(p for p in points if low < p < high)


def _integrand(
    E: float, V: float, cfg: DeviceConfig, dq: DerivedQuantities, mu_left: float, mu_right: float
) -> float:
    try:
        solution = solve_barrier(E, dq.k_y, V, cfg, dq)
    except ScatteringError:
        return 0.0
    if solution.T == 0.0 or solution.mixed_band_signs:
        return 0.0
    kT = dq.thermal_energy
    return solution.T * (fermi_occupation(E, mu_left, kT) - fermi_occupation(E, mu_right, kT))


def _panels(
    V: float, cfg: DeviceConfig, dq: DerivedQuantities, use_breakpoints: bool
) -> list[tuple[float, float]]:
    windows = [integration_window(V, cfg, dq)]
    if cfg.include_hole_branch:
        windows.append(integration_window(V, cfg, dq, holes=True))

    panels = []
    min_width = 4.0 * cfg.quadrature.guard
    for low, high in windows:
        if high <= low:
            continue
        inner = integration_breakpoints(V, dq.k_y, cfg, dq, (low, high)) if use_breakpoints else []
        edges = [low, *inner, high]
        # guard intervals straddle a breakpoint and are skipped
        panels.extend((a, b) for a, b in zip(edges[:-1], edges[1:]) if b - a > min_width)
    return panels


def current(
    V: float,
    cfg: DeviceConfig,
    *,
    dq: Optional[DerivedQuantities] = None,
    use_breakpoints: bool = True,
    strict: bool = False,
) -> IVPoint:
    """
    Landauer current at bias V (mV).

    I = integral of T(E, k_y, V) [f(E, E_F) - f(E, E_F - eV)] dE, evaluated
    panel by panel between breakpoints with adaptive Gauss-Kronrod quadrature.

    Raises:
        QuadratureBudgetExceeded: only when ``strict``; otherwise the best
            estimate is returned with ``converged=False``.
    """
    if V == 0.0:
        return IVPoint(V=0.0, I=0.0, n_evals=0, est_error=0.0)

    dq = dq or derive(cfg)
    tolerances = cfg.quadrature
    mu_left, mu_right = dq.E_F, dq.E_F - V
    panels = _panels(V, cfg, dq, use_breakpoints)

    # per-panel tolerances sum to at most half of the global ones
    epsabs = 0.5 * tolerances.abs_tol / max(len(panels), 1)
    epsrel = 0.5 * tolerances.rel_tol

    total, error, n_evals, converged = 0.0, 0.0, 0, True
    for low, high in panels:
        result = quad(
            _integrand,
            low,
            high,
            args=(V, cfg, dq, mu_left, mu_right),
            epsabs=epsabs,
            epsrel=epsrel,
            limit=tolerances.max_subdivisions,
            full_output=1,
        )
        value, abserr, info = result[:3]
        total += value
        error += abserr
        n_evals += int(info["neval"])
        # a fourth element (the message) is only present when ier > 0
        converged = converged and len(result) == 3

    converged = converged and error <= max(tolerances.rel_tol * abs(total), tolerances.abs_tol)
    point = IVPoint(V=float(V), I=total, n_evals=n_evals, est_error=error, converged=converged)
    if not converged:
        logger.warning(
            "current.budget_exceeded", V=float(V), I=total, est_error=error, n_evals=n_evals
        )
        if strict:
            raise QuadratureBudgetExceeded(point)
    else:
        logger.debug("current.point", V=float(V), I=total, n_evals=n_evals)
    return point


def bias_grid(sweep: BiasSweep) -> np.ndarray:
    """
    Uniform grid of the sweep; a point within rounding of zero is snapped to 0.

    Zero is never inserted, so a grid that steps over it has no V = 0 point.
    """
    grid = sweep.grid()
    if sweep.start <= 0.0 <= sweep.stop:
        nearest = int(np.argmin(np.abs(grid)))
        if abs(grid[nearest]) <= 1e-9 * sweep.step:
            grid[nearest] = 0.0
    return grid


def iv_sweep(
    cfg: DeviceConfig, workers: int = 1, voltages: Optional[Sequence[float]] = None
) -> IVCurve:
    """
    Current on every point of the configured bias grid.

    Points are independent; with ``workers > 1`` they are evaluated in a
    process pool and collected in grid order, so the result does not depend
    on scheduling.
    """
    grid = np.asarray(voltages if voltages is not None else bias_grid(cfg.bias_sweep), dtype=float)
    with tracer.start_as_current_span("iv_sweep") as span:
        span.set_attribute("bias.count", int(grid.size))
        span.set_attribute("workers", workers)
        logger.info("iv_sweep.start", count=int(grid.size), workers=workers)

        evaluate = partial(current, cfg=cfg)
        if workers > 1:
            chunksize = max(1, math.ceil(grid.size / (4 * workers)))
            with ProcessPoolExecutor(max_workers=workers) as pool:
                points = tuple(pool.map(evaluate, grid.tolist(), chunksize=chunksize))
        else:
            points = tuple(evaluate(v) for v in grid.tolist())

        warnings = tuple(
            f"quadrature tolerance not met at V = {p.V:.17g} mV "
            f"(est_error {p.est_error:.3g})"
            for p in points
            if not p.converged
        )
        for message in warnings:
            logger.warning("iv_sweep.point_flagged", detail=message)
        logger.info("iv_sweep.complete", count=len(points), flagged=len(warnings))
        return IVCurve(points=points, config_echo=cfg, warnings=warnings)
