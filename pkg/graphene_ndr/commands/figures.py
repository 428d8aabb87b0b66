"""Curve families of the device figures: transmission gaps, I-V versus k_F, angle and width."""

from typing import Optional, Union

import numpy as np
import pandas as pd
from opentelemetry import trace
from pydantic import BaseModel

from graphene_ndr.commands.registry import CommandOutcome, command
from graphene_ndr.config import RunOptions
from graphene_ndr.core.analysis import (
    GapReport,
    NdrReport,
    TrendVerdict,
    extract_ndr,
    find_gap,
    trend_check,
    width_sensitivity,
)
from graphene_ndr.core.landauer import IVCurve, bias_grid, iv_sweep
from graphene_ndr.core.sweeps import SweepKind, transmission_at
from graphene_ndr.errors import AnalysisError
from graphene_ndr.figures.presets import FamilyPreset, FigurePresets, load_presets
from graphene_ndr.io.plots import family_plot
from graphene_ndr.io.writer import OutputWriter
from graphene_ndr.shared.logging_config import get_logger

logger = get_logger(__name__)
tracer = trace.get_tracer(__name__)


class FiguresSummary(BaseModel):
    """Metrics extracted from every family; entries are a report or the reason there is none."""

    gaps: dict[str, Union[GapReport, str]]
    ndr: dict[str, Union[NdrReport, str]]
    trends: dict[str, TrendVerdict]
    width_sensitivity: Optional[float] = None


def _transmission_family(
    name: str, family: FamilyPreset, presets: FigurePresets, summary: dict
) -> pd.DataFrame:
    configs = family.configs(presets.base)
    grid = bias_grid(configs[0][1].bias_sweep)
    columns = {"V_mV": grid}
    with tracer.start_as_current_span("figures.family") as span:
        span.set_attribute("figure", name)
        span.set_attribute("parameter", family.parameter)
        for value, cfg in configs:
            samples = transmission_at(cfg, SweepKind.V, grid.tolist())
            label = family.column("T", value)
            columns[label] = np.array([s.T for s in samples])
            try:
                summary[label] = find_gap([(s.x, s.T) for s in samples], cfg=cfg)
            except AnalysisError as e:
                summary[label] = str(e)
    return pd.DataFrame(columns)


def _iv_family(
    name: str, family: FamilyPreset, presets: FigurePresets, workers: int
) -> tuple[pd.DataFrame, list[tuple[float, IVCurve]]]:
    configs = family.configs(presets.base)
    grid = bias_grid(configs[0][1].bias_sweep)
    columns = {"V_mV": grid}
    curves = []
    with tracer.start_as_current_span("figures.family") as span:
        span.set_attribute("figure", name)
        span.set_attribute("parameter", family.parameter)
        for value, cfg in configs:
            logger.info("figures.curve", figure=name, parameter=family.parameter, value=value)
            curve = iv_sweep(cfg, workers=workers, voltages=grid)
            columns[family.column("I", value)] = curve.currents
            curves.append((value, curve))
    return pd.DataFrame(columns), curves


def _ndr_reports(
    family: FamilyPreset, curves: list[tuple[float, IVCurve]], summary: dict
) -> list[tuple[float, NdrReport]]:
    reports = []
    for value, curve in curves:
        label = family.column("I", value)
        try:
            report = extract_ndr(curve)
        except AnalysisError as e:
            summary[label] = str(e)
            continue
        summary[label] = report
        reports.append((value, report))
    return reports


@command("figures")
def cmd_figures(options: RunOptions, writer: OutputWriter) -> CommandOutcome:
    """Transmission and I-V families with their gap, NDR and trend summaries."""
    presets = load_presets(options.presets)
    warnings: list[str] = []
    gaps: dict = {}
    ndr: dict = {}
    trends: dict[str, TrendVerdict] = {}

    frame = _transmission_family("fig2", presets.fig2, presets, gaps)
    writer.write_csv("fig2.csv", frame)
    if options.svg:
        curves = {c: frame[c].to_numpy() for c in frame.columns[1:]}
        writer.write_svg("fig2.svg", family_plot(frame["V_mV"].to_numpy(), curves, "V (mV)", "T"))

    iv_families = [("fig3", presets.fig3), ("fig4", presets.fig4)]
    if presets.width is not None:
        iv_families.append(("width", presets.width))

    width_reports: list[tuple[float, NdrReport]] = []
    for name, family in iv_families:
        frame, curves = _iv_family(name, family, presets, options.workers)
        writer.write_csv(f"{name}.csv", frame)
        if options.svg:
            columns = {c: frame[c].to_numpy() for c in frame.columns[1:]}
            figure = family_plot(frame["V_mV"].to_numpy(), columns, "V (mV)", "I ((2e/h) meV)")
            writer.write_svg(f"{name}.svg", figure)
        for _, curve in curves:
            warnings.extend(curve.warnings)

        reports = _ndr_reports(family, curves, ndr)
        if name == "width":
            width_reports = reports
            continue
        if len(reports) >= 2:
            verdict = trend_check(
                [r for _, r in reports], [v for v, _ in reports], parameter=family.parameter
            )
            trends[name] = verdict
            if not verdict.pvr_increasing:
                warnings.append(f"{name}: pvr does not increase with {family.parameter}")
            if not verdict.I_peak_decreasing:
                warnings.append(f"{name}: I_peak does not decrease with {family.parameter}")
        else:
            warnings.append(f"{name}: fewer than two curves show NDR, no trend verdict")

    sensitivity = None
    if len(width_reports) == 2:
        # reference is the wider barrier
        (_, narrow), (_, wide) = width_reports
        sensitivity = width_sensitivity(wide, narrow)

    summary = FiguresSummary(
        gaps=gaps, ndr=ndr, trends=trends, width_sensitivity=sensitivity
    )
    writer.write_model("figures_summary.json", summary)
    for name, verdict in trends.items():
        logger.info(
            "figures.trend",
            figure=name,
            pvr_increasing=verdict.pvr_increasing,
            I_peak_decreasing=verdict.I_peak_decreasing,
        )

    return CommandOutcome(resolved_config=presets.model_dump(mode="json"), warnings=warnings)
