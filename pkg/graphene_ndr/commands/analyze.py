from typing import Optional

from pydantic import BaseModel, Field

from graphene_ndr.commands.registry import CommandOutcome, command, device_config
from graphene_ndr.config import RunOptions
from graphene_ndr.core.analysis import (
    GapReport,
    NdrReport,
    cutoff_frequency,
    extract_ndr,
    find_gap,
)
from graphene_ndr.core.sweeps import SweepKind, transmission_at
from graphene_ndr.core.units import CURRENT_UNIT_SI, VALLEY_DEGENERACY
from graphene_ndr.errors import AnalysisError, NoNdrDetected
from graphene_ndr.io.plots import iv_plot
from graphene_ndr.io.tables import read_iv_csv
from graphene_ndr.io.writer import OutputWriter
from graphene_ndr.shared.logging_config import get_logger

logger = get_logger(__name__)


class AnalysisReport(BaseModel):
    """Metrics of one I-V table. Infinite ratios serialize as null."""

    source: str
    ndr_detected: bool
    ndr: Optional[NdrReport] = None
    ndr_reason: Optional[str] = Field(None, description="Why no NDR region was found")
    gap: Optional[GapReport] = None
    gap_reason: Optional[str] = Field(None, description="Why no transmission gap is reported")
    f_c_THz: float
    pvr_in_reported_range: Optional[bool] = Field(
        None, description="Informational: 2.5 <= pvr <= 4"
    )
    current_unit_A: float = Field(CURRENT_UNIT_SI, description="Amperes per unit of I_norm")
    valley_degeneracy: int = Field(
        VALLEY_DEGENERACY, description="Not folded into the currents"
    )


@command("analyze")
def cmd_analyze(options: RunOptions, writer: OutputWriter) -> CommandOutcome:
    """Gap and NDR metrics of an existing I-V table."""
    cfg = device_config(options)
    curve = read_iv_csv(options.iv_csv, cfg)

    ndr: Optional[NdrReport] = None
    ndr_reason = None
    try:
        ndr = extract_ndr(curve)
    except NoNdrDetected as e:
        # absence of NDR is a result, not a failure
        ndr_reason = str(e)
        logger.info("analyze.no_ndr", reason=ndr_reason)

    gap: Optional[GapReport] = None
    gap_reason = None
    samples = transmission_at(cfg, SweepKind.V, curve.voltages.tolist())
    try:
        gap = find_gap([(s.x, s.T) for s in samples], cfg=cfg)
    except (AnalysisError, ValueError) as e:
        gap_reason = str(e)
        logger.info("analyze.no_gap", reason=gap_reason)

    report = AnalysisReport(
        source=str(options.iv_csv),
        ndr_detected=ndr is not None,
        ndr=ndr,
        ndr_reason=ndr_reason,
        gap=gap,
        gap_reason=gap_reason,
        f_c_THz=cutoff_frequency(cfg),
        pvr_in_reported_range=ndr.pvr_in_reported_range if ndr else None,
    )
    writer.write_model("report.json", report)
    if options.svg:
        writer.write_svg("iv.svg", iv_plot(curve.voltages, curve.currents, ndr))

    logger.info("analyze.complete", ndr_detected=report.ndr_detected, gap=gap is not None)
    return CommandOutcome(resolved_config=cfg.resolved())
