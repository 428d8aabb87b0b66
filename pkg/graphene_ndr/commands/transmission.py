import math

from graphene_ndr.commands.registry import CommandOutcome, command, device_config
from graphene_ndr.config import RunOptions
from graphene_ndr.core.sweeps import SweepKind, SweepSpec, transmission_sweep
from graphene_ndr.io.plots import family_plot
from graphene_ndr.io.tables import transmission_frame
from graphene_ndr.io.writer import OutputWriter
from graphene_ndr.shared.logging_config import get_logger

logger = get_logger(__name__)

AXIS_LABELS = {
    SweepKind.V: "V (mV)",
    SweepKind.E: "E (meV)",
    SweepKind.PHI1: "phi1 (deg)",
}


@command("transmission")
def cmd_transmission(options: RunOptions, writer: OutputWriter) -> CommandOutcome:
    """T along a bias, energy or angle sweep; defaults to the configured bias grid."""
    cfg = device_config(options)
    if options.sweep is not None:
        spec = SweepSpec.parse(options.sweep)
    else:
        grid = cfg.bias_sweep
        spec = SweepSpec(SweepKind.V, grid.start, grid.stop, grid.count)

    samples = transmission_sweep(cfg, spec)
    frame = transmission_frame(samples)
    writer.write_csv("transmission.csv", frame)
    if options.svg:
        figure = family_plot(
            frame["x"].to_numpy(), {"T": frame["T"].to_numpy()}, AXIS_LABELS[spec.kind], "T"
        )
        writer.write_svg("transmission.svg", figure)

    unresolved = [s for s in samples if math.isnan(s.T)]
    warnings = [f"{len(unresolved)} sweep points at a degeneracy (T = nan)"] if unresolved else []
    logger.info("transmission.complete", kind=spec.kind.value, count=len(samples))
    return CommandOutcome(resolved_config=cfg.resolved(), warnings=warnings)
