from graphene_ndr.commands.registry import CommandOutcome, command, device_config
from graphene_ndr.config import RunOptions
from graphene_ndr.core.landauer import iv_sweep
from graphene_ndr.io.plots import iv_plot
from graphene_ndr.io.tables import iv_frame
from graphene_ndr.io.writer import OutputWriter


@command("iv")
def cmd_iv(options: RunOptions, writer: OutputWriter) -> CommandOutcome:
    """Current-voltage curve of one device over its bias grid."""
    cfg = device_config(options)
    curve = iv_sweep(cfg, workers=options.workers)
    writer.write_csv("iv.csv", iv_frame(curve))
    if options.svg:
        writer.write_svg("iv.svg", iv_plot(curve.voltages, curve.currents))
    # flagged quadrature points are reported, never fatal
    return CommandOutcome(resolved_config=cfg.resolved(), warnings=list(curve.warnings))
