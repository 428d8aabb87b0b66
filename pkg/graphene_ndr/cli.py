import argparse
import sys
import time
import uuid
from typing import Optional, Sequence

from dotenv import load_dotenv
from opentelemetry import trace

from graphene_ndr.commands import get_commands
from graphene_ndr.config import RunOptions
from graphene_ndr.errors import ConfigError, GrapheneNdrError
from graphene_ndr.io.writer import OutputWriter
from graphene_ndr.shared import configure_logging, configure_tracing, get_logger, run_id

SERVICE_NAME = "graphene-ndr"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

logger = get_logger(SERVICE_NAME)
tracer = trace.get_tracer(__name__)


def setup_argparse() -> argparse.ArgumentParser:
    """
    Setup command line argument parsing: one subcommand per registered command,
    all sharing the same option groups.
    """
    parser = argparse.ArgumentParser(
        prog=SERVICE_NAME,
        description="Dirac scattering, Landauer I-V and NDR metrics of a gated graphene barrier",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )

    common = argparse.ArgumentParser(add_help=False)

    # Input/Output options
    io_group = common.add_argument_group("Input/Output Options")
    io_group.add_argument("--config", type=str, help="Path to the JSON device configuration")
    io_group.add_argument("--out", default="out", help="Output directory")
    io_group.add_argument("--iv", type=str, help="I-V CSV to analyze (analyze only)")
    io_group.add_argument(
        "--presets", type=str, help="YAML figure presets replacing the built-in ones"
    )

    # Sweep options
    sweep_group = common.add_argument_group("Sweep Options")
    sweep_group.add_argument(
        "--sweep",
        type=str,
        help="Transmission sweep <var>:<start>:<stop>:<count>, var one of V, E, phi1",
    )
    sweep_group.add_argument("--svg", action="store_true", help="Also write SVG plots")

    # Debug options
    debug_group = common.add_argument_group("Debug Options")
    debug_group.add_argument(
        "--log-level",
        dest="log_level",
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Log level of the JSON events on stderr",
    )
    debug_group.add_argument("--debug", action="store_true", help="Shortcut for --log-level DEBUG")

    subparsers = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name, handler in sorted(get_commands().items()):
        summary = (handler.__doc__ or "").strip().splitlines()
        subparsers.add_parser(
            name,
            parents=[common],
            help=summary[0] if summary else None,
            formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        )

    return parser


def run_command(options: RunOptions) -> int:
    """
    Run one command inside its span, write the manifest last, map errors to exit codes.

    Every file the command wrote is removed again when it fails.
    """
    handler = get_commands()[options.command]
    start_time = time.perf_counter()
    logger.info(
        "command.start",
        command=options.command,
        out_dir=str(options.out_dir),
        workers=options.workers,
    )

    with tracer.start_as_current_span(f"command.{options.command}") as span:
        span.set_attribute("workers", options.workers)
        try:
            with OutputWriter(options.out_dir) as writer:
                outcome = handler(options, writer)
                manifest = writer.write_manifest(
                    options.command,
                    outcome.resolved_config,
                    time.perf_counter() - start_time,
                    outcome.warnings,
                )
        except ConfigError as e:
            logger.exception("command.error", command=options.command, error=str(e), key=e.key)
            return EXIT_CONFIG
        except (GrapheneNdrError, OSError) as e:
            logger.exception("command.error", command=options.command, error=str(e))
            return EXIT_RUNTIME

    logger.info(
        "command.complete",
        command=options.command,
        outputs=manifest.outputs,
        warnings=len(manifest.warnings),
        wall_time=manifest.wall_time,
    )
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()

    parser = setup_argparse()
    args = parser.parse_args(argv)

    configure_logging(SERVICE_NAME, "DEBUG" if args.debug else args.log_level)
    configure_tracing(SERVICE_NAME)
    run_id.set(str(uuid.uuid4()))

    try:
        options = RunOptions.from_args(args)
    except ConfigError as e:
        logger.error("command.invalid_options", error=str(e), key=e.key)
        return EXIT_CONFIG

    return run_command(options)


if __name__ == "__main__":
    sys.exit(main())
