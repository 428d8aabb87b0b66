from dataclasses import dataclass, field
from typing import Callable, Dict

from graphene_ndr.config import DeviceConfig, RunOptions, load_config
from graphene_ndr.io.writer import OutputWriter


@dataclass
class CommandOutcome:
    """What a command hands back for the run manifest."""

    resolved_config: dict
    warnings: list[str] = field(default_factory=list)


CommandHandler = Callable[[RunOptions, OutputWriter], CommandOutcome]

_commands: Dict[str, CommandHandler] = {}


def command(name: str):
    """Decorator to register a CLI command by name."""

    def decorator(func: CommandHandler):
        _commands[name] = func
        return func

    return decorator


def get_commands() -> Dict[str, CommandHandler]:
    """Retrieve the registered commands."""
    return _commands


def device_config(options: RunOptions) -> DeviceConfig:
    return load_config(options.config_path)
