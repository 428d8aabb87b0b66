# importing the command modules registers them
from graphene_ndr.commands import analyze, figures, iv, transmission  # noqa: F401
from graphene_ndr.commands.registry import CommandOutcome, command, get_commands

__all__ = ["CommandOutcome", "command", "get_commands"]
