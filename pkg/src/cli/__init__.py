"""
FluxCoupler CLI

Command-line front end over the simulation services.
"""

from .commands import COMMANDS, CommandContext
from .main import build_parser, exit_code_for, run

__all__ = [
    'COMMANDS',
    'CommandContext',
    'build_parser',
    'exit_code_for',
    'run',
]
