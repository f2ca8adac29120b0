"""
FluxCoupler Command-Line Interface

Usage:
    python -m src.cli coupler-response --config run.json --out output/
    python -m src.cli noise-fit --config run.json --data rates.csv

Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 data error.
"""

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError as PydanticValidationError

from .. import __version__
from ..config import get_config
from ..exceptions import (
    ConfigError,
    FluxCouplerError,
    InconsistentDataError,
    UnboundedAmplitudeError,
    UnphysicalNetworkError,
    ValidationError,
)
from ..models import load_run_config
from .commands import COMMANDS, CommandContext

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_DATA = 4


def exit_code_for(error: Exception) -> int:
    """Map an error to the documented process exit code."""
    if isinstance(error, (InconsistentDataError, UnboundedAmplitudeError)):
        return EXIT_DATA
    if isinstance(error, (ConfigError, ValidationError, UnphysicalNetworkError, PydanticValidationError)):
        return EXIT_CONFIG
    return EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fluxcoupler",
        description="Flux-qubit coupler simulations: coupler response, coupling strength, coherence and noise fits",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    for name, handler in COMMANDS.items():
        sub = subparsers.add_parser(name, help=(handler.__doc__ or "").strip().splitlines()[0])
        sub.add_argument("--config", type=str, default=None, help="Run config JSON (defaults apply when omitted)")
        sub.add_argument("--out", type=str, default=None, help="Output directory (overrides the config)")
        sub.add_argument("--threads", type=int, default=None, help="Worker threads (default: machine parallelism)")
        sub.add_argument("--svg", action="store_true", help="Render an SVG plot next to each CSV")
        sub.add_argument("--log-level", type=str.upper, default=None,
                         choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], help="Override LOG_LEVEL")
        if name == "noise-fit":
            sub.add_argument("--data", type=str, default=None, help="Measured rate table (CSV)")
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """Parse `argv`, execute one command and return its exit code."""
    args = build_parser().parse_args(argv)
    config = get_config()
    if args.log_level:
        config.logging.level = args.log_level
        config._setup_logging()

    start_time = time.time()
    try:
        run_config = load_run_config(args.config, config)
        out_dir = Path(args.out or run_config.output.directory)
        config.storage.ensure_directories(out_dir)
        threads = args.threads or config.performance.threads
        if threads <= 0:
            raise ValidationError(f"Thread count must be positive, got {threads}")
        context = CommandContext(
            config=config,
            out_dir=out_dir,
            threads=threads,
            svg=args.svg or run_config.output.svg,
            digest=run_config.digest(),
            data=Path(args.data) if getattr(args, "data", None) else None,
        )
        logger.info(f"Running {args.command} with {threads} thread(s) into {out_dir}")
        written = COMMANDS[args.command](run_config, context)
    except (FluxCouplerError, PydanticValidationError) as e:
        code = exit_code_for(e)
        point = getattr(e, "details", {}).get("flux_point") if isinstance(e, FluxCouplerError) else None
        location = f" at {point}" if point else ""
        logger.error(f"{args.command} failed{location}: {e}")
        print(f"error: {e}{location}", file=sys.stderr)
        return code

    logger.info(f"{args.command} wrote {len(written)} file(s) in {time.time() - start_time:.1f}s")
    for path in written:
        print(path)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
