# ABOUTME: Command-line entry point for the massless Poincare operator verification harness
# ABOUTME: Builds the check/grid/eval commands, configures logging and maps errors to exit codes

import argparse
import sys
from typing import List, Optional

from app.errors import ConfigError, IoError, OperatorError
from app.routers import check, evaluate, grid
from config import settings
from logging_config import get_logger, setup_logging

logger = get_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poincare-harness",
        description="Numerical checks of the massless Poincare generators on the 1/r space",
    )
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
                        default=settings.LOG_LEVEL)
    subparsers = parser.add_subparsers(dest="command", required=True)
    check.register(subparsers)
    grid.register(subparsers)
    evaluate.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits with 2 on bad arguments, matching the config error code
        return int(e.code or 0)

    setup_logging(args.log_level)
    try:
        return args.handler(args)
    except ConfigError as e:
        logger.error(f"Configuration error: {e.message}")
        print(f"error: {e.message}", file=sys.stderr)
        return ConfigError.exit_code
    except IoError as e:
        logger.error(f"I/O error: {e.message}")
        print(f"error: {e.message}", file=sys.stderr)
        return IoError.exit_code
    except OperatorError as e:
        logger.error(f"{type(e).__name__}: {e.message}")
        print(f"error: {e.message}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.error(f"Unexpected error: {e}", exc_info=True)
        return OperatorError.exit_code


if __name__ == "__main__":
    sys.exit(main())
