# ABOUTME: `check` command: runs named verification suites under a tolerance profile
# ABOUTME: Writes the JSON check report and returns 0 only when every check passed

import argparse
import os

from pydantic import ValidationError

from app.errors import ConfigError
from app.models import CheckStatus, SuiteConfig, TolProfile
from app.services.check_suite_factory import ALL, CheckSuiteFactory
from app.services.report_service import report_service
from config import settings
from logging_config import get_logger

logger = get_logger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("check", help="run verification suites and write a JSON report")
    parser.add_argument("--suite", action="append", dest="suites", metavar="NAME",
                        help=f"suite to run (repeatable); '{ALL}' selects every suite")
    parser.add_argument("--profile", choices=[p.value for p in TolProfile], default=settings.TOL_PROFILE)
    parser.add_argument("--seed", type=int, default=settings.SEED)
    parser.add_argument("--out", default=os.path.join(settings.OUTPUT_DIR, "check_report.json"))
    parser.add_argument("--workers", type=int, default=settings.WORKERS)
    parser.add_argument("--list", action="store_true", help="print the registered suite names and exit")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    if args.list:
        for name in CheckSuiteFactory.names():
            print(name)
        return 0

    try:
        cfg = SuiteConfig(
            suites=args.suites or [ALL],
            tol_profile=TolProfile(args.profile),
            seed=args.seed,
            output_path=args.out,
            workers=args.workers,
        )
    except ValidationError as e:
        raise ConfigError(f"invalid check configuration: {e.errors()[0]['msg']}") from e

    logger.info(f"Running suites {cfg.suites} with profile {cfg.tol_profile.value}, seed {cfg.seed}")
    report = report_service.run_suite(cfg)
    report_service.write_report(report, cfg.output_path)

    for record in report.records:
        if record.status != CheckStatus.passed:
            print(f"{record.status.value.upper():5} {record.suite}/{record.name}: {record.detail}")
    summary = report.summary
    print(f"{summary.passed} passed, {summary.failed} failed, {summary.skipped} skipped -> {cfg.output_path}")
    return 0 if report.ok else 1
