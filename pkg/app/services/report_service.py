# ABOUTME: Runs verification suites in a worker pool and assembles the check report
# ABOUTME: Records pass/fail/skip per check and writes the report as JSON

import os
import time
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional

from app.errors import ConfigError, IoError
from app.models import CheckRecord, CheckReport, CheckStatus, CheckSummary, SuiteConfig, TolProfile
from app.services.base_check_service import CheckSuite, RegisteredCheck, SuiteContext
from app.services.check_suite_factory import CheckSuiteFactory
from logging_config import get_logger

logger = get_logger(__name__)


class ReportService:
    """Executes registered checks and aggregates their records."""

    def run_check(self, suite: CheckSuite, check: RegisteredCheck, profile: TolProfile) -> CheckRecord:
        tolerance = suite.tolerance(check, profile)
        start = time.perf_counter()
        try:
            residual = check.run()
        except NotImplementedError as e:
            logger.warning(f"Skipping {suite.name}/{check.name}: {e}")
            return CheckRecord(name=check.name, suite=suite.name, anchor=check.anchor, tolerance=tolerance,
                               status=CheckStatus.skipped, detail=str(e))
        except Exception as e:
            logger.error(f"Check {suite.name}/{check.name} raised: {e}", exc_info=True)
            return CheckRecord(name=check.name, suite=suite.name, anchor=check.anchor, tolerance=tolerance,
                               wall_time_ms=1000.0 * (time.perf_counter() - start), status=CheckStatus.failed,
                               detail=f"{type(e).__name__}: {e}")
        elapsed = 1000.0 * (time.perf_counter() - start)
        passed = residual.within(tolerance)
        status = CheckStatus.passed if passed else CheckStatus.failed
        logger.debug(f"{suite.name}/{check.name}: residual {residual.max_residual:.3e} (tol {tolerance:.1e})")
        return CheckRecord(
            name=check.name,
            suite=suite.name,
            anchor=check.anchor,
            max_residual=residual.max_residual,
            tolerance=tolerance,
            n_points=residual.n_points,
            wall_time_ms=elapsed,
            status=status,
            detail=None if passed else f"worst entries: {self._worst_details(residual.details)}",
        )

    def _worst_details(self, details, limit: int = 3) -> str:
        ranked = sorted(details.items(), key=lambda item: -item[1])[:limit]
        return ", ".join(f"{name}={value:.2e}" for name, value in ranked) or "none"

    def run_suite(self, cfg: SuiteConfig) -> CheckReport:
        """Run every check of the selected suites; records keep registration order."""
        names = CheckSuiteFactory.resolve(cfg.suites)
        if cfg.tol_profile != TolProfile.strict:
            logger.warning(f"Tolerance profile '{cfg.tol_profile.value}' loosens every check")

        jobs = []
        for index, name in enumerate(CheckSuiteFactory.names()):
            if name not in names:
                continue
            suite = CheckSuiteFactory.get_suite(name)
            ctx = SuiteContext(profile=cfg.tol_profile, seed=cfg.seed, suite_index=index)
            checks = suite.checks(ctx)
            logger.info(f"Suite {name}: {len(checks)} checks")
            jobs.extend((suite, check) for check in checks)

        with ThreadPoolExecutor(max_workers=cfg.workers) as executor:
            futures = [executor.submit(self.run_check, suite, check, cfg.tol_profile) for suite, check in jobs]
            records: List[CheckRecord] = [future.result() for future in futures]

        summary = CheckSummary(
            passed=sum(r.status == CheckStatus.passed for r in records),
            failed=sum(r.status == CheckStatus.failed for r in records),
            skipped=sum(r.status == CheckStatus.skipped for r in records),
        )
        logger.info(f"Finished {len(records)} checks: {summary.passed} passed, {summary.failed} failed, "
                    f"{summary.skipped} skipped")
        return CheckReport(suites=names, tol_profile=cfg.tol_profile, seed=cfg.seed, records=records,
                           summary=summary)

    def write_report(self, report: CheckReport, path: Optional[str]) -> str:
        if not path:
            raise ConfigError("an output path is required")
        directory = os.path.dirname(path)
        try:
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(path, "w", encoding="utf-8") as handle:
                handle.write(report.model_dump_json(indent=2))
                handle.write("\n")
        except OSError as e:
            raise IoError(f"cannot write report to {path}: {e}") from e
        logger.info(f"Wrote report to {path}")
        return path


report_service = ReportService()
