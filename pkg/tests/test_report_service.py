import json

import pytest

from app.errors import ConfigError, IoError
from app.models import CheckStatus, SuiteConfig, TolProfile
from app.services.report_service import report_service


def _config(tmp_path, suites, profile=TolProfile.strict, workers=2) -> SuiteConfig:
    return SuiteConfig(suites=suites, tol_profile=profile, seed=5, output_path=str(tmp_path / "report.json"),
                       workers=workers)


def test_records_cover_each_status(fake_suites, tmp_path):
    report = report_service.run_suite(_config(tmp_path, ["fake"]))
    by_name = {r.name: r for r in report.records}
    assert by_name["small"].status == CheckStatus.passed
    assert by_name["large"].status == CheckStatus.failed
    assert by_name["large"].max_residual == pytest.approx(1e-3)
    assert by_name["large"].n_points == 2
    assert by_name["large"].detail == "worst entries: x=1.00e-03, y=0.00e+00"
    assert by_name["skip"].status == CheckStatus.skipped
    assert by_name["skip"].detail == "not available"
    assert by_name["boom"].status == CheckStatus.failed
    assert by_name["boom"].detail.startswith("DomainError")
    assert by_name["boom"].max_residual is None
    assert report.summary.model_dump() == {"passed": 1, "failed": 2, "skipped": 1}
    assert not report.ok


def test_records_keep_registration_order(fake_suites, tmp_path):
    report = report_service.run_suite(_config(tmp_path, ["clean", "fake"], workers=4))
    assert report.suites == ["fake", "clean"]
    assert [r.suite for r in report.records] == ["fake"] * 4 + ["clean"] * 8
    assert [r.name for r in report.records][4:6] == ["zero 0", "zero 1"]


def test_profile_scales_tolerance(fake_suites, tmp_path):
    report = report_service.run_suite(_config(tmp_path, ["fake"], profile=TolProfile.fast))
    assert all(r.tolerance == pytest.approx(1e-5) for r in report.records)


def test_fast_profile_reduces_point_counts(fake_suites, tmp_path):
    report = report_service.run_suite(_config(tmp_path, ["clean"], profile=TolProfile.fast))
    assert len(report.records) == 2
    assert report.ok


def test_all_selects_every_registered_suite(fake_suites, tmp_path):
    report = report_service.run_suite(_config(tmp_path, ["all"]))
    assert report.suites == ["fake", "clean"]
    assert report.seed == 5


def test_unknown_suite(fake_suites, tmp_path):
    with pytest.raises(ConfigError) as info:
        report_service.run_suite(_config(tmp_path, ["algebra"]))
    assert info.value.valid == ["all", "fake", "clean"]


def test_write_report(fake_suites, tmp_path):
    report = report_service.run_suite(_config(tmp_path, ["clean"]))
    path = report_service.write_report(report, str(tmp_path / "nested" / "out.json"))
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    assert data["suites"] == ["clean"]
    assert data["tol_profile"] == "strict"
    assert data["summary"] == {"passed": 8, "failed": 0, "skipped": 0}
    assert data["records"][0]["status"] == "pass"


def test_write_report_errors(fake_suites, tmp_path):
    report = report_service.run_suite(_config(tmp_path, ["clean"]))
    with pytest.raises(IoError):
        report_service.write_report(report, str(tmp_path))
    with pytest.raises(ConfigError):
        report_service.write_report(report, "")
