import numpy as np
import pytest

from app.errors import ConfigError
from app.models import SingularSet, TolProfile
from app.services.base_check_service import PROFILE_FACTOR, RegisteredCheck, SuiteContext
from app.services.check_suite_factory import ALL, CheckSuiteFactory
from app.services.check_suites import AlgebraSuite, EigenmodeSuite, FourierSuite, PositionSuite
from app.services.eigenmode_service import eigenmode_service
from app.utils.fields import axis_mask, odd_packets, radius

SUITE_NAMES = ["algebra", "generators", "fourier", "transforms", "eigenmodes", "position"]


def test_registered_suite_names():
    assert CheckSuiteFactory.names() == SUITE_NAMES


def test_resolve_expands_all_in_registration_order():
    assert CheckSuiteFactory.resolve([ALL]) == SUITE_NAMES
    assert CheckSuiteFactory.resolve(["position", "algebra", "position"]) == ["algebra", "position"]
    assert CheckSuiteFactory.resolve(["fourier", ALL]) == SUITE_NAMES


def test_unknown_suite_lists_valid_names():
    with pytest.raises(ConfigError) as info:
        CheckSuiteFactory.resolve(["algebra", "nope"])
    assert info.value.valid == [ALL, *SUITE_NAMES]
    assert "nope" in str(info.value)
    assert info.value.exit_code == 2
    with pytest.raises(ConfigError):
        CheckSuiteFactory.get_suite("nope")


def test_suite_instances_are_cached():
    CheckSuiteFactory.clear_cache()
    first = CheckSuiteFactory.get_suite("algebra")
    assert isinstance(first, AlgebraSuite)
    assert CheckSuiteFactory.get_suite("algebra") is first
    CheckSuiteFactory.clear_cache()
    assert CheckSuiteFactory.get_suite("algebra") is not first


def test_context_point_counts():
    assert SuiteContext(TolProfile.strict, 1).count(12) == 12
    assert SuiteContext(TolProfile.default, 1).count(12) == 12
    assert SuiteContext(TolProfile.fast, 1).count(12) == 3
    assert SuiteContext(TolProfile.fast, 1).count(5) == 2


def test_context_generator_depends_on_seed_and_suite():
    a = SuiteContext(TolProfile.strict, 7, 0).rng.normal(size=4)
    assert np.array_equal(a, SuiteContext(TolProfile.default, 7, 0).rng.normal(size=4))
    assert not np.array_equal(a, SuiteContext(TolProfile.strict, 7, 1).rng.normal(size=4))
    assert not np.array_equal(a, SuiteContext(TolProfile.strict, 8, 0).rng.normal(size=4))


@pytest.mark.parametrize("profile, factor", [("strict", 1.0), ("default", 3.0), ("fast", 10.0)])
def test_tolerance_profiles(profile, factor):
    check = RegisteredCheck("c", "anchor", 1e-6, lambda: None)
    assert AlgebraSuite().tolerance(check, profile) == pytest.approx(1e-6 * factor)
    assert PROFILE_FACTOR[TolProfile(profile)] == factor


def test_algebra_suite_covers_every_pair():
    checks = AlgebraSuite().checks(SuiteContext(TolProfile.strict, 1))
    assert len(checks) == 45
    assert all(c.tolerance == 1e-6 for c in checks)
    assert "[K1, K2]" in {c.name for c in checks}


@pytest.mark.parametrize("name", SUITE_NAMES)
def test_every_suite_builds_named_checks(name):
    suite = CheckSuiteFactory.get_suite(name)
    checks = suite.checks(SuiteContext(TolProfile.fast, 3))
    names = [c.name for c in checks]
    assert checks
    assert len(set(names)) == len(names)
    assert all(c.anchor and c.tolerance > 0.0 for c in checks)
    assert suite.description


def test_off_axis_points():
    suite = PositionSuite()
    ctx = SuiteContext(TolProfile.strict, 11)
    pts = suite.off_axis_points(ctx, 40, 0.5, 2.0)
    assert pts.shape == (40, 3)
    r = radius(pts)
    assert np.all((r >= 0.5) & (r <= 2.0))
    assert not axis_mask(pts, SingularSet.full_z_axis, tube=0.2).any()
    assert np.array_equal(pts, suite.off_axis_points(ctx, 40, 0.5, 2.0))


def test_fourier_gaussian_check_passes():
    checks = {c.name: c for c in FourierSuite().checks(SuiteContext(TolProfile.strict, 1))}
    res = checks["Fc gaussian"].run()
    assert res.within(checks["Fc gaussian"].tolerance)


def test_position_field_checks_cover_odd_family_in_fast_profile():
    checks = {c.name: c for c in PositionSuite().checks(SuiteContext(TolProfile.fast, 1))}
    family = {f.label for f in odd_packets()}
    assert len(family) == 12
    for name in ("K-bar forms", "null position", "r0 commutes", "unitary sandwich"):
        fields = checks[name].run.args[2]
        assert {f.label for f in fields} == family
    assert {f.label for f in checks["boost-position"].run.args[0]} == family
    # fewer points, same fields
    assert len(checks["null position"].run.args[3]) == SuiteContext(TolProfile.fast, 1).count(6)


def _growth_check():
    checks = {c.name: c for c in EigenmodeSuite().checks(SuiteContext(TolProfile.strict, 1))}
    return checks["growth bound |w| <= C sqrt(r)"]


def test_growth_bound_holds_for_quasi_plane_waves():
    check = _growth_check()
    res = check.run()
    assert res.within(check.tolerance), res.details
    assert len(res.details) == 6
    assert all(0.0 < v < 1.0 for v in res.details.values())


def test_growth_bound_flags_faster_than_sqrt_r(monkeypatch):
    # sup |w| / sqrt(r) rising like r^0.1 from one decade to the next
    monkeypatch.setattr(eigenmode_service, "growth_ratio", lambda s, k, d, r: float(r[0]) ** 0.1)
    check = _growth_check()
    res = check.run()
    assert res.max_residual == pytest.approx(10.0 ** 0.1 - 1.0)
    assert not res.within(check.tolerance)
