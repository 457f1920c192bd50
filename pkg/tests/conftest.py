# ABOUTME: Shared pytest fixtures: seeded generators, quadrature specs, common test fields and fake suites
# ABOUTME: Point sets stay clear of the z axis so helicity phases are defined

from typing import List

import numpy as np
import pytest

from app.errors import DomainError
from app.models import Helicity, QuadratureSpec, Residual, SingularSet
from app.services.base_check_service import CheckSuite, RegisteredCheck, SuiteContext
from app.services.check_suite_factory import CheckSuiteFactory
from app.utils.fields import axis_mask, gaussian_packet, radius
from app.utils.residuals import absolute_residual, worst_of


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def spec() -> QuadratureSpec:
    return QuadratureSpec.default()


@pytest.fixture
def off_axis_points(rng):
    """12 points with |r| in [0.5, 4] outside a 0.2 tube around the z axis."""
    out = []
    while len(out) < 12:
        p = rng.normal(size=3)
        p *= rng.uniform(0.5, 4.0) / radius(p)
        if not axis_mask(p[None, :], SingularSet.full_z_axis, tube=0.2)[0]:
            out.append(p)
    return np.array(out)


@pytest.fixture
def gaussian():
    return gaussian_packet(1.0)


@pytest.fixture
def odd_packet():
    return gaussian_packet(1.0, (0, 0, 1))


@pytest.fixture(params=[0, 1, 2], ids=["s=0", "s=1/2", "s=1"])
def helicity(request) -> Helicity:
    return Helicity(two_s=request.param)


class FakeSuite(CheckSuite):
    """Cheap checks covering each record status."""

    name = "fake"
    description = "pass, fail, skip and raise"

    def checks(self, ctx: SuiteContext) -> List[RegisteredCheck]:
        def skip() -> Residual:
            raise NotImplementedError("not available")

        def boom() -> Residual:
            raise DomainError("bad point")

        return [
            RegisteredCheck("small", "anchor a", 1e-6, lambda: absolute_residual("small", np.array([1e-7]))),
            RegisteredCheck("large", "anchor b", 1e-6, lambda: worst_of("large", [
                absolute_residual("x", np.array([1e-3])), absolute_residual("y", np.array([0.0]))])),
            RegisteredCheck("skip", "anchor c", 1e-6, skip),
            RegisteredCheck("boom", "anchor d", 1e-6, boom),
        ]


class CleanSuite(CheckSuite):
    name = "clean"
    description = "always passes"

    def checks(self, ctx: SuiteContext) -> List[RegisteredCheck]:
        return [RegisteredCheck(f"zero {i}", "anchor", 1e-12, lambda: absolute_residual("zero", np.zeros(2)))
                for i in range(ctx.count(8))]


@pytest.fixture
def fake_suites(monkeypatch):
    """Replace the suite registry with the fake and clean suites."""
    monkeypatch.setattr(CheckSuiteFactory, "_registry", {"fake": FakeSuite, "clean": CleanSuite})
    monkeypatch.setattr(CheckSuiteFactory, "_suite_cache", {})
    return CheckSuiteFactory
