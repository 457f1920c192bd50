import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from pydantic import ValidationError
from scipy import special

from app.models import DecayClass, PositionCheckConfig, R0Form
from app.services.position_service import PositionService, fibonacci_directions, position_service
from app.services.ray_transform_service import ray_transform_service
from app.utils.fields import gaussian_packet, odd_packets, radial, radius
from app.utils.residuals import relative_residual

VIOLATING_BOUNDARY = 2.0 / math.pi * 2.0 ** -0.25 * special.gamma(0.75)


@pytest.fixture
def z_packet():
    return gaussian_packet(1.0, (0, 0, 1))


@pytest.fixture
def few_points():
    return np.array([[0.6, 0.2, 0.5], [-0.4, 0.9, -0.3], [0.3, -0.7, 1.1]])


def test_fibonacci_directions_are_unit_and_off_axis():
    d = fibonacci_directions(24)
    assert d.shape == (24, 3)
    assert_allclose(radius(d), 1.0, rtol=1e-14)
    assert np.min(np.hypot(d[:, 0], d[:, 1])) > 0.0


def test_odd_packets_satisfy_boundary_condition():
    for f in odd_packets():
        assert position_service.boundary_residual(f) < 1e-12


def test_zero_moment_field_satisfies_boundary_condition():
    f = radial(lambda r: np.exp(-r) * (1.0 - 2.0 * r / 3.0), DecayClass.exponential(1.0))
    assert position_service.boundary_residual(f) < 1e-8


def test_gaussian_violates_boundary_condition(gaussian):
    assert position_service.boundary_residual(gaussian) == pytest.approx(VIOLATING_BOUNDARY, rel=1e-8)


def test_boundary_residual_normalizes_directions(gaussian):
    assert position_service.boundary_residual(gaussian, [(0.0, 3.0, 4.0)]) == pytest.approx(
        VIOLATING_BOUNDARY, rel=1e-8)


def test_even_moment(gaussian):
    assert position_service.check_even_moment(gaussian).within(1e-8)


def test_r0_forms_agree_on_odd_packet(z_packet, few_points):
    left = position_service.apply_r0(R0Form.left, z_packet)(few_points)
    right = position_service.apply_r0("right", z_packet)(few_points)
    assert relative_residual("r0 left = right", left, right).within(1e-5)


def test_r0_commutes_with_coordinates(z_packet, few_points):
    assert position_service.check_r0_commutes(z_packet, few_points).within(1e-5)


def test_kbar_left_and_right_forms_agree(z_packet, few_points):
    left = position_service.kbar(z_packet, R0Form.left)
    right = position_service.kbar(z_packet, R0Form.right)
    for a in range(3):
        assert relative_residual("kbar left = right", left[a](few_points), right[a](few_points)).within(1e-4)


def test_violation_sweep_tracks_boundary(z_packet, gaussian, few_points):
    samples = position_service.violation_sweep(z_packet, gaussian, (1e-3, 1e-2, 1e-1), few_points)
    assert [s.eps for s in samples] == [1e-3, 1e-2, 1e-1]
    gaps = [s.form_gap for s in samples]
    assert gaps == sorted(gaps)
    for s in samples:
        assert s.boundary == pytest.approx(s.eps * VIOLATING_BOUNDARY, rel=1e-6)
        assert s.form_gap == pytest.approx(s.predicted_gap, rel=1e-3)


def test_position_config_validation(z_packet, few_points):
    config = PositionCheckConfig(test_fields=[z_packet], pts=[tuple(p) for p in few_points], tol=1e-4)
    assert config.points.shape == (3, 3)
    with pytest.raises(ValidationError):
        PositionCheckConfig(test_fields=[], pts=[(1.0, 0.0, 0.0)], tol=1e-4)
    with pytest.raises(ValidationError):
        PositionCheckConfig(test_fields=[gaussian_packet(1.0, center=(0.0, 0.0, 1.0))], pts=[(1.0, 0.0, 0.0)],
                            tol=1e-4)
    with pytest.raises(ValidationError):
        PositionCheckConfig(test_fields=[z_packet], pts=[(1.0, 0.0, 0.0)], tol=0.0)


def test_service_uses_given_ray_operators():
    rays = ray_transform_service.with_spec(ray_transform_service.spec)
    assert PositionService(rays).rays is rays
    assert PositionService().rays is ray_transform_service


@pytest.mark.slow
def test_null_position(z_packet, few_points):
    assert position_service.check_null_position(z_packet, few_points).within(1e-5)


@pytest.mark.slow
def test_unitary_sandwich(z_packet, few_points):
    assert position_service.check_unitary_sandwich(z_packet, few_points).within(1e-5)


@pytest.mark.slow
def test_boost_position_commutators(z_packet, few_points):
    res = position_service.check_boost_position([z_packet], few_points)
    assert res.within(1e-4), res.details
    for a in (1, 2, 3):
        for form in ("left", "right"):
            assert f"[Kbar{a}, r0] {form} [{z_packet.label}]" in res.details


@pytest.mark.slow
def test_boost_position_on_x_and_xyz_packets(few_points):
    fields = [gaussian_packet(0.7, (1, 0, 0)), gaussian_packet(1.5, (1, 1, 1))]
    res = position_service.check_boost_position(fields, few_points[:2])
    assert res.within(1e-4), res.details


@pytest.mark.slow
@pytest.mark.parametrize("field", odd_packets((0.7, 1.5)), ids=lambda f: f.label)
def test_null_and_commuting_position_on_odd_family(field, few_points):
    assert position_service.check_null_position(field, few_points).within(1e-5)
    assert position_service.check_r0_commutes(field, few_points).within(1e-5)
    assert position_service.check_unitary_sandwich(field, few_points).within(1e-5)


@pytest.mark.slow
def test_kbar_factorizations(z_packet, few_points):
    res = position_service.check_kbar_forms(z_packet, few_points)
    assert res.within(1e-4), res.details


@pytest.mark.slow
def test_run_config(z_packet, few_points):
    config = PositionCheckConfig(test_fields=[z_packet], pts=[tuple(p) for p in few_points], tol=1e-4)
    results = position_service.run_config(config)
    assert len(results) == 4
    assert all(r.within(config.tol) for r in results)
