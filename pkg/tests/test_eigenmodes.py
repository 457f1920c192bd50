import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from app.errors import AxisSingularity, DomainError, QuadratureFailure
from app.models import DecayClass, Helicity, SphericalGrid, WaveMode
from app.services.eigenmode_service import eigenmode_service, spherical_rule
from app.utils.fields import ScalarField, gaussian_packet, radial, radius

HALF = Helicity(two_s=1)
Z_AXIS = (0.0, 0.0, 1.0)


def test_phase_factor_for_k_along_z(rng):
    pts = rng.normal(size=(20, 3))
    rhat = pts / radius(pts)[:, None]
    expected = (rhat[:, 0] + 1j * rhat[:, 1]) / np.hypot(rhat[:, 0], rhat[:, 1])
    assert_allclose(eigenmode_service.phase_factor(rhat, np.array(Z_AXIS)), expected, atol=1e-13)


def test_phase_factor_has_unit_modulus(rng):
    r = rng.normal(size=(500, 3))
    k = rng.normal(size=(500, 3))
    values = eigenmode_service.phase_factor(r, k)
    assert np.max(np.abs(np.abs(values) - 1.0)) < 1e-12


def test_phase_factor_when_directions_coincide():
    khat = np.array([0.36, 0.48, 0.8])
    assert eigenmode_service.phase_factor(khat, khat) == pytest.approx(complex(0.6, 0.8), abs=1e-12)


def test_phase_factor_singular_opposite_k():
    with pytest.raises(DomainError):
        eigenmode_service.phase_factor((0.0, 0.6, 0.8), (0.0, -0.6, -0.8))


def test_u_examples():
    mode0 = WaveMode(s=Helicity(two_s=0), k=Z_AXIS)
    assert eigenmode_service.eval_u(mode0, (0.0, 0.0, 0.0)) == pytest.approx(1.0 / (4.0 * math.pi), abs=1e-15)
    z_zero = 2.404825557695773 ** 2 / 4.0
    assert abs(eigenmode_service.eval_u(mode0, (0.0, 0.0, z_zero))) < 1e-13
    assert eigenmode_service.eval_u(WaveMode(s=HALF, k=Z_AXIS), (0.0, 0.0, -1.7)) == 0.0


def test_u_is_scalar_for_single_point_and_array_otherwise(off_axis_points):
    mode = WaveMode(s=HALF, k=(0.6, 0.0, 0.8))
    assert isinstance(eigenmode_service.eval_u(mode, off_axis_points[0]), complex)
    assert eigenmode_service.eval_u(mode, off_axis_points).shape == (len(off_axis_points),)


def test_w_examples():
    assert eigenmode_service.eval_w(Helicity(two_s=0), 1.0, (0.0, 0.0, 0.0)) == pytest.approx(
        -1j / (8.0 * math.pi), abs=1e-15)
    on_axis = eigenmode_service.eval_w(HALF, 1.0, (0.0, 0.0, 2.0), azimuthal=False)
    assert abs(on_axis) == pytest.approx(1.0 / (4.0 * math.pi ** 1.5), rel=1e-13)
    assert eigenmode_service.eval_w(Helicity(two_s=2), 1.0, (0.0, 0.0, 0.0), azimuthal=False) == pytest.approx(
        0.0, abs=1e-15)


def test_w_domain():
    with pytest.raises(DomainError):
        eigenmode_service.eval_w(Helicity(two_s=-1), 1.0, (1.0, 0.0, 0.0))
    with pytest.raises(DomainError):
        eigenmode_service.eval_w(HALF, 0.0, (1.0, 0.0, 0.0))
    with pytest.raises(AxisSingularity):
        eigenmode_service.eval_w(HALF, 1.0, (0.0, 0.0, 1.0))


def test_half_helicity_special_form(off_axis_points):
    assert_allclose(eigenmode_service.eval_w_half(1.3, off_axis_points),
                    eigenmode_service.eval_w(HALF, 1.3, off_axis_points), rtol=1e-12)


def test_w_from_potential(helicity, off_axis_points):
    assert_allclose(eigenmode_service.eval_w_potential(helicity, 1.0, off_axis_points),
                    eigenmode_service.eval_w(helicity, 1.0, off_axis_points), rtol=1e-7, atol=1e-9)


@pytest.mark.parametrize("k", [0.5, 1.0, 2.0])
def test_plane_wave_slope(k):
    z = np.linspace(1.0, 40.0, 4000)
    assert eigenmode_service.plane_wave_slope(HALF, k, z) == pytest.approx(k, abs=1e-6)


def test_plane_wave_slope_needs_positive_axis():
    with pytest.raises(DomainError):
        eigenmode_service.plane_wave_slope(HALF, 1.0, np.array([-1.0, 1.0]))


def test_growth_is_bounded_by_sqrt_r(helicity):
    r = np.geomspace(1e3, 1e5, 200)
    assert eigenmode_service.growth_ratio(helicity, 1.0, (0.3, 0.4, math.sqrt(0.75)), r) < 1.0


def test_spherical_rule_measure():
    points, weights = spherical_rule(SphericalGrid())
    # integral of e^{-r} over R^3 with measure d^3r / r is 4 pi
    assert np.sum(np.exp(-radius(points)) * weights) == pytest.approx(4.0 * math.pi, rel=1e-9)


def test_inner_products():
    g = gaussian_packet(1.0)
    assert eigenmode_service.inner_product(g, g) == pytest.approx(2.0 * math.pi, rel=1e-10)
    cross = eigenmode_service.inner_product(gaussian_packet(1.0, (1, 1, 0)), gaussian_packet(0.8, (0, 0, 1)))
    assert abs(cross) < 1e-12


def test_inner_product_integrates_power_law_tail():
    f = radial(lambda r: 1.0 / (1.0 + r ** 2), DecayClass.power_law(-2.0))
    # 4 pi * integral of r / (1 + r^2)^2 over r >= 0
    assert eigenmode_service.inner_product(f, f) == pytest.approx(2.0 * math.pi, rel=1e-9)
    truncated = eigenmode_service.inner_product(f, f, SphericalGrid(tail_panels=0))
    assert truncated == pytest.approx(2.0 * math.pi * (1.0 - 1.0 / 577.0), rel=1e-9)


def test_inner_product_of_non_finite_field_fails():
    bad = ScalarField(fn=lambda p: np.full(p.shape[:-1], np.nan), label="nan")
    with pytest.raises(QuadratureFailure):
        eigenmode_service.inner_product(bad, gaussian_packet(1.0))


def test_inner_product_is_hermitian():
    f = gaussian_packet(1.0, (1, 0, 0), center=(0.2, 0.3, 0.0))
    g = gaussian_packet(0.7, (0, 1, 1), center=(-0.1, 0.0, 0.4))
    assert eigenmode_service.inner_product(f * 1j, g) == pytest.approx(
        np.conj(eigenmode_service.inner_product(g, f * 1j)), abs=1e-14)


def test_k_space_overlap_decays_with_separation():
    near = eigenmode_service.k_space_overlap(Z_AXIS, Z_AXIS, 0.2)
    far = eigenmode_service.k_space_overlap(Z_AXIS, (0.0, 0.0, 5.0), 0.2)
    assert abs(far) < 1e-6 * abs(near)


def test_packet_width_must_be_positive():
    with pytest.raises(DomainError):
        eigenmode_service.packet_field(Helicity(two_s=0), Z_AXIS, 0.0)


@pytest.mark.slow
def test_packet_overlap_matches_k_space():
    r_value, k_value = eigenmode_service.packet_overlap(Helicity(two_s=0), Z_AXIS, Z_AXIS, 0.2)
    assert abs(r_value - k_value) <= 1e-3 * abs(k_value)


@pytest.mark.slow
def test_separated_packets_are_orthogonal():
    r_value, _ = eigenmode_service.packet_overlap(Helicity(two_s=0), Z_AXIS, (0.0, 0.0, 5.0), 0.2)
    assert abs(r_value) < 1e-6
