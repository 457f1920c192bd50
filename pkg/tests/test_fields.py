import math

import numpy as np
import pytest
from hypothesis import given
from numpy.testing import assert_allclose
from scipy import special

from app.errors import AxisSingularity, DomainError
from app.models import DecayClass, DecayKind, Helicity, Parity, SingularSet, WaveMode
from app.services.eigenmode_service import eigenmode_service
from app.utils.fields import (
    Point3,
    ScalarField,
    as_points,
    axis_mask,
    constant,
    coordinate,
    gaussian_packet,
    inversion,
    odd_packets,
    parity,
    radial,
    radial_power,
    require_off_axis,
    sample_ray,
)
from tests.strategies import off_axis_point


def test_point3_spherical_parts():
    p = Point3(1.0, 1.0, 0.0)
    assert p.r == pytest.approx(math.sqrt(2.0))
    assert p.theta == pytest.approx(math.pi / 2.0)
    assert p.e_iphi == pytest.approx(complex(1.0, 1.0) / math.sqrt(2.0))


def test_point3_azimuth_on_axis():
    with pytest.raises(DomainError):
        _ = Point3(0.0, 0.0, 2.0).e_iphi


def test_as_points_accepts_point_lists():
    pts = as_points([Point3(1, 2, 3), Point3(4, 5, 6)])
    assert pts.shape == (2, 3)
    with pytest.raises(DomainError):
        as_points([1.0, 2.0])


@given(p=off_axis_point())
def test_inversion_is_an_involution(p):
    f = gaussian_packet(1.0, (1, 0, 2), center=(0.3, -0.2, 0.5))
    assert inversion(inversion(f)).at(*p) == pytest.approx(f.at(*p), rel=1e-14, abs=1e-14)


@given(p=off_axis_point())
def test_parity_is_an_involution(p):
    f = gaussian_packet(0.8, (1, 0, 2), center=(0.3, -0.2, 0.5))
    assert parity(parity(f)).at(*p) == f.at(*p)


def test_inversion_examples():
    exp_r = radial(lambda r: np.exp(-r), DecayClass.exponential(1.0))
    assert inversion(exp_r).at(2.0, 0.0, 0.0) == pytest.approx(0.25 * math.exp(-0.5), rel=1e-14)
    assert inversion(exp_r).at(0.0, 1.2, 1.6) == pytest.approx(0.151633, abs=1e-6)
    inverse_square = radial(lambda r: 1.0 / r ** 2, DecayClass.power_law(-2.0))
    pts = np.array([[0.3, 0.0, 0.0], [1.0, 2.0, -2.0], [0.0, -5.0, 0.1]])
    assert_allclose(inversion(inverse_square)(pts), 1.0, rtol=1e-14)


def test_inversion_at_origin_raises(gaussian):
    with pytest.raises(DomainError):
        inversion(gaussian).at(0.0, 0.0, 0.0)


def test_parity_mirrors_half_axis_singularities():
    f = ScalarField(fn=lambda p: np.ones(p.shape[:-1]), singular_set=SingularSet.positive_z_axis)
    assert parity(f).singular_set == SingularSet.negative_z_axis


def test_packet_parity_tags():
    assert gaussian_packet(1.0).parity == Parity.even
    assert gaussian_packet(1.0, (0, 1, 0)).parity == Parity.odd
    assert gaussian_packet(1.0, center=(0.0, 0.0, 1.0)).parity is None
    assert all(f.parity == Parity.odd for f in odd_packets())
    assert len(odd_packets((1.0,))) == 4


@given(p=off_axis_point())
def test_tagged_parity_matches_values(p):
    for f in odd_packets((0.9,)):
        assert f.at(*(-p)) == pytest.approx(-f.at(*p), abs=1e-15)


def test_field_algebra(gaussian, off_axis_points):
    x = off_axis_points[:, 0]
    values = gaussian(off_axis_points)
    assert_allclose((gaussian + gaussian * 2.0)(off_axis_points), 3.0 * values)
    assert_allclose((gaussian - gaussian)(off_axis_points), 0.0)
    assert_allclose(coordinate(gaussian, 0)(off_axis_points), x * values)
    assert coordinate(gaussian, 0).parity == Parity.odd


def test_radial_power_adds_origin_singularity(gaussian):
    assert radial_power(gaussian, -0.5).singular_set == SingularSet.origin
    assert radial_power(gaussian, 0.5).singular_set == SingularSet.none


def test_sample_ray_normalizes_direction(gaussian):
    ray = sample_ray(gaussian, (0.0, 3.0, 4.0))
    assert_allclose(ray.direction, [0.0, 0.6, 0.8])
    assert complex(ray(-2.0)) == pytest.approx(math.exp(-2.0))
    assert ray.extent is not None


def test_sample_ray_of_scalar_plane_wave_along_z():
    u0 = eigenmode_service.u_field(WaveMode(s=Helicity(two_s=0), k=(0.0, 0.0, 1.0)))
    t = np.linspace(-6.0, 6.0, 25)
    expected = special.j0(np.sqrt(2.0 * np.abs(t) + 2.0 * t)) / (4.0 * math.pi)
    assert_allclose(sample_ray(u0, (0.0, 0.0, 1.0))(t), expected, rtol=1e-12, atol=1e-14)


@given(d=off_axis_point(0.1, 10.0, 0.0))
def test_ray_profile_at_zero_is_value_at_origin(d):
    f = gaussian_packet(0.8, (1, 0, 2), center=(0.3, -0.2, 0.5))
    assert complex(sample_ray(f, d)(np.array(0.0))) == f.at(0.0, 0.0, 0.0)


def test_sample_ray_rejects_axis_for_helicity_fields():
    f = ScalarField(fn=lambda p: np.ones(p.shape[:-1]), singular_set=SingularSet.full_z_axis)
    with pytest.raises(AxisSingularity):
        sample_ray(f, (0.0, 0.0, 1.0))
    with pytest.raises(DomainError):
        sample_ray(f, (0.0, 0.0, 0.0))


def test_axis_mask_and_tube():
    pts = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0], [0.5, 0.0, 1.0]])
    assert axis_mask(pts, SingularSet.positive_z_axis).tolist() == [True, False, False]
    assert axis_mask(pts, SingularSet.full_z_axis).tolist() == [True, True, False]
    assert axis_mask(pts, SingularSet.none).tolist() == [False, False, False]
    with pytest.raises(AxisSingularity):
        require_off_axis(pts, SingularSet.negative_z_axis)


def test_constant_and_radial_fields():
    pts = np.array([[1.0, 0.0, 0.0], [0.0, 2.0, 0.0]])
    assert_allclose(constant(2.5)(pts), [2.5, 2.5])
    f = radial(lambda r: r ** 2, DecayClass.power_law(2.0))
    assert_allclose(f(pts), [1.0, 4.0])


def test_decay_classes():
    g = DecayClass.gaussian(1.0)
    p = DecayClass.power_law(-1.0)
    assert g.is_localized and not p.is_localized
    assert g.slowest(p).kind == DecayKind.power_law
    assert DecayClass.exponential(2.0).extent() > DecayClass.exponential(1.0).extent()
