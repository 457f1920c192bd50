import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import special

from app.errors import QuadratureFailure
from app.models import QuadratureSpec
from app.utils.quadrature import (
    cauchy_rule,
    chunked,
    half_line_rule,
    oscillatory_integral,
    panels,
    pv_rule,
    tapered_integral,
)


def test_panels_integrate_polynomials_exactly():
    u, w = panels(0.0, 2.0, 4, 8)
    assert np.sum(w * u ** 7) == pytest.approx(2.0 ** 8 / 8.0, rel=1e-14)


def test_empty_panels():
    u, w = panels(1.0, 1.0, 3, 8)
    assert u.size == 0 and w.size == 0


@pytest.mark.parametrize(
    "fn, exact",
    [
        (lambda u: np.exp(-u), 1.0),
        (lambda u: np.exp(-u) / np.sqrt(u), math.sqrt(math.pi)),
        (lambda u: 1.0 / (1.0 + u) ** 2, 1.0),
        (lambda u: np.exp(-u * u / 2.0), math.sqrt(math.pi / 2.0)),
    ],
    ids=["exp", "inverse-sqrt", "power-law", "gaussian"],
)
def test_half_line_rule(spec, fn, exact):
    rule = half_line_rule(spec)
    assert rule.apply(fn(rule.nodes)) == pytest.approx(exact, rel=1e-9)


def test_cauchy_rule(spec):
    rule = cauchy_rule(spec)
    exact = math.e * special.exp1(1.0)
    assert rule.apply(np.exp(-rule.nodes)) == pytest.approx(exact, rel=1e-9)


def test_principal_value_rule(spec):
    rule = pv_rule(spec)
    exact = -math.exp(-1.0) * special.expi(1.0)
    assert rule.apply(np.exp(-rule.nodes)) == pytest.approx(exact, rel=1e-7)


def test_principal_value_of_odd_pair_vanishes(spec):
    # PV of 1/(u - 1) weighted by a function symmetric about u = 1 on [0, 2]
    rule = pv_rule(spec)
    values = np.where(rule.nodes <= 2.0, 1.0 - (rule.nodes - 1.0) ** 2, 0.0)
    assert abs(rule.apply(values)) < 1e-6


@pytest.mark.parametrize("omega", [0.5, 1.0, 4.0])
def test_oscillatory_integral_of_decaying_profile(spec, omega):
    value, estimate = oscillatory_integral(lambda u: np.exp(-u), omega, spec)
    assert complex(value) == pytest.approx(1.0 / (1.0 - 1j * omega), rel=1e-8)
    assert float(estimate) < 1e-8


@pytest.mark.parametrize("omega", [1.0, 3.0])
def test_oscillatory_integral_with_integration_by_parts_tail(spec, omega):
    value, _ = oscillatory_integral(lambda u: 1.0 / np.sqrt(u), omega, spec)
    exact = math.sqrt(math.pi / omega) * complex(math.cos(math.pi / 4.0), math.sin(math.pi / 4.0))
    assert complex(value) == pytest.approx(exact, rel=1e-6)


def test_oscillatory_integral_batches_frequencies(spec):
    omega = np.array([0.5, 1.0, 2.0])
    value, _ = oscillatory_integral(lambda u: np.exp(-u), omega, spec, reach=60.0)
    assert_allclose(value, 1.0 / (1.0 - 1j * omega), rtol=1e-10)


def test_oscillatory_integral_failure_carries_estimate():
    spec = QuadratureSpec(tolerance=1e-30, max_doublings=0)
    with pytest.raises(QuadratureFailure) as info:
        oscillatory_integral(lambda u: 1.0 / np.sqrt(u), 1.0, spec)
    assert info.value.estimate > info.value.tolerance


def test_tapered_integral_of_pure_oscillation(spec):
    # Abel value of the integral of cos(u) over [0, inf) is 0
    value, _ = tapered_integral(lambda u: np.cos(u), 0.0, spec, max_frequency=1.0)
    assert abs(complex(value)) < 1e-7


def test_chunked_preserves_shape():
    points = np.arange(2 * 5 * 3, dtype=float).reshape(2, 5, 3)
    out = chunked(lambda p: p[:, 0] + p[:, 1], points, cost_per_point=1_000_000)
    assert out.shape == (2, 5)
    assert_allclose(out, points[..., 0] + points[..., 1])
