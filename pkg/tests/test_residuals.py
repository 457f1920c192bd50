import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.utils.residuals import absolute_residual, relative_residual, worst_of
from tests.strategies import finite_values


def test_relative_residual_uses_largest_magnitude():
    res = relative_residual("r", np.array([1.0, 2.0]), np.array([1.0, 2.2]))
    assert res.max_abs == pytest.approx(0.2)
    assert res.scale == pytest.approx(2.2)
    assert res.max_residual == pytest.approx(0.2 / 2.2)
    assert res.n_points == 2


def test_relative_residual_of_identical_zero_arrays():
    res = relative_residual("zero", np.zeros(3), np.zeros(3))
    assert res.max_residual == 0.0
    assert res.within(0.0)


def test_non_finite_residual_never_passes():
    res = relative_residual("nan", np.array([np.nan]), np.array([1.0]))
    assert not res.within(1e10)
    assert math.isinf(res.max_residual) or math.isnan(res.max_residual)


def test_absolute_residual():
    res = absolute_residual("a", np.array([1e-3, -2e-3j]))
    assert res.max_residual == pytest.approx(2e-3)


def test_worst_of_collects_details():
    parts = [absolute_residual("a", np.array([1e-6])), absolute_residual("b", np.array([3e-6, 0.0]))]
    res = worst_of("both", parts)
    assert res.max_residual == pytest.approx(3e-6)
    assert res.n_points == 3
    assert res.details == {"a": pytest.approx(1e-6), "b": pytest.approx(3e-6)}


@given(lhs=finite_values(), rhs=finite_values())
def test_relative_residual_is_symmetric_and_bounded(lhs, rhs):
    n = min(len(lhs), len(rhs))
    a, b = np.array(lhs[:n]), np.array(rhs[:n])
    forward = relative_residual("ab", a, b)
    assert forward.max_residual == relative_residual("ba", b, a).max_residual
    assert 0.0 <= forward.max_residual <= 2.0


@given(values=finite_values(), factor=st.floats(min_value=1e-3, max_value=1e3))
def test_relative_residual_ignores_overall_scale(values, factor):
    a = np.array(values)
    b = a * (1.0 + 1e-6) + 1e-3
    plain = relative_residual("plain", a, b).max_residual
    scaled = relative_residual("scaled", factor * a, factor * b).max_residual
    assert scaled == pytest.approx(plain, rel=1e-9, abs=1e-12)
