# ABOUTME: Richardson-extrapolated fourth-order central differences on Cartesian grids
# ABOUTME: Gradient, Hessian, Laplacian, radial and one-dimensional derivatives of callables

from typing import Callable, Optional

import numpy as np

from app.utils.fields import as_points, radius
from config import settings

PointFn = Callable[[np.ndarray], np.ndarray]

_FIRST = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0
_FIRST_AT = np.array([-2.0, -1.0, 1.0, 2.0])
_SECOND = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
_SECOND_AT = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])


def step_size(points: np.ndarray, base: Optional[float] = None) -> np.ndarray:
    """h = base * max(1, r) per point."""
    base = settings.FD_STEP if base is None else base
    return base * np.maximum(1.0, radius(points))


def _gradient_stencil():
    offsets, weights = [], np.zeros((3, 12))
    for a in range(3):
        for j, (at, c) in enumerate(zip(_FIRST_AT, _FIRST)):
            e = np.zeros(3)
            e[a] = at
            offsets.append(e)
            weights[a, 4 * a + j] = c
    return np.array(offsets), weights


def _hessian_stencil():
    offsets = [np.zeros(3)]
    rows = []
    for a in range(3):
        row = {0: _SECOND[2]}
        for at, c in zip(_SECOND_AT, _SECOND):
            if at == 0.0:
                continue
            e = np.zeros(3)
            e[a] = at
            offsets.append(e)
            row[len(offsets) - 1] = c
        rows.append(row)
    for a, b in ((0, 1), (0, 2), (1, 2)):
        row = {}
        for ai, ca in zip(_FIRST_AT, _FIRST):
            for bi, cb in zip(_FIRST_AT, _FIRST):
                e = np.zeros(3)
                e[a], e[b] = ai, bi
                offsets.append(e)
                row[len(offsets) - 1] = ca * cb
        rows.append(row)
    weights = np.zeros((6, len(offsets)))
    for i, row in enumerate(rows):
        for j, c in row.items():
            weights[i, j] = c
    return np.array(offsets), weights


def _laplacian_stencil():
    offsets, weights = _hessian_stencil()
    used = np.flatnonzero(np.any(weights[:3] != 0.0, axis=0))
    return offsets[used], weights[:3, used].sum(axis=0, keepdims=True)


_GRAD = _gradient_stencil()
_HESS = _hessian_stencil()
_LAPL = _laplacian_stencil()


def _apply(f: PointFn, points: np.ndarray, h: np.ndarray, stencil, power: int, richardson: bool) -> np.ndarray:
    offsets, weights = stencil
    n = len(offsets)
    shifts = np.concatenate([offsets, 0.5 * offsets]) if richardson else offsets
    probe = points[..., None, :] + shifts * h[..., None, None]
    values = np.asarray(f(probe), dtype=complex)
    coarse = (values[..., :n] @ weights.T) / h[..., None] ** power
    if not richardson:
        return coarse
    fine = (values[..., n:] @ weights.T) / (0.5 * h[..., None]) ** power
    return (2.0 ** 4 * fine - coarse) / (2.0 ** 4 - 1.0)


def gradient(f: PointFn, points, base: Optional[float] = None, richardson: bool = True) -> np.ndarray:
    """Complex gradient, shape (..., 3)."""
    pts = as_points(points)
    return _apply(f, pts, step_size(pts, base), _GRAD, 1, richardson)


def hessian(f: PointFn, points, base: Optional[float] = None, richardson: bool = True) -> np.ndarray:
    """Symmetric Hessian, shape (..., 3, 3)."""
    pts = as_points(points)
    flat = _apply(f, pts, step_size(pts, base), _HESS, 2, richardson)
    out = np.empty(pts.shape[:-1] + (3, 3), dtype=complex)
    for i in range(3):
        out[..., i, i] = flat[..., i]
    for k, (a, b) in enumerate(((0, 1), (0, 2), (1, 2))):
        out[..., a, b] = out[..., b, a] = flat[..., 3 + k]
    return out


def laplacian(f: PointFn, points, base: Optional[float] = None, richardson: bool = True) -> np.ndarray:
    pts = as_points(points)
    return _apply(f, pts, step_size(pts, base), _LAPL, 2, richardson)[..., 0]


def radial_derivative(f: PointFn, points, base: Optional[float] = None) -> np.ndarray:
    """d/d(rho) f(rho * rhat) at each point."""
    pts = as_points(points)
    r = radius(pts)
    rhat = pts / r[..., None]

    def along(t: np.ndarray) -> np.ndarray:
        return f(pts[..., None, :] + t[..., None] * rhat[..., None, :])

    h = step_size(pts, base)
    return _derivative_1d(along, h)


def derivative_1d(g: Callable[[np.ndarray], np.ndarray], t: np.ndarray, base: Optional[float] = None) -> np.ndarray:
    """dg/dt for a vectorized function of one real variable."""
    t = np.asarray(t, dtype=float)
    base = settings.FD_STEP if base is None else base
    h = base * np.maximum(1.0, np.abs(t))
    return _derivative_1d(lambda d: g(t[..., None] + d), h)


def _derivative_1d(along: Callable[[np.ndarray], np.ndarray], h: np.ndarray) -> np.ndarray:
    shifts = np.concatenate([_FIRST_AT, 0.5 * _FIRST_AT])
    values = np.asarray(along(shifts * h[..., None]), dtype=complex)
    coarse = values[..., :4] @ _FIRST / h
    fine = values[..., 4:] @ _FIRST / (0.5 * h)
    return (16.0 * fine - coarse) / 15.0
