# ABOUTME: Residual measures for numerical identities evaluated on point sets
# ABOUTME: Relative residuals normalized by the magnitude of the terms being compared

from typing import Iterable, Optional

import numpy as np

from app.models import Residual

TINY = 1e-300


def relative_residual(name: str, lhs: np.ndarray, rhs: np.ndarray, scale: Optional[float] = None) -> Residual:
    """max |lhs - rhs| / scale, with scale defaulting to the largest |lhs| or |rhs|."""
    lhs = np.asarray(lhs, dtype=complex)
    rhs = np.asarray(rhs, dtype=complex)
    diff = np.abs(lhs - rhs)
    max_abs = float(np.max(diff)) if diff.size else 0.0
    if scale is None:
        scale = float(max(np.max(np.abs(lhs), initial=0.0), np.max(np.abs(rhs), initial=0.0)))
    ratio = max_abs / max(scale, TINY) if max_abs > 0.0 else 0.0
    if not np.isfinite(max_abs):
        ratio = float("inf")
    return Residual(name=name, max_residual=ratio, max_abs=max_abs, scale=scale, n_points=int(diff.size))


def absolute_residual(name: str, values: np.ndarray) -> Residual:
    """max |values| reported as the residual itself."""
    values = np.abs(np.asarray(values, dtype=complex))
    worst = float(np.max(values)) if values.size else 0.0
    return Residual(name=name, max_residual=worst, max_abs=worst, scale=1.0, n_points=int(values.size))


def worst_of(name: str, residuals: Iterable[Residual]) -> Residual:
    items = list(residuals)
    worst = max(items, key=lambda r: r.max_residual)
    return Residual(
        name=name,
        max_residual=worst.max_residual,
        max_abs=max(r.max_abs for r in items),
        scale=worst.scale,
        n_points=sum(r.n_points for r in items),
        details={r.name: r.max_residual for r in items},
    )
