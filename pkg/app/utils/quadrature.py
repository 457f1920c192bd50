# ABOUTME: Shared ray quadrature kernels: Gauss-Legendre panels, principal values, mapped tails
# ABOUTME: Oscillatory half-line integrals with integration-by-parts tails and adaptive truncation

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import special

from app.errors import QuadratureFailure
from app.models import QuadratureSpec
from logging_config import get_logger

logger = get_logger(__name__)

LineFn = Callable[[np.ndarray], np.ndarray]

PV_HALF_WIDTH = 0.5
FAR_EDGE = 3.0
U_MIN = 1e-7
X_MIN = 1e-4
GRADING = 1.25
MAX_BATCH_NODES = 2_000_000


@lru_cache(maxsize=64)
def gauss_legendre(n: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panels(a: float, b: float, count: int, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule with `count` equal panels on [a, b]."""
    if count <= 0 or b <= a:
        return np.empty(0), np.empty(0)
    x, w = gauss_legendre(n)
    edges = np.linspace(a, b, count + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def sqrt_start_panels(length: float, count: int, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Rule for [0, length] under u = x^2, exact for u^(-1/2) times a smooth function."""
    x, w = panels(0.0, math.sqrt(length), count, n)
    return x * x, 2.0 * x * w


def mapped_tail(start: float, count: int, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Rule for [start, inf) under u = start / x^2, x in (0, 1]; smooth for u^(-3/2) tails."""
    x, w = panels(0.0, 1.0, count, n)
    return start / (x * x), 2.0 * start * w / x ** 3


@dataclass(frozen=True)
class LineRule:
    """Nodes u > 0 and weights of a linear functional sum_i w_i F(u_i)."""

    nodes: np.ndarray
    weights: np.ndarray

    def apply(self, values: np.ndarray) -> np.ndarray:
        return values @ self.weights

    def __len__(self) -> int:
        return len(self.nodes)


def graded_panels(a: float, b: float, n: int, ratio: float = GRADING) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre panels on [a, b], 0 < a < b, with edges in geometric progression."""
    count = max(1, math.ceil(math.log(b / a) / math.log(ratio)))
    edges = np.geomspace(a, b, count + 1)
    x, w = gauss_legendre(n)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    return (mid[:, None] + half[:, None] * x).ravel(), (half[:, None] * w).ravel()


def graded_start(length: float, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """[0, length]: graded toward 0, with u = x^2 on the innermost panel."""
    inner = U_MIN * length
    u0, w0 = sqrt_start_panels(inner, 1, 2 * n)
    u1, w1 = graded_panels(inner, length, n)
    return np.concatenate([u0, u1]), np.concatenate([w0, w1])


def _near_origin(n: int) -> Tuple[np.ndarray, np.ndarray]:
    return graded_start(PV_HALF_WIDTH, n)


def _far_tail(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """[3, inf) under u = 3 / x^2, graded toward x = 0."""
    x0, w0 = panels(0.0, X_MIN, 1, n)
    x1, w1 = graded_panels(X_MIN, 1.0, n)
    x = np.concatenate([x0, x1])
    w = np.concatenate([w0, w1])
    return FAR_EDGE / (x * x), 2.0 * FAR_EDGE * w / x ** 3


@lru_cache(maxsize=8)
def half_line_rule(spec: QuadratureSpec) -> LineRule:
    """Integral of F over [0, inf).

    F may carry a u^(-1/2) singularity at 0 and features on any scale between 1e-7 and 1e8;
    power-law decay faster than 1/u is integrated without truncation.
    """
    n = spec.nodes
    width = 32.0 / spec.panels
    u0, w0 = _near_origin(n)
    u1, w1 = panels(PV_HALF_WIDTH, FAR_EDGE, math.ceil((FAR_EDGE - PV_HALF_WIDTH) / width), n)
    u2, w2 = _far_tail(n)
    return LineRule(np.concatenate([u0, u1, u2]), np.concatenate([w0, w1, w2]))


@lru_cache(maxsize=8)
def cauchy_rule(spec: QuadratureSpec) -> LineRule:
    """Integral of F(u) / (u + 1) over [0, inf)."""
    rule = half_line_rule(spec)
    return LineRule(rule.nodes, rule.weights / (rule.nodes + 1.0))


@lru_cache(maxsize=8)
def pv_rule(spec: QuadratureSpec) -> LineRule:
    """Principal value of the integral of F(u) / (u - 1) over [0, inf).

    Around u = 1 the integrand is folded into [F(1 + v) - F(1 - v)] / v, which is regular;
    the excised [0, pv_gap] piece contributes F(1 + gap) - F(1 - gap) to leading order.
    """
    n = spec.nodes
    width = 32.0 / spec.panels
    gap = spec.pv_gap
    b = PV_HALF_WIDTH

    u0, w0 = _near_origin(n)
    w0 = w0 / (u0 - 1.0)

    v, wv = panels(gap, b, math.ceil((b - gap) / (0.5 * width)), n)
    u_pairs = np.concatenate([1.0 + v, 1.0 - v, [1.0 + gap, 1.0 - gap]])
    w_pairs = np.concatenate([wv / v, -wv / v, [1.0, -1.0]])

    u2, w2 = panels(1.0 + b, FAR_EDGE, math.ceil((FAR_EDGE - 1.0 - b) / width), n)
    w2 = w2 / (u2 - 1.0)
    u3, w3 = _far_tail(n)
    w3 = w3 / (u3 - 1.0)
    return LineRule(np.concatenate([u0, u_pairs, u2, u3]), np.concatenate([w0, w_pairs, w2, w3]))


@lru_cache(maxsize=16)
def _derivative_matrix(m: int) -> np.ndarray:
    """Maps samples at offsets -m..m to Taylor coefficients h^(k)/k! * delta^k."""
    t = np.arange(-m, m + 1, dtype=float)
    vander = np.vander(t, 2 * m + 1, increasing=True)
    return np.linalg.inv(vander)


def derivatives_at(h: LineFn, point: float, delta: float, order: int) -> np.ndarray:
    """h^(k)(point) for k = 0..order, stacked on the last axis."""
    m = max(order, 2)
    samples = np.asarray(h(point + delta * np.arange(-m, m + 1)), dtype=complex)
    taylor = samples @ _derivative_matrix(m).T
    k = np.arange(order + 1)
    factorials = np.array([math.factorial(int(i)) for i in k], dtype=float)
    return taylor[..., : order + 1] * factorials / delta ** k


def ibp_tail(h: LineFn, omega: np.ndarray, start: float, terms: int, delta: float) -> Tuple[np.ndarray, np.ndarray]:
    """Integral of e^{i omega u} h(u) over [start, inf) by repeated integration by parts.

    Surface terms at infinity are discarded; the first omitted term is the error estimate.
    """
    d = derivatives_at(h, start, delta, terms)
    iw = 1j * omega[..., None]
    n = np.arange(terms)
    series = np.sum(((-1.0) ** n) * d[..., :terms] / iw ** (n + 1), axis=-1)
    value = -np.exp(1j * omega * start) * series
    estimate = np.abs(d[..., terms]) / np.abs(omega) ** (terms + 1)
    return value, estimate


def oscillatory_integral(
    h: LineFn,
    omega,
    spec: QuadratureSpec,
    reach: Optional[float] = None,
    tail_terms: Optional[int] = None,
    max_frequency: float = 0.0,
    feature: Optional[float] = None,
    label: str = "ray integral",
) -> Tuple[np.ndarray, np.ndarray]:
    """Integral of e^{i omega u} h(u) over [0, inf); returns (value, error estimate).

    `h` maps nodes of shape (N,) to values (..., N); `omega` broadcasts against the batch.
    The first panel is graded toward 0 (u^(-1/2) endpoint behaviour is integrated exactly).
    A finite `reach` (h negligible beyond it) truncates without a tail. Otherwise the
    panels stop at u_max, an integration-by-parts tail is added, and u_max is doubled
    while the tail estimate exceeds the tolerance. `max_frequency` bounds the local
    frequency of h itself and `feature` the narrowest structure of h; both shorten the panels.
    """
    omega = np.asarray(omega, dtype=float)
    terms = spec.tail_terms if tail_terms is None else tail_terms
    current = spec
    for attempt in range(spec.max_doublings + 1):
        wmax = float(np.max(np.abs(omega))) + max_frequency
        length = current.u_max / current.panels
        if wmax > 0.0:
            length = min(length, math.pi / wmax)
        if feature is not None:
            length = min(length, feature / 3.0)
        truncated = reach is not None and reach <= current.u_max
        upper = reach if truncated else current.u_max
        count = max(2, math.ceil(upper / length))
        length = upper / count

        u0, w0 = graded_start(length, current.nodes)
        u1, w1 = panels(length, upper, count - 1, current.nodes)
        u = np.concatenate([u0, u1])
        w = np.concatenate([w0, w1])

        values = np.asarray(h(u), dtype=complex)
        phase = np.exp(1j * omega[..., None] * u)
        integral = np.sum(values * phase * w, axis=-1)
        mass = np.sum(np.abs(values) * w, axis=-1)
        if truncated:
            return integral, np.zeros(integral.shape)

        still = np.abs(omega) * upper < 4.0 * (terms + 1)
        omega_safe = np.where(still, 1.0, omega)
        tail, estimate = ibp_tail(h, omega_safe, upper, terms, 0.25 * length)
        if np.any(still):
            slow_tail, slow_estimate = _slow_tail(h, omega, upper, current)
            tail = np.where(still, slow_tail, tail)
            estimate = np.where(still, slow_estimate, estimate)
        integral = integral + tail
        allowed = current.tolerance * np.maximum(np.abs(integral), mass)
        if np.all(estimate <= allowed):
            if attempt:
                logger.debug(f"{label}: converged after {attempt} doubling(s), u_max={current.u_max:g}")
            return integral, estimate
        worst = float(np.max(estimate / np.maximum(allowed, 1e-300)))
        logger.debug(f"{label}: tail estimate {worst:.2e}x tolerance at u_max={current.u_max:g}; doubling")
        current = current.doubled()

    raise QuadratureFailure(
        f"{label} did not converge by u_max={current.u_max / 2:g}",
        estimate=float(np.max(estimate)),
        tolerance=float(np.max(allowed)),
    )


def _slow_tail(h: LineFn, omega: np.ndarray, start: float, spec: QuadratureSpec) -> Tuple[np.ndarray, np.ndarray]:
    """Tail for near-zero frequencies: mapped rule, compared at two resolutions."""
    results = []
    for count in (8, 16):
        u, w = mapped_tail(start, count, spec.nodes)
        values = np.asarray(h(u), dtype=complex) * np.exp(1j * omega[..., None] * u)
        results.append(np.sum(values * w, axis=-1))
    return results[1], np.abs(results[1] - results[0])


def tapered_integral(
    h: LineFn,
    start: float,
    spec: QuadratureSpec,
    max_frequency: float,
    label: str = "tapered ray integral",
) -> Tuple[np.ndarray, np.ndarray]:
    """Abel-type value of the integral of h over [start, inf) for oscillatory, non-decaying h.

    h is damped by an erfc taper centred at U/2 with width U/10, which leaves every
    nonzero frequency alpha with an error of order exp(-(alpha U / 20)^2); the change
    between U = u_max and U = 2 u_max is the error estimate.
    """
    def taper_integral(upper: float) -> Tuple[np.ndarray, np.ndarray]:
        length = min(math.pi / max(max_frequency, 1e-12), upper / spec.panels)
        count = max(2, math.ceil((upper - start) / length))
        u, w = panels(start, upper, count, spec.nodes)
        values = np.asarray(h(u), dtype=complex) * (erfc_taper(u, upper) * w)
        return np.sum(values, axis=-1), np.sum(np.abs(values), axis=-1) / upper

    upper = spec.u_max
    coarse, _ = taper_integral(upper)
    for attempt in range(spec.max_doublings + 1):
        fine, density = taper_integral(2.0 * upper)
        estimate = np.abs(fine - coarse)
        allowed = spec.tolerance * np.maximum(np.abs(fine), density)
        if np.all(estimate <= allowed):
            return fine, estimate
        logger.debug(f"{label}: taper change {float(np.max(estimate)):.2e} at U={2 * upper:g}; extending")
        coarse, upper = fine, 2.0 * upper
    raise QuadratureFailure(f"{label} did not settle", estimate=float(np.max(estimate)),
                            tolerance=float(np.max(allowed)))


def erfc_taper(u: np.ndarray, upper: float) -> np.ndarray:
    """1 well below upper/2, 0 (to 1e-12) at upper."""
    return 0.5 * special.erfc((u - 0.5 * upper) / (0.1 * upper))


def chunked(evaluate: Callable[[np.ndarray], np.ndarray], points: np.ndarray, cost_per_point: int) -> np.ndarray:
    """Evaluate a point-wise operator on (..., 3) points in slices bounded by MAX_BATCH_NODES."""
    flat = points.reshape(-1, 3)
    size = max(1, MAX_BATCH_NODES // max(1, cost_per_point))
    if len(flat) <= size:
        out = evaluate(flat)
    else:
        out = np.concatenate([evaluate(flat[i:i + size]) for i in range(0, len(flat), size)])
    return out.reshape(points.shape[:-1])
