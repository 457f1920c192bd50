# ABOUTME: Bessel functions of the first kind for integer and half-integer order
# ABOUTME: Power series, Miller downward recurrence, trigonometric seeds and Hankel asymptotics

import math
from typing import Union

import numpy as np

from app.errors import DomainError, UnsupportedOrder
from app.models import BesselOrder

ArrayLike = Union[float, np.ndarray]

MAX_TWO_NU = 100
HANKEL_START = 25.0
_BIG = 1e200
_EPS = 1e-17


def as_order(order: Union[BesselOrder, int, float]) -> BesselOrder:
    """Coerce an order to BesselOrder, rejecting anything but integers and half-integers."""
    if isinstance(order, BesselOrder):
        return order
    two_nu = 2.0 * float(order)
    if not math.isfinite(two_nu) or abs(two_nu - round(two_nu)) > 1e-12:
        raise UnsupportedOrder(f"order {order} is neither an integer nor a half-integer")
    if abs(round(two_nu)) > MAX_TWO_NU:
        raise UnsupportedOrder(f"order {order} exceeds |nu| <= {MAX_TWO_NU // 2}")
    return BesselOrder(two_nu=int(round(two_nu)))


def bessel_j(order: Union[BesselOrder, int, float], x: ArrayLike) -> ArrayLike:
    """J_nu(x) for x >= 0 and 2*nu integer; vectorized over x."""
    nu = as_order(order)
    xs = np.asarray(x, dtype=float)
    if np.any(np.isnan(xs)) or np.any(xs < 0.0):
        raise DomainError("bessel_j requires x >= 0")

    flat = np.atleast_1d(xs).ravel()
    if nu.is_integer:
        n = abs(nu.two_nu) // 2
        values = _integer_order(n, flat)
        if nu.two_nu < 0 and n % 2 == 1:
            values = -values
    else:
        values = _half_integer_order(nu.two_nu, flat)

    out = values.reshape(xs.shape)
    return float(out) if xs.ndim == 0 else out


def _integer_order(n: int, x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    series = x * x / 4.0 <= max(2.0, n + 1.0)
    hankel = ~series & (x >= HANKEL_START) & (x > n)
    miller = ~series & ~hankel

    if series.any():
        out[series] = _series(n, x[series])
    if hankel.any():
        out[hankel] = _upward(0.0, _hankel(0.0, x[hankel]), _hankel(1.0, x[hankel]), n, x[hankel])
    if miller.any():
        out[miller] = _miller(2 * n, x[miller])
    return out


def _half_integer_order(two_nu: int, x: np.ndarray) -> np.ndarray:
    nu = two_nu / 2.0
    out = np.empty_like(x)
    zero = x == 0.0
    if zero.any():
        if nu > 0:
            out[zero] = 0.0
        else:
            n = int(-nu - 0.5)
            out[zero] = np.inf if n % 2 == 0 else -np.inf

    pos = ~zero
    xp = x[pos]
    if xp.size == 0:
        return out

    root = np.sqrt(2.0 / (np.pi * xp))
    j_half = root * np.sin(xp)
    j_mhalf = root * np.cos(xp)

    if nu < 0:
        # toward negative orders the recurrence follows the dominant solution
        lower, upper = j_mhalf, j_half
        order = -0.5
        while order > nu:
            lower, upper = (2.0 * order / xp) * lower - upper, lower
            order -= 1.0
        out[pos] = lower
        return out

    values = np.empty_like(xp)
    upward = xp >= nu
    if upward.any():
        values[upward] = _upward(-0.5, j_mhalf[upward], j_half[upward], nu, xp[upward])
    if (~upward).any():
        values[~upward] = _miller(two_nu, xp[~upward], seeds=(j_half[~upward], j_mhalf[~upward]))
    out[pos] = values
    return out


def _series(n: int, x: np.ndarray) -> np.ndarray:
    y = x * x / 4.0
    term = (x / 2.0) ** n / math.factorial(n)
    total = term.copy()
    for k in range(1, 200):
        term = term * (-y) / (k * (k + n))
        total = total + term
        if np.all(np.abs(term) <= _EPS * np.abs(total)):
            break
    return total


def _upward(nu_start: float, j_low: np.ndarray, j_high: np.ndarray, nu: float, x: np.ndarray) -> np.ndarray:
    """Recur J_{m+1} = (2m/x) J_m - J_{m-1} from orders (nu_start, nu_start + 1) up to nu."""
    if nu == nu_start:
        return j_low
    order = nu_start + 1.0
    while order < nu:
        j_low, j_high = j_high, (2.0 * order / x) * j_high - j_low
        order += 1.0
    return j_high


def _hankel(nu: float, x: np.ndarray) -> np.ndarray:
    mu = 4.0 * nu * nu
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, 120):
        nxt = term * (mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        active &= np.abs(nxt) < np.abs(term)
        if not active.any():
            break
        sign = 1.0 if (k // 2) % 2 == 0 else -1.0
        contrib = np.where(active, sign * nxt, 0.0)
        if k % 2 == 1:
            q = q + contrib
        else:
            p = p + contrib
        term = np.where(active, nxt, term)
        if np.all(np.abs(nxt) < _EPS):
            break
    # cos(x - (nu/2 + 1/4) pi) expanded so the large argument is reduced exactly once
    shift = (nu / 2.0 + 0.25) * np.pi
    cos_chi = np.cos(x) * math.cos(shift) + np.sin(x) * math.sin(shift)
    sin_chi = np.sin(x) * math.cos(shift) - np.cos(x) * math.sin(shift)
    return np.sqrt(2.0 / (np.pi * x)) * (p * cos_chi - q * sin_chi)


def _miller(two_nu: int, x: np.ndarray, seeds=None) -> np.ndarray:
    """Downward recurrence; integer orders normalized by J0 + 2*sum J_2k = 1, half-integers by the seeds."""
    half = two_nu % 2 == 1
    offset = 0.5 if half else 0.0
    target = (two_nu - 1) // 2 if half else two_nu // 2
    top = max(target + offset, float(x.max()), 1.0)
    start = int(top + 12 + math.sqrt(160.0 * top))
    start += start % 2

    j_next = np.zeros_like(x)
    j_cur = np.full_like(x, 1e-30)
    value = np.zeros_like(x)
    norm = np.zeros_like(x)
    j_half = np.zeros_like(x)
    j_mhalf = np.zeros_like(x)

    stop = -1 if half else 0
    for k in range(start, stop, -1):
        if k == target:
            value = j_cur.copy()
        if half and k == 0:
            j_half = j_cur.copy()
        if not half and k % 2 == 0 and k > 0:
            norm = norm + 2.0 * j_cur
        j_prev = (2.0 * (k + offset) / x) * j_cur - j_next
        j_next, j_cur = j_cur, j_prev

        big = np.abs(j_cur) > _BIG
        if big.any():
            factor = np.where(big, 1.0 / _BIG, 1.0)
            j_cur, j_next = j_cur * factor, j_next * factor
            value, norm, j_half = value * factor, norm * factor, j_half * factor

    if half:
        j_mhalf = j_cur
        s_half, s_mhalf = seeds
        scale = (j_half * s_half + j_mhalf * s_mhalf) / (j_half * j_half + j_mhalf * j_mhalf)
        return value * scale

    if target == 0:
        value = j_cur
    norm = norm + j_cur
    return value / norm
