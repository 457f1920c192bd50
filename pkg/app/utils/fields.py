# ABOUTME: Lazy complex scalar fields on R^3, ray profiles, parity and inversion maps
# ABOUTME: Every operator consumes and produces ScalarField values built here

from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from app.errors import AxisSingularity, DomainError
from app.models import DecayClass, Parity, SingularSet
from config import settings

PointsLike = Union["Point3", Sequence["Point3"], Sequence[Sequence[float]], np.ndarray]
FieldFn = Callable[[np.ndarray], np.ndarray]

_MIRROR = {
    SingularSet.positive_z_axis: SingularSet.negative_z_axis,
    SingularSet.negative_z_axis: SingularSet.positive_z_axis,
}


@dataclass(frozen=True)
class Point3:
    x: float
    y: float
    z: float

    @property
    def array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @property
    def r(self) -> float:
        return float(np.linalg.norm(self.array))

    @property
    def theta(self) -> float:
        return float(np.arctan2(np.hypot(self.x, self.y), self.z))

    @property
    def e_iphi(self) -> complex:
        rho = np.hypot(self.x, self.y)
        if rho == 0.0:
            raise DomainError("azimuth undefined on the z axis")
        return complex(self.x, self.y) / rho


def as_points(points: PointsLike) -> np.ndarray:
    """Normalize points to a float array of shape (..., 3)."""
    if isinstance(points, Point3):
        return points.array
    if isinstance(points, (list, tuple)) and points and isinstance(points[0], Point3):
        return np.stack([p.array for p in points])
    arr = np.asarray(points, dtype=float)
    if arr.shape[-1:] != (3,):
        raise DomainError(f"points must have a trailing dimension of 3, got shape {arr.shape}")
    return arr


def radius(points: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(points * points, axis=-1))


def e_iphi(points: np.ndarray) -> np.ndarray:
    """(x + iy)/sqrt(x^2 + y^2); nan on the z axis."""
    rho = np.hypot(points[..., 0], points[..., 1])
    with np.errstate(invalid="ignore", divide="ignore"):
        return (points[..., 0] + 1j * points[..., 1]) / rho


def axis_mask(points: np.ndarray, singular: SingularSet, tube: Optional[float] = None) -> np.ndarray:
    """True where a point falls inside the exclusion tube of `singular`."""
    tube = settings.AXIS_TUBE if tube is None else tube
    r = radius(points)
    near = np.hypot(points[..., 0], points[..., 1]) < tube * np.maximum(1.0, r)
    if singular == SingularSet.none:
        return np.zeros(points.shape[:-1], dtype=bool)
    if singular == SingularSet.origin:
        return r < tube
    if singular == SingularSet.positive_z_axis:
        return near & (points[..., 2] >= 0.0)
    if singular == SingularSet.negative_z_axis:
        return near & (points[..., 2] <= 0.0)
    return near


def require_off_axis(points: np.ndarray, singular: SingularSet, tube: Optional[float] = None) -> None:
    mask = axis_mask(points, singular, tube)
    if mask.any():
        bad = points[mask][0] if points.ndim > 1 else points
        raise AxisSingularity(f"point {np.round(bad, 12).tolist()} lies in the {singular.value} exclusion tube")


@dataclass(frozen=True)
class ScalarField:
    """Complex field evaluated on (..., 3) arrays of Cartesian points."""

    fn: FieldFn
    singular_set: SingularSet = SingularSet.none
    decay: DecayClass = field(default_factory=lambda: DecayClass.power_law(0.0))
    parity: Optional[Parity] = None
    label: str = "f"

    def __call__(self, points: PointsLike) -> np.ndarray:
        pts = as_points(points)
        values = np.asarray(self.fn(pts), dtype=complex)
        return np.broadcast_to(values, pts.shape[:-1]).copy() if values.shape != pts.shape[:-1] else values

    def at(self, x: float, y: float, z: float) -> complex:
        return complex(self(np.array([x, y, z]))[()])

    def relabel(self, label: str) -> "ScalarField":
        return replace(self, label=label)

    def __add__(self, other: "ScalarField") -> "ScalarField":
        return add(self, other)

    def __sub__(self, other: "ScalarField") -> "ScalarField":
        return add(self, scale(other, -1.0))

    def __neg__(self) -> "ScalarField":
        return scale(self, -1.0)

    def __mul__(self, factor: complex) -> "ScalarField":
        return scale(self, factor)

    __rmul__ = __mul__


@dataclass(frozen=True)
class RayProfile:
    """f(u * direction) for real u on the full line through the origin."""

    direction: np.ndarray
    profile: Callable[[np.ndarray], np.ndarray]
    decay: DecayClass = field(default_factory=lambda: DecayClass.power_law(0.0))
    extent: Optional[float] = None

    def __post_init__(self):
        d = np.asarray(self.direction, dtype=float)
        norm = float(np.linalg.norm(d))
        if norm == 0.0:
            raise DomainError("ray direction must be nonzero")
        if abs(norm - 1.0) > 1e-14:
            d = d / norm
        object.__setattr__(self, "direction", d)

    def __call__(self, u: Union[float, np.ndarray]) -> np.ndarray:
        return np.asarray(self.profile(np.asarray(u, dtype=float)), dtype=complex)


def _merge_singular(a: SingularSet, b: SingularSet) -> SingularSet:
    if a == b or b == SingularSet.none:
        return a
    if a == SingularSet.none:
        return b
    if SingularSet.origin in (a, b):
        return b if a == SingularSet.origin else a
    return SingularSet.full_z_axis


def add(f: ScalarField, g: ScalarField) -> ScalarField:
    parity = f.parity if f.parity == g.parity else None
    return ScalarField(
        fn=lambda p: f(p) + g(p),
        singular_set=_merge_singular(f.singular_set, g.singular_set),
        decay=f.decay.slowest(g.decay),
        parity=parity,
        label=f"({f.label} + {g.label})",
    )


def scale(f: ScalarField, factor: complex) -> ScalarField:
    return replace(f, fn=lambda p: factor * f(p), label=f"{factor}*{f.label}")


def multiply_by(f: ScalarField, factor: Callable[[np.ndarray], np.ndarray], label: str = "g",
                parity: Optional[Parity] = None) -> ScalarField:
    """Pointwise product with a smooth polynomially bounded function of position."""
    flipped = None
    if f.parity is not None and parity is not None:
        flipped = Parity.even if f.parity == parity else Parity.odd
    decay = f.decay
    if decay.kind.value == "power_law":
        decay = DecayClass.power_law(decay.exponent + 1.0, decay.scale)
    return ScalarField(
        fn=lambda p: factor(p) * f(p),
        singular_set=f.singular_set,
        decay=decay,
        parity=flipped,
        label=f"{label}*{f.label}",
    )


def coordinate(f: ScalarField, axis: int) -> ScalarField:
    """x_axis * f."""
    return multiply_by(f, lambda p: p[..., axis], label="xyz"[axis], parity=Parity.odd)


def radial_power(f: ScalarField, power: float) -> ScalarField:
    """r**power * f; the origin becomes singular for negative powers."""
    out = multiply_by(f, lambda p: radius(p) ** power, label=f"r^{power}", parity=Parity.even)
    if power < 0:
        out = replace(out, singular_set=_merge_singular(out.singular_set, SingularSet.origin))
    if f.decay.kind.value == "power_law":
        out = replace(out, decay=DecayClass.power_law(f.decay.exponent + power, f.decay.scale))
    return out


def parity(f: ScalarField) -> ScalarField:
    """(Pf)(r) = f(-r)."""
    return ScalarField(
        fn=lambda p: f(-p),
        singular_set=_MIRROR.get(f.singular_set, f.singular_set),
        decay=f.decay,
        parity=f.parity,
        label=f"P[{f.label}]",
    )


def inversion(f: ScalarField) -> ScalarField:
    """(Nf)(r, theta, phi) = f(1/r, theta, phi) / r^2."""

    def fn(p: np.ndarray) -> np.ndarray:
        r2 = np.sum(p * p, axis=-1)
        if np.any(r2 == 0.0):
            raise DomainError("inversion is undefined at the origin")
        return f(p / r2[..., None]) / r2

    return ScalarField(
        fn=fn,
        singular_set=SingularSet.origin if f.singular_set == SingularSet.none else f.singular_set,
        decay=DecayClass.power_law(-2.0),
        parity=f.parity,
        label=f"N[{f.label}]",
    )


def sample_ray(f: ScalarField, direction: Iterable[float]) -> RayProfile:
    """Restrict f to the line u * direction, -inf < u < inf."""
    d = np.asarray(list(direction), dtype=float)
    norm = float(np.linalg.norm(d))
    if norm == 0.0:
        raise DomainError("ray direction must be nonzero")
    d = d / norm
    if f.singular_set in (SingularSet.positive_z_axis, SingularSet.negative_z_axis, SingularSet.full_z_axis):
        if np.hypot(d[0], d[1]) < settings.AXIS_TUBE:
            raise AxisSingularity(f"direction {d.tolist()} lies along the {f.singular_set.value} of {f.label}")

    def profile(u: np.ndarray) -> np.ndarray:
        return f(np.asarray(u, dtype=float)[..., None] * d)

    return RayProfile(direction=d, profile=profile, decay=f.decay, extent=f.decay.extent())


def constant(value: complex) -> ScalarField:
    return ScalarField(fn=lambda p: np.full(p.shape[:-1], value, dtype=complex), parity=Parity.even,
                       label=f"{value}")


def radial(fn: Callable[[np.ndarray], np.ndarray], decay: DecayClass, label: str = "g(r)") -> ScalarField:
    return ScalarField(fn=lambda p: fn(radius(p)), decay=decay, parity=Parity.even, label=label)


def gaussian_packet(
    sigma: float,
    monomial: Tuple[int, int, int] = (0, 0, 0),
    center: Tuple[float, float, float] = (0.0, 0.0, 0.0),
) -> ScalarField:
    """x^a y^b z^c exp(-|r - center|^2 / (2 sigma^2))."""
    c = np.asarray(center, dtype=float)
    a, b, e = monomial
    degree = a + b + e

    def fn(p: np.ndarray) -> np.ndarray:
        d = p - c
        poly = p[..., 0] ** a * p[..., 1] ** b * p[..., 2] ** e
        return poly * np.exp(-np.sum(d * d, axis=-1) / (2.0 * sigma * sigma))

    centred = not np.any(c)
    packet_parity = (Parity.even if degree % 2 == 0 else Parity.odd) if centred else None
    name = "".join(v * n for v, n in zip("xyz", monomial)) or "1"
    return ScalarField(
        fn=fn,
        decay=DecayClass.gaussian(sigma * (1.0 + 0.1 * degree) + float(np.linalg.norm(c)) / 12.0),
        parity=packet_parity,
        label=f"{name}*gauss({sigma:g})",
    )


def odd_packets(sigmas: Iterable[float] = (0.7, 1.0, 1.5)) -> Tuple[ScalarField, ...]:
    """Parity-odd Gaussian packets {x, y, z, xyz} * exp(-r^2 / 2 sigma^2)."""
    monomials = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1))
    return tuple(gaussian_packet(s, m) for s in sigmas for m in monomials)
