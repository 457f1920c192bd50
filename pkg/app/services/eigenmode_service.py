# ABOUTME: Closed-form eigenfunctions u and w, the angular phase factor and the 1/r inner product
# ABOUTME: Also builds Gaussian k-space packets for smeared orthogonality checks

import cmath
import math
from functools import lru_cache
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy import special

from app.errors import AxisSingularity, DomainError, QuadratureFailure
from app.models import BesselOrder, DecayClass, Helicity, SingularSet, SphericalGrid, WaveMode
from app.utils.bessel import bessel_j
from app.utils.fields import Point3, ScalarField, as_points, e_iphi, radius
from app.utils.finite_diff import radial_derivative
from app.utils.quadrature import gauss_legendre, mapped_tail, panels
from config import settings
from logging_config import get_logger

logger = get_logger(__name__)

FOUR_PI = 4.0 * math.pi
CLAMP = 1e-12
PACKET_CHUNK = 256


def _vector(v: Union[Sequence[float], np.ndarray]) -> np.ndarray:
    return np.asarray(v, dtype=float).reshape(3)


def _scalar_or_array(values: np.ndarray, points) -> Union[complex, np.ndarray]:
    if isinstance(points, Point3) or np.ndim(points) == 1:
        return complex(np.asarray(values).reshape(()))
    return values


@lru_cache(maxsize=16)
def spherical_rule(grid: SphericalGrid) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes (N, 3) and weights (N,) for the integral of F over R^3 with measure d^3r / r."""
    n = grid.radial_nodes
    if grid.parabolic:
        t, wt = panels(0.0, math.sqrt(grid.r_max), grid.radial_panels, n)
        r, wr = t * t, 2.0 * t * wt
    elif grid.grading > 1.0:
        q = grid.grading
        edges = grid.r_max * (q ** np.arange(grid.radial_panels + 1) - 1.0) / (q ** grid.radial_panels - 1.0)
        x, w = gauss_legendre(n)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[:-1] + edges[1:])
        r, wr = (mid[:, None] + half[:, None] * x).ravel(), (half[:, None] * w).ravel()
    else:
        r, wr = panels(0.0, grid.r_max, grid.radial_panels, n)
    if grid.tail_panels:
        rt, wtail = mapped_tail(grid.r_max, grid.tail_panels, n)
        r, wr = np.concatenate([r, rt]), np.concatenate([wr, wtail])

    if grid.parabolic:
        theta, wth = panels(0.0, math.pi, max(1, math.ceil(grid.n_theta / 8)), 8)
        cos_t, w_c = np.cos(theta), wth * np.sin(theta)
    else:
        cos_t, w_c = np.polynomial.legendre.leggauss(grid.n_theta)
    phi = 2.0 * math.pi * np.arange(grid.n_phi) / grid.n_phi
    w_phi = np.full(grid.n_phi, 2.0 * math.pi / grid.n_phi)

    R, C, P = np.meshgrid(r, cos_t, phi, indexing="ij")
    S = np.sqrt(1.0 - C * C)
    points = np.stack([R * S * np.cos(P), R * S * np.sin(P), R * C], axis=-1).reshape(-1, 3)
    weights = (wr[:, None, None] * r[:, None, None] * w_c[None, :, None] * w_phi[None, None, :]).ravel()
    points.setflags(write=False)
    weights.setflags(write=False)
    return points, weights


class EigenmodeService:
    """Eigenfunctions of the generators, their V images and the 1/r scalar product."""

    def __init__(self, grid: Optional[SphericalGrid] = None):
        self.grid = grid or SphericalGrid()

    # ------------------------------------------------------------------ phase factor

    def phase_factor(self, rhat, khat) -> Union[complex, np.ndarray]:
        """e^{i f(rhat, khat)}; unit modulus, undefined at khat . rhat = -1."""
        r, k = as_points(rhat), as_points(khat)
        values = self._phase(r / radius(r)[..., None], k / radius(k)[..., None])
        return _scalar_or_array(values, rhat)

    def _phase(self, rhat: np.ndarray, khat: np.ndarray) -> np.ndarray:
        """Vectorized over rhat (..., 3) and khat (3,) or (..., 3)."""
        dot = np.sum(rhat * khat, axis=-1)
        if np.any(dot <= -1.0 + 1e-14):
            raise DomainError("phase factor is singular at khat . rhat = -1")
        cos_half = np.sqrt(np.clip(0.5 * (1.0 + rhat[..., 2]), 0.0, 1.0))
        sin_half = np.sqrt(np.clip(0.5 * (1.0 - rhat[..., 2]), 0.0, 1.0))
        cos_half_k = np.sqrt(np.clip(0.5 * (1.0 + khat[..., 2]), 0.0, 1.0))
        sin_half_k = np.sqrt(np.clip(0.5 * (1.0 - khat[..., 2]), 0.0, 1.0))

        # e^{i phi_k} with phi_k = atan2(0, 0) = 0 on the z axis
        phi_k = np.arctan2(khat[..., 1], khat[..., 0])
        first = cos_half * cos_half_k
        with np.errstate(invalid="ignore"):
            lead = np.where(first == 0.0, 0.0, e_iphi(rhat) * first)
        if np.any(np.isnan(lead)):
            raise AxisSingularity("phase factor needs the azimuth of a point on the z axis")
        return np.sqrt(2.0 / (1.0 + dot)) * (lead + np.exp(1j * phi_k) * sin_half * sin_half_k)

    # ------------------------------------------------------------------ u_{s,k}

    def eval_u(self, mode: WaveMode, p) -> Union[complex, np.ndarray]:
        """(1/4 pi) e^{2 i s f(rhat, khat)} J_2s(sqrt(2 k r + 2 k . r))."""
        return _scalar_or_array(self._u_values(mode, as_points(p)), p)

    def _u_values(self, mode: WaveMode, pts: np.ndarray) -> np.ndarray:
        k = mode.k_vector
        r = radius(pts)
        arg2 = 2.0 * mode.k0 * r + 2.0 * (pts @ k)
        arg2 = np.where((arg2 < 0.0) & (arg2 >= -CLAMP * np.maximum(1.0, mode.k0 * r)), 0.0, arg2)
        if np.any(arg2 < 0.0):
            raise DomainError("k r + k . r must be non-negative")
        bessel = bessel_j(mode.s.two_s, np.sqrt(arg2))
        out = np.asarray(bessel, dtype=complex) / FOUR_PI
        if mode.s.two_s == 0:
            return out

        # J_2s(0) = 0 wherever the phase factor is undefined at the back of the wave vector
        live = (arg2 > 0.0) & (r > 0.0)
        if live.any():
            rhat = pts[live] / r[live][:, None]
            out[live] *= self._phase(rhat, mode.khat) ** mode.s.two_s
        return out

    def u_field(self, mode: WaveMode) -> ScalarField:
        singular = SingularSet.none if mode.s.two_s == 0 else SingularSet.positive_z_axis
        return ScalarField(
            fn=lambda p: self._u_values(mode, p),
            singular_set=singular,
            decay=DecayClass.oscillatory_bessel(-0.25, mode.k0),
            label=f"u[s={mode.s}, k={tuple(mode.k)}]",
        )

    # ------------------------------------------------------------------ w_{s,(0,0,k)}

    def eval_w(self, s: Helicity, k: float, p, azimuthal: bool = True) -> Union[complex, np.ndarray]:
        """V u for k along +z, from parabolic coordinates lam = (r + z)/2, mu = (r - z)/2.

        With azimuthal=False the e^{2 i s phi} factor is left out, which keeps the value
        defined on the z axis.
        """
        return _scalar_or_array(self._w_values(s, k, as_points(p), azimuthal), p)

    def _w_values(self, s: Helicity, k: float, pts: np.ndarray, azimuthal: bool = True) -> np.ndarray:
        if k <= 0.0:
            raise DomainError("k must be positive")
        if s.two_s < 0:
            raise DomainError("the closed form of w covers s >= 0")
        lam, mu = self._parabolic(pts)
        sv = s.s
        rotation = cmath.exp(1j * (1.0 - 2.0 * sv) * math.pi / 4.0)
        sign = -1.0 if s.two_s % 2 else 1.0

        def brace(t: np.ndarray, phase_sign: float) -> np.ndarray:
            x = 0.5 * k * t
            j_s = bessel_j(BesselOrder(two_nu=s.two_s), x)
            with np.errstate(invalid="ignore"):
                j_sm1 = bessel_j(BesselOrder(two_nu=s.two_s - 2), x)
                # k t J_{s-1}(k t / 2) stays finite at t = 0 for every s >= 0
                lowered = np.where(t > 0.0, k * t * j_sm1, 0.0)
            return np.exp(phase_sign * 1j * x) * ((2.0 * sv - 1.0) * j_s - lowered - phase_sign * 1j * k * t * j_s)

        total = rotation * brace(lam, 1.0) - sign * np.conj(rotation) * brace(mu, -1.0)
        out = total / (8.0 * math.pi * math.sqrt(2.0))
        if azimuthal and s.two_s:
            out = out * self._azimuth(pts, s)
        return out

    def _parabolic(self, pts: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Vectorized ParabolicCoords.from_point."""
        r = radius(pts)
        z = pts[..., 2]
        rho2 = pts[..., 0] ** 2 + pts[..., 1] ** 2
        big_lam = 0.5 * (r + np.abs(z))
        small = np.divide(rho2, 4.0 * big_lam, out=np.zeros_like(r), where=big_lam > 0.0)
        lam = np.where(z >= 0.0, big_lam, small)
        mu = np.where(z >= 0.0, small, big_lam)
        return lam, mu

    def _azimuth(self, pts: np.ndarray, s: Helicity) -> np.ndarray:
        phase = e_iphi(pts)
        if np.any(np.isnan(phase)):
            raise AxisSingularity(f"the azimuthal phase of w (s={s}) is undefined on the z axis")
        return phase ** s.two_s

    def eval_w_half(self, k: float, p, azimuthal: bool = True) -> Union[complex, np.ndarray]:
        """s = 1/2 closed form: -(e^{i phi} / 8 pi^{3/2}) [sqrt(kr + kz) e^{i(kr + kz)/2} + sqrt(kr - kz) e^{-i(kr - kz)/2}]."""
        pts = as_points(p)
        lam, mu = self._parabolic(pts)
        a, b = 2.0 * k * lam, 2.0 * k * mu
        out = -(np.sqrt(a) * np.exp(0.5j * a) + np.sqrt(b) * np.exp(-0.5j * b)) / (8.0 * math.pi ** 1.5)
        if azimuthal:
            out = out * self._azimuth(pts, Helicity.of(0.5))
        return _scalar_or_array(out, p)

    def eval_w_potential(self, s: Helicity, k: float, p) -> Union[complex, np.ndarray]:
        """w from (sqrt(r) d/dr sqrt(r)) applied numerically to its potential along the ray."""
        pts = as_points(p)
        rotation = cmath.exp(1j * (1.0 - 2.0 * s.s) * math.pi / 4.0)
        sign = -1.0 if s.two_s % 2 else 1.0

        def potential(q: np.ndarray) -> np.ndarray:
            lam, mu = self._parabolic(q)
            front = np.exp(0.5j * k * lam) * bessel_j(BesselOrder(two_nu=s.two_s), 0.5 * k * lam)
            back = np.exp(-0.5j * k * mu) * bessel_j(BesselOrder(two_nu=s.two_s), 0.5 * k * mu)
            return -(rotation * front - sign * np.conj(rotation) * back) / (FOUR_PI * math.sqrt(2.0))

        def weighted(q: np.ndarray) -> np.ndarray:
            return np.sqrt(radius(q)) * potential(q)

        r = radius(pts)
        out = np.sqrt(r) * radial_derivative(weighted, pts)
        if s.two_s:
            out = out * self._azimuth(pts, s)
        return _scalar_or_array(out, p)

    def w_field(self, s: Helicity, k: float) -> ScalarField:
        singular = SingularSet.none if s.two_s == 0 else SingularSet.full_z_axis
        return ScalarField(
            fn=lambda p: self._w_values(s, k, p),
            singular_set=singular,
            decay=DecayClass.oscillatory_bessel(0.5, k),
            label=f"w[s={s}, k={k:g}]",
        )

    def plane_wave_slope(self, s: Helicity, k: float, z_grid: np.ndarray) -> float:
        """Least-squares slope of the unwrapped phase of w along the +z axis."""
        z = np.asarray(z_grid, dtype=float)
        if np.any(z <= 0.0):
            raise DomainError("z grid must lie on the positive z axis")
        values = self._w_values(s, k, np.stack([np.zeros_like(z), np.zeros_like(z), z], axis=-1), azimuthal=False)
        phase = np.unwrap(np.angle(values))
        slope, _ = np.polyfit(z, phase, 1)
        return float(slope)

    def growth_ratio(self, s: Helicity, k: float, direction, r_grid: np.ndarray) -> float:
        """max |w(r d)| / sqrt(r) over the grid."""
        d = _vector(direction)
        d = d / np.linalg.norm(d)
        r = np.asarray(r_grid, dtype=float)
        values = self._w_values(s, k, r[:, None] * d[None, :], azimuthal=False)
        return float(np.max(np.abs(values) / np.sqrt(r)))

    # ------------------------------------------------------------------ inner product

    def inner_product(self, f: ScalarField, g: ScalarField, grid: Optional[SphericalGrid] = None) -> complex:
        """<f|g> = integral of conj(f) g over R^3 with measure d^3r / r."""
        grid = grid or self.grid
        points, weights = spherical_rule(grid)
        values = np.conj(f(points)) * g(points) * weights
        total = complex(np.sum(values))
        if not cmath.isfinite(total):
            raise QuadratureFailure(f"<{f.label}|{g.label}> is not finite on the grid", estimate=math.inf,
                                    tolerance=settings.QUAD_TOLERANCE)
        return total

    # ------------------------------------------------------------------ k-space packets

    def packet_field(self, s: Helicity, center, width: float, n_kappa: int = 32, n_alpha: int = 96,
                     n_beta: int = 32) -> ScalarField:
        """phi(r) = integral of g(k) u_{s,k}(r) / k d^3k for a normalized Gaussian g centred at `center`.

        The k integral runs in spherical coordinates about rhat; for s = 0 the azimuthal
        integral of the Gaussian is done in closed form.
        """
        c = _vector(center)
        C = float(np.linalg.norm(c))
        if width <= 0.0:
            raise DomainError("packet width must be positive")
        chat = c / C if C > 0.0 else np.array([0.0, 0.0, 1.0])
        norm = (2.0 * math.pi * width * width) ** -0.75
        kappa, w_kappa = panels(max(0.0, C - 10.0 * width), C + 10.0 * width, max(1, n_kappa // 8), 8)
        alpha, w_alpha = panels(0.0, math.pi, max(1, n_alpha // 8), 8)
        beta = 2.0 * math.pi * np.arange(n_beta) / n_beta
        scale = 4.0 * width * width

        def evaluate(pts: np.ndarray) -> np.ndarray:
            r = radius(pts)
            rhat = np.divide(pts, r[:, None], out=np.tile(chat, (len(pts), 1)), where=r[:, None] > 0.0)
            cos_g = np.clip(rhat @ chat, -1.0, 1.0)
            gamma = np.arccos(cos_g)
            K = kappa[None, :, None]
            A = alpha[None, None, :]
            arg = 2.0 * np.sqrt(r[:, None, None] * K) * np.abs(np.cos(0.5 * A))
            radial = bessel_j(s.two_s, arg)
            weight = (w_kappa[:, None] * w_alpha[None, :])[None] * K * np.sin(A)
            if s.two_s == 0:
                G = gamma[:, None, None]
                z = K * C * np.sin(A) * np.sin(G) / (2.0 * width * width)
                ring = 2.0 * math.pi * np.exp(-(K * K + C * C - 2.0 * K * C * np.cos(A - G)) / scale) * special.ive(0, z)
                return norm * np.sum(weight * ring * radial, axis=(1, 2)) / FOUR_PI
            return self._packet_helicity(s, pts, rhat, chat, c, kappa, alpha, beta, weight, radial, norm, scale)

        def fn(points: np.ndarray) -> np.ndarray:
            flat = points.reshape(-1, 3)
            size = PACKET_CHUNK if s.two_s == 0 else max(1, PACKET_CHUNK // (4 * n_beta))
            out = np.concatenate([evaluate(flat[i:i + size]) for i in range(0, len(flat), size)])
            return out.reshape(points.shape[:-1])

        singular = SingularSet.none if s.two_s == 0 else SingularSet.positive_z_axis
        return ScalarField(fn=fn, singular_set=singular, decay=DecayClass.oscillatory_bessel(-0.25, C),
                           label=f"packet[s={s}, c={tuple(c)}, w={width:g}]")

    def _packet_helicity(self, s, pts, rhat, chat, c, kappa, alpha, beta, weight, radial, norm, scale):
        # frame (rhat, e1, e2) with the packet centre in the (rhat, e1) plane
        trial = chat - (rhat @ chat)[:, None] * rhat
        fallback = np.cross(rhat, np.array([0.0, 1.0, 0.0]))
        fallback = np.where(np.linalg.norm(fallback, axis=-1, keepdims=True) < 1e-8,
                            np.cross(rhat, np.array([1.0, 0.0, 0.0])), fallback)
        e1 = np.where(np.linalg.norm(trial, axis=-1, keepdims=True) > 1e-12, trial, fallback)
        e1 = e1 / np.linalg.norm(e1, axis=-1, keepdims=True)
        e2 = np.cross(rhat, e1)
        ca, sa = np.cos(alpha), np.sin(alpha)
        cb, sb = np.cos(beta), np.sin(beta)
        khat = (ca[None, :, None, None] * rhat[:, None, None, :]
                + sa[None, :, None, None] * (cb[None, None, :, None] * e1[:, None, None, :]
                                             + sb[None, None, :, None] * e2[:, None, None, :]))
        dot = np.sum(khat * rhat[:, None, None, :], axis=-1)
        back = dot <= -1.0 + 1e-14
        safe = np.where(back[..., None], -rhat[:, None, None, :] + 1e-7 * e1[:, None, None, :], khat)
        safe = safe / np.linalg.norm(safe, axis=-1, keepdims=True)
        phase = self._phase(np.broadcast_to(rhat[:, None, None, :], safe.shape), safe) ** s.two_s
        k_vec = kappa[None, :, None, None, None] * khat[:, None, :, :, :]
        gauss = np.exp(-np.sum((k_vec - c) ** 2, axis=-1) / scale)
        ring = (2.0 * math.pi / len(beta)) * np.sum(gauss * phase[:, None], axis=-1)
        return norm * np.sum(weight * ring * radial, axis=(1, 2)) / FOUR_PI

    def packet_grid(self, centers: Sequence[np.ndarray], width: float) -> SphericalGrid:
        """Parabolic grid resolving the packets out to where their product has decayed."""
        sizes = [float(np.linalg.norm(c)) for c in centers]
        k_small, k_large = min(sizes), max(sizes) + 10.0 * width
        r_max = max(80.0 / k_small, 10.0 * k_small / width ** 2)
        cycles = 2.0 * math.sqrt(k_large * r_max) / math.pi
        count = max(4, math.ceil(cycles))
        on_axis = all(abs(c[0]) + abs(c[1]) == 0.0 for c in centers)
        return SphericalGrid(
            r_max=r_max,
            radial_panels=count,
            radial_nodes=8,
            tail_panels=0,
            n_theta=4 * count,
            n_phi=1 if on_axis else 4 * count,
            parabolic=True,
        )

    def packet_overlap(self, s: Helicity, center1, center2, width: float,
                       grid: Optional[SphericalGrid] = None) -> Tuple[complex, complex]:
        """(<phi_1|phi_2> by r-space quadrature, integral of conj(g_1) g_2 / k d^3k)."""
        c1, c2 = _vector(center1), _vector(center2)
        grid = grid or self.packet_grid([c1, c2], width)
        phi1 = self.packet_field(s, c1, width)
        phi2 = phi1 if np.array_equal(c1, c2) else self.packet_field(s, c2, width)
        logger.info(f"packet overlap s={s}: centers {c1.tolist()} / {c2.tolist()}, r_max={grid.r_max:g}")
        return self.inner_product(phi1, phi2, grid), self.k_space_overlap(c1, c2, width)

    def k_space_overlap(self, center1, center2, width: float, nodes: int = 24) -> complex:
        """Integral of g_1 g_2 / k over k-space by Gauss-Hermite quadrature."""
        c1, c2 = _vector(center1), _vector(center2)
        x, w = np.polynomial.hermite.hermgauss(nodes)
        X, Y, Z = np.meshgrid(x, x, x, indexing="ij")
        W = w[:, None, None] * w[None, :, None] * w[None, None, :]
        mid = 0.5 * (c1 + c2)
        k = mid + math.sqrt(2.0) * width * np.stack([X, Y, Z], axis=-1)
        gap = float(np.sum((c1 - c2) ** 2))
        total = np.sum(W / np.linalg.norm(k, axis=-1))
        return complex(math.pi ** -1.5 * math.exp(-gap / (8.0 * width * width)) * total)


eigenmode_service = EigenmodeService()
