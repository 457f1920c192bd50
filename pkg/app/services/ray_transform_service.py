# ABOUTME: Integral operators along rays through the origin: Fourier, Hilbert, V, U, G and Z
# ABOUTME: Maps ScalarField and RayProfile values to lazily evaluated transformed values

import cmath
import math
from typing import Callable, Optional

import numpy as np

from app.errors import DomainError
from app.models import (
    DecayClass,
    DecayKind,
    Direction,
    Helicity,
    Parity,
    QuadratureSpec,
    Residual,
    Sign,
    SingularSet,
    TransformKind,
)
from app.services.diffops_service import diffops_service
from app.services.eigenmode_service import eigenmode_service
from app.utils.fields import RayProfile, ScalarField, inversion, parity, radius, require_off_axis
from app.utils.finite_diff import derivative_1d, radial_derivative
from app.utils.quadrature import (
    cauchy_rule,
    chunked,
    half_line_rule,
    oscillatory_integral,
    pv_rule,
    tapered_integral,
)
from app.utils.residuals import relative_residual, worst_of
from logging_config import get_logger

logger = get_logger(__name__)

SQRT_2PI = math.sqrt(2.0 * math.pi)
SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
BESSEL_TAIL_TERMS = 6
PROFILE_CHUNK = 256

_GENERALIZED_INNER = {
    TransformKind.cosine: TransformKind.sine,
    TransformKind.sine: TransformKind.cosine,
    TransformKind.plus: TransformKind.plus,
    TransformKind.minus: TransformKind.minus,
}


def _merge_origin(singular: SingularSet) -> SingularSet:
    return SingularSet.origin if singular == SingularSet.none else singular


class RayTransformService:
    """Operators defined by one-dimensional integrals along the line through each point."""

    def __init__(self, spec: Optional[QuadratureSpec] = None):
        self.spec = spec or QuadratureSpec.default()

    def with_spec(self, spec: QuadratureSpec) -> "RayTransformService":
        return RayTransformService(spec)

    # ------------------------------------------------------------------ 1-D profiles

    def fourier_ray(self, kind: TransformKind, p: RayProfile, generalized: bool = False,
                    passes: int = 1) -> RayProfile:
        """sqrt(2/pi) * integral of cos/sin/exp(+-i r t) p(t) over t >= 0.

        The generalized form integrates by parts `passes` times, discarding only the
        surface term at infinity.
        """
        kind = TransformKind(kind)
        if not generalized:
            return self._fourier_plain(kind, p)
        if passes < 1:
            raise DomainError("generalized transforms need at least one pass")

        derivative = self.differentiate_profile(p)
        inner = self.fourier_ray(_GENERALIZED_INNER[kind], derivative, generalized=passes > 1, passes=passes - 1)
        boundary = SQRT_2_OVER_PI * complex(p(np.zeros(1))[0])

        def profile(r: np.ndarray) -> np.ndarray:
            r = np.asarray(r, dtype=float)
            if np.any(r == 0.0):
                raise DomainError("generalized transforms are undefined at r = 0")
            q = inner(r)
            if kind == TransformKind.cosine:
                return -q / r
            if kind == TransformKind.sine:
                return (boundary + q) / r
            if kind == TransformKind.plus:
                return 1j * (q + boundary) / r
            return -1j * (q + boundary) / r

        return RayProfile(direction=p.direction, profile=profile, decay=DecayClass.power_law(-1.0, p.decay.scale))

    def differentiate_profile(self, p: RayProfile) -> RayProfile:
        return RayProfile(
            direction=p.direction,
            profile=lambda t: derivative_1d(p, t),
            decay=p.decay,
            extent=p.extent,
        )

    def _fourier_plain(self, kind: TransformKind, p: RayProfile) -> RayProfile:
        spec = self.spec
        reach = p.extent

        def integral(r: np.ndarray, sign: float) -> np.ndarray:
            value, _ = oscillatory_integral(
                lambda t: p(t), sign * r, spec, reach=reach, label=f"F_{kind.value}"
            )
            return value

        def evaluate(r: np.ndarray) -> np.ndarray:
            if kind == TransformKind.plus:
                return SQRT_2_OVER_PI * integral(r, 1.0)
            if kind == TransformKind.minus:
                return SQRT_2_OVER_PI * integral(r, -1.0)
            forward, backward = integral(r, 1.0), integral(r, -1.0)
            if kind == TransformKind.cosine:
                return SQRT_2_OVER_PI * 0.5 * (forward + backward)
            return SQRT_2_OVER_PI * (forward - backward) / 2j

        def profile(r: np.ndarray) -> np.ndarray:
            r = np.asarray(r, dtype=float)
            flat = np.atleast_1d(r).ravel()
            out = np.concatenate([evaluate(flat[i:i + PROFILE_CHUNK]) for i in range(0, len(flat), PROFILE_CHUNK)])
            return out.reshape(r.shape)

        return RayProfile(direction=p.direction, profile=profile, decay=DecayClass.power_law(-1.0, p.decay.scale))

    def hilbert_ray(self, parity: Parity, p: RayProfile) -> RayProfile:
        """H_e p(r) = (A - B)/pi and H_o p(r) = (A + B)/pi with
        A = PV integral of p(ur)/(u - 1) and B = integral of p(ur)/(u + 1) over u >= 0."""
        parity = Parity(parity)
        pv = pv_rule(self.spec)
        cauchy = cauchy_rule(self.spec)
        plain = half_line_rule(self.spec)
        sign = -1.0 if parity == Parity.even else 1.0

        def evaluate(r: np.ndarray) -> np.ndarray:
            mag = np.abs(r)
            out = np.zeros(r.shape, dtype=complex)
            nonzero = mag > 0.0
            if nonzero.any():
                m = mag[nonzero]
                a = pv.apply(p(m[:, None] * pv.nodes))
                b = cauchy.apply(p(m[:, None] * cauchy.nodes))
                out[nonzero] = (a + sign * b) / math.pi
            if parity == Parity.odd and (~nonzero).any():
                # H_o p(0) = (2/pi) * integral of p(t)/t
                out[~nonzero] = 2.0 / math.pi * plain.apply(p(plain.nodes) / plain.nodes)
            if parity == Parity.even:
                out = np.where(r < 0.0, -out, out)
            return out

        def profile(r: np.ndarray) -> np.ndarray:
            r = np.asarray(r, dtype=float)
            flat = np.atleast_1d(r).ravel()
            out = np.concatenate([evaluate(flat[i:i + PROFILE_CHUNK]) for i in range(0, len(flat), PROFILE_CHUNK)])
            return out.reshape(r.shape)

        return RayProfile(direction=p.direction, profile=profile, decay=DecayClass.power_law(-1.0, p.decay.scale))

    def compose_check(self, p: RayProfile, r: np.ndarray) -> Residual:
        """Products of half-line Fourier transforms against their Hilbert-transform forms."""
        r = np.asarray(r, dtype=float)
        fc = self.fourier_ray(TransformKind.cosine, p)
        fs = self.fourier_ray(TransformKind.sine, p)
        fp = self.fourier_ray(TransformKind.plus, p)
        fm = self.fourier_ray(TransformKind.minus, p)
        he = self.hilbert_ray(Parity.even, p)(r)
        ho = self.hilbert_ray(Parity.odd, p)(r)
        base = p(r)

        def apply(kind: TransformKind, q: RayProfile) -> np.ndarray:
            return self.fourier_ray(kind, q)(r)

        checks = [
            relative_residual("FcFc = 1", apply(TransformKind.cosine, fc), base),
            relative_residual("FsFs = 1", apply(TransformKind.sine, fs), base),
            relative_residual("FcFs = Ho", apply(TransformKind.cosine, fs), ho),
            relative_residual("FsFc = -He", apply(TransformKind.sine, fc), -he),
            relative_residual("F+F+ = -i(He - Ho)", apply(TransformKind.plus, fp), -1j * (he - ho)),
            relative_residual("F-F+ = 2 + i(He + Ho)", apply(TransformKind.minus, fp), 2.0 * base + 1j * (he + ho)),
            relative_residual("F+F- = 2 - i(He + Ho)", apply(TransformKind.plus, fm), 2.0 * base - 1j * (he + ho)),
            relative_residual("F-F- = i(He - Ho)", apply(TransformKind.minus, fm), 1j * (he - ho)),
        ]
        return worst_of("fourier composition table", checks)

    # ------------------------------------------------------------------ fields

    def _on_ray(self, f: ScalarField, points: np.ndarray, u: np.ndarray, sign: float = 1.0) -> np.ndarray:
        return f(sign * u[None, :, None] * points[:, None, :])

    def apply_V(self, f: ScalarField) -> ScalarField:
        """(Vf)(r) = (1/sqrt(2 pi)) * integral over the line of e^{-iu} sqrt|u| sgn(u) f(u r) du."""
        return self._forward(f, -1.0, "V")

    def apply_U(self, direction: Direction, f: ScalarField) -> ScalarField:
        """U: as V with the parity blocks added instead of subtracted."""
        if Direction(direction) == Direction.forward:
            return self._forward(f, 1.0, "U")
        return self._inverse(f, 1.0, "U^-1")

    def apply_Vinv(self, g: ScalarField) -> ScalarField:
        """(V^-1 g)(r) = (1/sqrt(2 pi)) * integral over v > 0 of v^(-3/2) [e^{iv} g(r/v) - e^{-iv} g(-r/v)] dv."""
        return self._inverse(g, -1.0, "V^-1")

    def _forward(self, f: ScalarField, block_sign: float, label: str) -> ScalarField:
        spec = self.spec
        bessel = f.decay.kind == DecayKind.oscillatory_bessel

        def plain(points: np.ndarray) -> np.ndarray:
            rho = radius(points)
            reach = None
            if f.decay.is_localized and rho.min() > 0.0:
                reach = f.decay.extent() / rho.min()
            outgoing, _ = oscillatory_integral(
                lambda u: np.sqrt(u) * self._on_ray(f, points, u), -1.0, spec, reach=reach, label=label)
            incoming, _ = oscillatory_integral(
                lambda u: np.sqrt(u) * self._on_ray(f, points, u, -1.0), 1.0, spec, reach=reach, label=label)
            return (outgoing + block_sign * incoming) / SQRT_2PI

        def potential(points: np.ndarray) -> np.ndarray:
            flat = points.reshape(-1, 3)
            rho = radius(flat)
            outgoing, _ = oscillatory_integral(
                lambda u: self._on_ray(f, flat, u) / np.sqrt(u), -1.0, spec,
                tail_terms=max(spec.tail_terms, BESSEL_TAIL_TERMS), label=f"{label} (regularized)")
            incoming, _ = oscillatory_integral(
                lambda u: self._on_ray(f, flat, u, -1.0) / np.sqrt(u), 1.0, spec,
                tail_terms=max(spec.tail_terms, BESSEL_TAIL_TERMS), label=f"{label} (regularized)")
            return (np.sqrt(rho) * (outgoing - block_sign * incoming)).reshape(points.shape[:-1])

        def regularized(points: np.ndarray) -> np.ndarray:
            rho = radius(points)
            if np.any(rho == 0.0):
                raise DomainError(f"regularized {label} is evaluated off the origin only")
            return -1j / SQRT_2PI * np.sqrt(rho) * radial_derivative(potential, points)

        evaluate = regularized if bessel else plain
        cost = 16 * spec.panels * (8 if bessel else 1)

        def fn(points: np.ndarray) -> np.ndarray:
            require_off_axis(points, f.singular_set)
            return chunked(evaluate, points, cost)

        decay = (DecayClass.oscillatory_bessel(0.5, f.decay.scale) if bessel
                 else DecayClass.power_law(-1.5, f.decay.scale))
        return ScalarField(fn=fn, singular_set=f.singular_set, decay=decay, parity=f.parity,
                           label=f"{label}[{f.label}]")

    def _inverse(self, g: ScalarField, block_sign: float, label: str) -> ScalarField:
        spec = self.spec
        bessel = g.decay.kind == DecayKind.oscillatory_bessel
        terms = max(spec.tail_terms, BESSEL_TAIL_TERMS)

        def v_form(points: np.ndarray) -> np.ndarray:
            def side(sign: float):
                return lambda v: v ** -1.5 * g(sign * points[:, None, :] / v[None, :, None])
            forward, _ = oscillatory_integral(side(1.0), 1.0, spec, tail_terms=terms, label=label)
            backward, _ = oscillatory_integral(side(-1.0), -1.0, spec, tail_terms=terms, label=label)
            return (forward + block_sign * backward) / SQRT_2PI

        def split(points: np.ndarray) -> np.ndarray:
            # u in (0, 1] via v = 1/u >= 1, u >= 1 directly with a taper
            rho = radius(points)
            frequency = g.decay.scale * float(rho.max()) + 1.0

            def near(sign: float):
                return lambda t: (1.0 + t) ** -1.5 * g(sign * points[:, None, :] / (1.0 + t)[None, :, None])

            forward, _ = oscillatory_integral(near(1.0), 1.0, spec, tail_terms=terms,
                                              max_frequency=frequency, label=label)
            backward, _ = oscillatory_integral(near(-1.0), -1.0, spec, tail_terms=terms,
                                               max_frequency=frequency, label=label)
            inner = cmath.exp(1j) * forward + block_sign * cmath.exp(-1j) * backward

            def far(u: np.ndarray) -> np.ndarray:
                return (np.exp(1j / u) * self._on_ray(g, points, u)
                        + block_sign * np.exp(-1j / u) * self._on_ray(g, points, u, -1.0)) / np.sqrt(u)

            outer, _ = tapered_integral(far, 1.0, spec, max_frequency=frequency, label=label)
            return (inner + outer) / SQRT_2PI

        evaluate = split if bessel else v_form
        cost = 16 * spec.panels * (4 if bessel else 1)

        def fn(points: np.ndarray) -> np.ndarray:
            require_off_axis(points, g.singular_set)
            return chunked(evaluate, points, cost)

        decay = (DecayClass.oscillatory_bessel(-0.25, g.decay.scale) if bessel
                 else DecayClass.power_law(-1.5, g.decay.scale))
        singular = g.singular_set if block_sign < 0 else _merge_origin(g.singular_set)
        return ScalarField(fn=fn, singular_set=singular, decay=decay, parity=g.parity, label=f"{label}[{g.label}]")

    def _line_operator(self, f: ScalarField, kernel: Callable[[np.ndarray], np.ndarray], size: int,
                       sandwich: bool, label: str, decay: DecayClass, origin_singular: bool = True) -> ScalarField:
        def fn(points: np.ndarray) -> np.ndarray:
            if origin_singular and np.any(radius(points) == 0.0):
                raise DomainError(f"{label} is undefined at the origin")
            return chunked(kernel, points, size)

        singular = _merge_origin(f.singular_set) if origin_singular else f.singular_set
        prefix = "r^-1/2 " if sandwich else ""
        return ScalarField(fn=fn, singular_set=singular, decay=decay, label=f"{prefix}{label}[{f.label}]")

    def _weights(self, u: np.ndarray, sandwich: bool) -> np.ndarray:
        return np.sqrt(u) if sandwich else np.ones_like(u)

    def apply_G(self, sign: Sign, f: ScalarField, sandwich: bool = False) -> ScalarField:
        """G+- f(r) = (1/pi) integral over u >= 0 of [f(ur)/(u - 1) -+ f(-ur)/(u + 1)], principal value at u = 1.

        With `sandwich`, returns r^(-1/2) G+- r^(1/2) f.
        """
        sign = Sign(sign)
        pv = pv_rule(self.spec)
        cauchy = cauchy_rule(self.spec)
        s = -1.0 if sign == Sign.plus else 1.0
        wa = self._weights(pv.nodes, sandwich)
        wb = self._weights(cauchy.nodes, sandwich)

        def kernel(points: np.ndarray) -> np.ndarray:
            a = pv.apply(wa * self._on_ray(f, points, pv.nodes))
            b = cauchy.apply(wb * self._on_ray(f, points, cauchy.nodes, -1.0))
            return (a + s * b) / math.pi

        tag = "+" if sign == Sign.plus else "-"
        exponent = -1.5 if sandwich else -1.0
        return self._line_operator(f, kernel, len(pv) + len(cauchy), sandwich, f"G{tag}",
                                   DecayClass.power_law(exponent, f.decay.scale))

    def apply_Z(self, sign: Sign, f: ScalarField, sandwich: bool = False) -> ScalarField:
        """Z+- f(r) = (1/pi) integral over u >= 0 of [f(ur) +- f(-ur)]; proportional to 1/|r| on each ray."""
        sign = Sign(sign)
        rule = half_line_rule(self.spec)
        s = 1.0 if sign == Sign.plus else -1.0
        w = self._weights(rule.nodes, sandwich)

        def kernel(points: np.ndarray) -> np.ndarray:
            values = self._on_ray(f, points, rule.nodes) + s * self._on_ray(f, points, rule.nodes, -1.0)
            return rule.apply(w * values) / math.pi

        tag = "+" if sign == Sign.plus else "-"
        return self._line_operator(f, kernel, 2 * len(rule), sandwich, f"Z{tag}",
                                   DecayClass.power_law(-1.5 if sandwich else -1.0, f.decay.scale))

    def apply_H_field(self, parity: Parity, f: ScalarField, sandwich: bool = False) -> ScalarField:
        """Hilbert transform of f restricted to the half-ray through each point."""
        parity = Parity(parity)
        pv = pv_rule(self.spec)
        cauchy = cauchy_rule(self.spec)
        s = -1.0 if parity == Parity.even else 1.0
        wa = self._weights(pv.nodes, sandwich)
        wb = self._weights(cauchy.nodes, sandwich)

        def kernel(points: np.ndarray) -> np.ndarray:
            a = pv.apply(wa * self._on_ray(f, points, pv.nodes))
            b = cauchy.apply(wb * self._on_ray(f, points, cauchy.nodes))
            return (a + s * b) / math.pi

        return self._line_operator(f, kernel, len(pv) + len(cauchy), sandwich, f"H_{parity.value[0]}",
                                   DecayClass.power_law(-1.5 if sandwich else -1.0, f.decay.scale))

    def apply_F_field(self, kind: TransformKind, f: ScalarField) -> ScalarField:
        """r^(-1/2) F r^(1/2) applied along the half-ray through each point (F acting on t >= 0)."""
        kind = TransformKind(kind)
        spec = self.spec

        def kernel(points: np.ndarray) -> np.ndarray:
            rho = radius(points)
            rhat = points / rho[:, None]
            reach = f.decay.extent()

            def h(t: np.ndarray) -> np.ndarray:
                return np.sqrt(t) * self._on_ray(f, rhat, t)

            def integral(sign: float) -> np.ndarray:
                value, _ = oscillatory_integral(h, sign * rho, spec, reach=reach, label=f"F_{kind.value} field")
                return value

            if kind == TransformKind.plus:
                total = integral(1.0)
            elif kind == TransformKind.minus:
                total = integral(-1.0)
            elif kind == TransformKind.cosine:
                total = 0.5 * (integral(1.0) + integral(-1.0))
            else:
                total = (integral(1.0) - integral(-1.0)) / 2j
            return SQRT_2_OVER_PI * total / np.sqrt(rho)

        return self._line_operator(f, kernel, 16 * spec.panels, False, f"F_{kind.value}",
                                   DecayClass.power_law(-1.5, f.decay.scale))

    def check_adjoint(self, phi: ScalarField, psi: ScalarField, directions: np.ndarray) -> Residual:
        """Self-adjointness of r^-1/2 F_c r^1/2 and F_s on lines, and of P and N under the 1/r product."""
        checks = []
        for kind in (TransformKind.cosine, TransformKind.sine):
            a_phi, a_psi = self.apply_F_field(kind, phi), self.apply_F_field(kind, psi)
            for i, d in enumerate(np.atleast_2d(directions)):
                lhs = self.ray_line_inner_product(a_phi, psi, d)
                rhs = self.ray_line_inner_product(phi, a_psi, d)
                checks.append(relative_residual(f"F_{kind.value} adjoint, line {i}", np.array([lhs]), np.array([rhs])))
        for name, op in (("P", parity), ("N", inversion)):
            lhs = eigenmode_service.inner_product(op(phi), psi)
            rhs = eigenmode_service.inner_product(phi, op(psi))
            checks.append(relative_residual(f"{name} adjoint", np.array([lhs]), np.array([rhs])))
        return worst_of(f"adjointness [{phi.label}, {psi.label}]", checks)

    def check_rotation_commutes(self, f: ScalarField, pts) -> Residual:
        """J V = V J and J V^-1 = V^-1 J, and K commutes with N r^-1/2 F+- r^1/2, for helicity zero."""
        pts = np.asarray(pts, dtype=float)
        scalar = Helicity(two_s=0)
        checks = []
        rotated = diffops_service.apply_rotation(scalar, f)
        for name, op in (("V", self.apply_V), ("V^-1", self.apply_Vinv)):
            after = diffops_service.apply_rotation(scalar, op(f))
            for a in range(3):
                checks.append(relative_residual(f"J{a + 1} {name} = {name} J{a + 1}", after[a](pts), op(rotated[a])(pts)))
        boosted = diffops_service.apply_boost(scalar, f)
        for kind in (TransformKind.plus, TransformKind.minus):
            after = diffops_service.apply_boost(scalar, self.apply_ray_fourier(kind, f))
            for a in range(3):
                moved = self.apply_ray_fourier(kind, boosted[a])(pts)
                checks.append(relative_residual(f"[K{a + 1}, N F_{kind.value}]", after[a](pts), moved))
        return worst_of(f"rotation and ray commutation [{f.label}]", checks)

    def apply_ray_fourier(self, kind: TransformKind, f: ScalarField) -> ScalarField:
        """N r^-1/2 F r^1/2 f, i.e. sqrt(2/pi) * integral over u >= 0 of e^{+-iu} sqrt(u) f(u r) du."""
        return inversion(self.apply_F_field(kind, f)).relabel(f"N F_{TransformKind(kind).value}[{f.label}]")

    def ray_line_inner_product(self, f: ScalarField, g: ScalarField, direction) -> complex:
        """Integral over the full line t*direction of conj(f) g |t| dt."""
        d = np.asarray(direction, dtype=float)
        d = d / np.linalg.norm(d)
        rule = half_line_rule(self.spec)
        total = 0.0
        for sign in (1.0, -1.0):
            pts = sign * rule.nodes[:, None] * d[None, :]
            total += rule.apply(np.conj(f(pts)) * g(pts) * rule.nodes)
        return complex(total)


ray_transform_service = RayTransformService()
