# ABOUTME: Time component r0 of the null position four-vector and its boundary condition
# ABOUTME: Commutator, null-property and factorization checks built on the ray operators

import math
from typing import Iterable, List, Optional, Sequence

import numpy as np

from app.models import Helicity, PositionCheckConfig, R0Form, Residual, Sign, ViolationSample
from app.services.diffops_service import diffops_service
from app.services.ray_transform_service import RayTransformService, ray_transform_service
from app.utils.fields import ScalarField, add, as_points, coordinate, radial_power, radius, scale
from app.utils.quadrature import half_line_rule
from app.utils.residuals import relative_residual, worst_of
from logging_config import get_logger

logger = get_logger(__name__)

SCALAR = Helicity(two_s=0)


def fibonacci_directions(n: int) -> np.ndarray:
    """n nearly uniform unit vectors, none on the z axis."""
    i = np.arange(n) + 0.5
    cos_t = 1.0 - 2.0 * i / n
    phi = math.pi * (1.0 + math.sqrt(5.0)) * i
    sin_t = np.sqrt(1.0 - cos_t ** 2)
    return np.stack([sin_t * np.cos(phi), sin_t * np.sin(phi), cos_t], axis=-1)


def _times_radius(f: ScalarField) -> ScalarField:
    return radial_power(f, 1.0)


class PositionService:
    """r0 = -r (i r^-1/2 G+ r^1/2) = -(i r^-1/2 G- r^1/2) r, and the transformed boost K-bar."""

    def __init__(self, rays: Optional[RayTransformService] = None):
        self.rays = rays or ray_transform_service

    def _i_g(self, sign: Sign, f: ScalarField) -> ScalarField:
        return scale(self.rays.apply_G(sign, f, sandwich=True), 1j)

    def apply_r0(self, form: R0Form, f: ScalarField) -> ScalarField:
        form = R0Form(form)
        if form == R0Form.left:
            out = scale(_times_radius(self._i_g(Sign.plus, f)), -1.0)
        else:
            out = scale(self._i_g(Sign.minus, _times_radius(f)), -1.0)
        return out.relabel(f"r0_{form.value}[{f.label}]")

    def kbar(self, f: ScalarField, form: R0Form = R0Form.left) -> List[ScalarField]:
        """K-bar f as K (i G'+) f (left) or (i G'-) K f (right)."""
        if R0Form(form) == R0Form.left:
            return diffops_service.apply_boost(SCALAR, self._i_g(Sign.plus, f))
        return [self._i_g(Sign.minus, k) for k in diffops_service.apply_boost(SCALAR, f)]

    def boundary_residual(self, f: ScalarField, directions: Optional[np.ndarray] = None) -> float:
        """max over rays of |rho Z+(sqrt(r) f)| (constant along each ray)."""
        directions = fibonacci_directions(24) if directions is None else as_points(directions)
        values = self.rays.apply_Z(Sign.plus, f, sandwich=True)(directions / radius(directions)[:, None])
        worst = float(np.max(np.abs(values)))
        logger.debug(f"boundary residual of {f.label}: {worst:.3e}")
        return worst

    def check_even_moment(self, f: ScalarField, directions: Optional[np.ndarray] = None) -> Residual:
        """For even f the boundary term equals (2/pi) times the half-ray moment of sqrt(r) f."""
        directions = fibonacci_directions(12) if directions is None else as_points(directions)
        directions = directions / radius(directions)[:, None]
        rule = half_line_rule(self.rays.spec)
        samples = f(rule.nodes[None, :, None] * directions[:, None, :])
        moment = 2.0 / math.pi * rule.apply(np.sqrt(rule.nodes) * samples)
        boundary = self.rays.apply_Z(Sign.plus, f, sandwich=True)(directions)
        return relative_residual(f"even moment [{f.label}]", boundary, moment)

    def check_boost_position(self, fields: Sequence[ScalarField], pts, r0_axes: Iterable[int] = (0, 1, 2)) -> Residual:
        """[K-bar^a, x_b] f = i delta_ab r0 f and [K-bar^a, r0] f = i x_a f, both factorizations."""
        pts = as_points(pts)
        checks = []
        for f in fields:
            r0f = self.apply_r0(R0Form.left, f)(pts)
            for form in R0Form:
                plain = [k(pts) for k in self.kbar(f, form)]
                for b in range(3):
                    shifted = self.kbar(coordinate(f, b), form)
                    for a in range(3):
                        lhs = shifted[a](pts) - pts[..., b] * plain[a]
                        rhs = 1j * r0f if a == b else np.zeros_like(r0f)
                        checks.append(relative_residual(
                            f"[Kbar{a + 1}, x{b + 1}] {form.value} [{f.label}]", lhs, rhs, float(np.max(np.abs(r0f)))))
                for a in r0_axes:
                    lhs = (self.kbar(self.apply_r0(R0Form.left, f), form)[a](pts)
                           - self.apply_r0(R0Form.left, self.kbar(f, form)[a])(pts))
                    rhs = 1j * pts[..., a] * f(pts)
                    checks.append(relative_residual(f"[Kbar{a + 1}, r0] {form.value} [{f.label}]", lhs, rhs))
        return worst_of("boost-position commutators", checks)

    def check_kbar_forms(self, f: ScalarField, pts) -> Residual:
        """K (iG'+) f = (iG'-) K f, V K f = K U f and [G+, x] f = x Z+ f."""
        pts = as_points(pts)
        checks = []
        left, right = self.kbar(f, R0Form.left), self.kbar(f, R0Form.right)
        for a in range(3):
            checks.append(relative_residual(f"Kbar{a + 1} forms", left[a](pts), right[a](pts)))

        u_f = self.rays.apply_U("forward", f)
        boosted = diffops_service.apply_boost(SCALAR, f)
        k_of_u = diffops_service.apply_boost(SCALAR, u_f)
        for a in range(3):
            checks.append(relative_residual(f"V K{a + 1} = K{a + 1} U", self.rays.apply_V(boosted[a])(pts),
                                            k_of_u[a](pts)))

        for b in range(3):
            lhs = self.rays.apply_G(Sign.plus, coordinate(f, b))(pts) - pts[..., b] * self.rays.apply_G(Sign.plus, f)(pts)
            rhs = pts[..., b] * self.rays.apply_Z(Sign.plus, f)(pts)
            checks.append(relative_residual(f"[G+, x{b + 1}]", lhs, rhs))
        return worst_of(f"K-bar factorizations [{f.label}]", checks)

    def check_null_position(self, f: ScalarField, pts) -> Residual:
        """(r0)^2 f = r^2 f."""
        pts = as_points(pts)
        lhs = self.apply_r0(R0Form.left, self.apply_r0(R0Form.left, f))(pts)
        rhs = radius(pts) ** 2 * f(pts)
        return relative_residual(f"(r0)^2 = r^2 [{f.label}]", lhs, rhs)

    def check_r0_commutes(self, f: ScalarField, pts) -> Residual:
        """[r0, x_b] f = 0 for b = 1, 2, 3 and the two r0 forms agree."""
        pts = as_points(pts)
        plain = self.apply_r0(R0Form.left, f)(pts)
        checks = [relative_residual("r0 left = right", plain, self.apply_r0(R0Form.right, f)(pts))]
        for b in range(3):
            moved = self.apply_r0(R0Form.left, coordinate(f, b))(pts)
            checks.append(relative_residual(f"[r0, x{b + 1}]", moved, pts[..., b] * plain,
                                            float(np.max(np.abs(moved)))))
        return worst_of(f"r0 commutes [{f.label}]", checks)

    def check_unitary_sandwich(self, f: ScalarField, pts) -> Residual:
        """(i G'-)(i G'+) f = f, i.e. (V U^-1)(U V^-1) = 1."""
        pts = as_points(pts)
        lhs = self._i_g(Sign.minus, self._i_g(Sign.plus, f))(pts)
        return relative_residual(f"(iG'-)(iG'+) = 1 [{f.label}]", lhs, f(pts))

    def violation_sweep(self, compliant: ScalarField, violating: ScalarField, eps_values: Iterable[float],
                        pts) -> List[ViolationSample]:
        """Left/right r0 mismatch of compliant + eps * violating.

        The mismatch is i sqrt(r) Z+(sqrt(r) f) = i B / sqrt(rho), B being the per-ray
        boundary value, so it scales with the boundary residual.
        """
        pts = as_points(pts)
        rhat = pts / radius(pts)[:, None]
        samples = []
        for eps in eps_values:
            f = add(compliant, scale(violating, eps))
            gap = self.apply_r0(R0Form.left, f)(pts) - self.apply_r0(R0Form.right, f)(pts)
            per_ray = self.rays.apply_Z(Sign.plus, f, sandwich=True)(rhat)
            predicted = per_ray / np.sqrt(radius(pts))
            samples.append(ViolationSample(
                eps=float(eps),
                boundary=float(np.max(np.abs(per_ray))),
                form_gap=float(np.max(np.abs(gap))),
                predicted_gap=float(np.max(np.abs(predicted))),
            ))
            logger.info(f"violation eps={eps:g}: boundary {samples[-1].boundary:.3e}, gap {samples[-1].form_gap:.3e}")
        return samples

    def run_config(self, config: PositionCheckConfig) -> List[Residual]:
        """Every position check over the configured fields and points."""
        pts = config.points
        out = [self.check_boost_position(config.test_fields, pts)]
        for f in config.test_fields:
            out.append(self.check_null_position(f, pts))
            out.append(self.check_r0_commutes(f, pts))
            out.append(self.check_unitary_sandwich(f, pts))
        return out


position_service = PositionService()
