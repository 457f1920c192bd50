# ABOUTME: Local Poincare generators a^0, a, K, J for helicity s applied by finite differences
# ABOUTME: Commutator table, eigenvalue, null, parity and continuity residual checks

from typing import Dict, List, Optional, Tuple

import numpy as np

from app.errors import DomainError
from app.models import GeneratorId, Helicity, Residual, SingularSet, WaveMode
from app.services.eigenmode_service import eigenmode_service
from app.utils.fields import ScalarField, as_points, parity, radius, require_off_axis
from app.utils.finite_diff import gradient, hessian, laplacian
from app.utils.residuals import relative_residual, worst_of
from logging_config import get_logger

logger = get_logger(__name__)

NESTED_STEP = 2e-2

# metric signature (+, -, -, -)
ETA = np.diag([1.0, -1.0, -1.0, -1.0])

_A = {0: GeneratorId.A0, 1: GeneratorId.A1, 2: GeneratorId.A2, 3: GeneratorId.A3}

# J^{lambda mu} in terms of the named generators: K_i = J^{i0}, (J_1, J_2, J_3) = (J^{23}, J^{31}, J^{12})
_J_UPPER = {
    (1, 0): (GeneratorId.K1, 1.0),
    (2, 0): (GeneratorId.K2, 1.0),
    (3, 0): (GeneratorId.K3, 1.0),
    (2, 3): (GeneratorId.J1, 1.0),
    (3, 1): (GeneratorId.J2, 1.0),
    (1, 2): (GeneratorId.J3, 1.0),
}

Combination = Dict[GeneratorId, complex]


def lorentz_index(lam: int, mu: int) -> Optional[Tuple[GeneratorId, float]]:
    """J^{lam mu} as (generator, sign); None on the diagonal."""
    if lam == mu:
        return None
    if (lam, mu) in _J_UPPER:
        return _J_UPPER[(lam, mu)]
    gid, sign = _J_UPPER[(mu, lam)]
    return gid, -sign


def _as_tensor(gid: GeneratorId) -> Tuple[str, Tuple[int, ...]]:
    if gid.value.startswith("A"):
        return "a", (int(gid.value[1]),)
    for pair, (name, _) in _J_UPPER.items():
        if name == gid:
            return "J", pair
    raise DomainError(f"unknown generator {gid}")


def _add(out: Combination, pair: Optional[Tuple[GeneratorId, float]], coeff: complex) -> None:
    if pair is None or coeff == 0.0:
        return
    gid, sign = pair
    out[gid] = out.get(gid, 0.0) + sign * coeff
    if out[gid] == 0.0:
        del out[gid]


def expected_commutator(lhs: GeneratorId, rhs: GeneratorId) -> Combination:
    """Right-hand side of [lhs, rhs] from the Poincare algebra, as a combination of generators."""
    lhs, rhs = GeneratorId(lhs), GeneratorId(rhs)
    kind_l, idx_l = _as_tensor(lhs)
    kind_r, idx_r = _as_tensor(rhs)
    out: Combination = {}

    if kind_l == "a" and kind_r == "a":
        return out
    if kind_l == "a":
        flipped = expected_commutator(rhs, lhs)
        return {gid: -c for gid, c in flipped.items()}

    lam, mu = idx_l
    if kind_r == "a":
        (nu,) = idx_r
        # [J^{lm}, a^n] = i (eta^{mn} a^l - eta^{ln} a^m)
        _add(out, (_A[lam], 1.0), 1j * ETA[mu, nu])
        _add(out, (_A[mu], 1.0), -1j * ETA[lam, nu])
        return out

    nu, rho = idx_r
    # [J^{lm}, J^{nr}] = i (eta^{lr} J^{mn} + eta^{mn} J^{lr} - eta^{ln} J^{mr} - eta^{mr} J^{ln})
    _add(out, lorentz_index(mu, nu), 1j * ETA[lam, rho])
    _add(out, lorentz_index(lam, rho), 1j * ETA[mu, nu])
    _add(out, lorentz_index(mu, rho), -1j * ETA[lam, nu])
    _add(out, lorentz_index(lam, nu), -1j * ETA[mu, rho])
    return out


def commutator_pairs() -> List[Tuple[GeneratorId, GeneratorId]]:
    """The 45 unordered pairs of distinct generators."""
    ids = list(GeneratorId)
    return [(ids[i], ids[j]) for i in range(len(ids)) for j in range(i + 1, len(ids))]


class DiffOpsService:
    """Differential generators of the massless helicity-s representation."""

    def __init__(self, step: Optional[float] = None):
        self.step = step

    def _frame(self, s: Helicity, pts: np.ndarray):
        """W = (x/(r - z), y/(r - z), -1) and 1/(r - z), off the positive z axis."""
        if s.two_s:
            require_off_axis(pts, SingularSet.positive_z_axis)
        r = radius(pts)
        inv = 1.0 / (r - pts[..., 2]) if s.two_s else np.zeros_like(r)
        W = np.stack([pts[..., 0] * inv, pts[..., 1] * inv, -np.ones_like(r)], axis=-1)
        return W, inv

    def _field(self, f: ScalarField, fn, label: str, s: Helicity) -> ScalarField:
        singular = f.singular_set
        if s.two_s and singular in (SingularSet.none, SingularSet.origin):
            singular = SingularSet.positive_z_axis
        return ScalarField(fn=fn, singular_set=singular, decay=f.decay, label=f"{label}[{f.label}]")

    # ------------------------------------------------------------------ generators

    def apply_a0(self, s: Helicity, f: ScalarField, step: Optional[float] = None) -> ScalarField:
        """-r lap f + 2 s (i/(r - z)) d_phi f + 2 s^2 f / (r - z)."""
        step = step or self.step

        def fn(pts: np.ndarray) -> np.ndarray:
            pts = as_points(pts)
            _, inv = self._frame(s, pts)
            out = -radius(pts) * laplacian(f, pts, step)
            if s.two_s:
                grad = gradient(f, pts, step)
                d_phi = pts[..., 0] * grad[..., 1] - pts[..., 1] * grad[..., 0]
                out = out + 2.0 * s.s * 1j * inv * d_phi + 2.0 * s.s ** 2 * inv * f(pts)
            return out

        return self._field(f, fn, "a0", s)

    def apply_a_vec(self, s: Helicity, f: ScalarField, step: Optional[float] = None) -> List[ScalarField]:
        """-2 grad f - 2 (x . grad) grad f + x lap f - 4 i s (W x grad f) - 2 s^2 e3 f / (r - z)."""
        step = step or self.step

        def component(axis: int):
            def fn(pts: np.ndarray) -> np.ndarray:
                pts = as_points(pts)
                W, inv = self._frame(s, pts)
                grad = gradient(f, pts, step)
                hess = hessian(f, pts, step)
                lap = np.trace(hess, axis1=-2, axis2=-1)
                radial = np.einsum("...b,...b->...", pts, hess[..., axis, :])
                out = -2.0 * grad[..., axis] - 2.0 * radial + pts[..., axis] * lap
                if s.two_s:
                    cross = np.cross(W, grad)[..., axis]
                    out = out - 4j * s.s * cross
                    if axis == 2:
                        out = out - 2.0 * s.s ** 2 * inv * f(pts)
                return out
            return fn

        return [self._field(f, component(a), f"a{a + 1}", s) for a in range(3)]

    def apply_boost(self, s: Helicity, f: ScalarField, step: Optional[float] = None) -> List[ScalarField]:
        """K f = -i r grad f - s (rhat x W) f."""
        step = step or self.step

        def component(axis: int):
            def fn(pts: np.ndarray) -> np.ndarray:
                pts = as_points(pts)
                W, _ = self._frame(s, pts)
                r = radius(pts)
                out = -1j * r * gradient(f, pts, step)[..., axis]
                if s.two_s:
                    rhat = pts / r[..., None]
                    out = out - s.s * np.cross(rhat, W)[..., axis] * f(pts)
                return out
            return fn

        return [self._field(f, component(a), f"K{a + 1}", s) for a in range(3)]

    def apply_rotation(self, s: Helicity, f: ScalarField, step: Optional[float] = None) -> List[ScalarField]:
        """J f = -i r x grad f + s W f."""
        step = step or self.step

        def component(axis: int):
            def fn(pts: np.ndarray) -> np.ndarray:
                pts = as_points(pts)
                W, _ = self._frame(s, pts)
                out = -1j * np.cross(pts, gradient(f, pts, step))[..., axis]
                if s.two_s:
                    out = out + s.s * W[..., axis] * f(pts)
                return out
            return fn

        return [self._field(f, component(a), f"J{a + 1}", s) for a in range(3)]

    def generator(self, gid: GeneratorId, s: Helicity, f: ScalarField, step: Optional[float] = None) -> ScalarField:
        gid = GeneratorId(gid)
        index = int(gid.value[1]) - 1
        if gid == GeneratorId.A0:
            return self.apply_a0(s, f, step)
        if gid.value.startswith("A"):
            return self.apply_a_vec(s, f, step)[index]
        if gid.value.startswith("K"):
            return self.apply_boost(s, f, step)[index]
        return self.apply_rotation(s, f, step)[index]

    # ------------------------------------------------------------------ checks

    def check_commutator(self, lhs: GeneratorId, rhs: GeneratorId, s: Helicity, f: ScalarField, pts) -> Residual:
        """[lhs, rhs] f against the algebra's right-hand side at the given points."""
        pts = as_points(pts)
        lhs, rhs = GeneratorId(lhs), GeneratorId(rhs)
        forward = self.generator(lhs, s, self.generator(rhs, s, f, NESTED_STEP), NESTED_STEP)(pts)
        backward = self.generator(rhs, s, self.generator(lhs, s, f, NESTED_STEP), NESTED_STEP)(pts)
        expected = np.zeros(pts.shape[:-1], dtype=complex)
        for gid, coeff in expected_commutator(lhs, rhs).items():
            expected = expected + coeff * self.generator(gid, s, f)(pts)
        scale = float(max(np.max(np.abs(forward)), np.max(np.abs(backward)), np.max(np.abs(expected))))
        return relative_residual(f"[{lhs.value}, {rhs.value}] s={s}", forward - backward, expected, scale)

    def check_eigen(self, mode: WaveMode, pts, u: Optional[ScalarField] = None) -> Residual:
        """a^lambda u - k^lambda u for all four components."""
        pts = as_points(pts)
        u = u or eigenmode_service.u_field(mode)
        values = u(pts)
        fields = [self.apply_a0(mode.s, u)] + self.apply_a_vec(mode.s, u)
        scale = float(mode.k0 * np.max(np.abs(values)))
        checks = [
            relative_residual(f"a{lam} u - k{lam} u", field(pts), kval * values, scale)
            for lam, (field, kval) in enumerate(zip(fields, mode.four_vector))
        ]
        return worst_of(f"eigen s={mode.s} k={tuple(mode.k)}", checks)

    def check_null(self, s: Helicity, f: ScalarField, pts) -> Residual:
        """(a^0 a^0 - a . a) f."""
        pts = as_points(pts)
        time_part = self.apply_a0(s, self.apply_a0(s, f, NESTED_STEP), NESTED_STEP)(pts)
        space = [self.apply_a_vec(s, g, NESTED_STEP)[a](pts) for a, g in enumerate(self.apply_a_vec(s, f, NESTED_STEP))]
        space_part = sum(space)
        scale = float(max(np.max(np.abs(time_part)), np.max(np.abs(space_part))))
        return relative_residual(f"null s={s}", time_part, space_part, scale)

    def check_parity_relations(self, f: ScalarField, pts) -> Residual:
        """K P = -P K and J P = P J for the helicity-zero generators."""
        pts = as_points(pts)
        s = Helicity(two_s=0)
        pf = parity(f)
        checks = []
        for name, op, sign in (("K", self.apply_boost, -1.0), ("J", self.apply_rotation, 1.0)):
            for axis, (after, before) in enumerate(zip(op(s, pf), op(s, f))):
                checks.append(relative_residual(f"{name}{axis + 1} P", after(pts), sign * parity(before)(pts)))
        return worst_of("parity relations", checks)

    def continuity_residual(self, f: ScalarField, pts, s: Optional[Helicity] = None) -> Residual:
        """div i[psi* grad psi - (grad psi*) psi] + (2 s / (r (r - z))) d_phi |psi|^2 for stationary psi."""
        s = s or Helicity(two_s=0)
        pts = as_points(pts)
        step = NESTED_STEP

        def current(axis: int):
            def fn(q: np.ndarray) -> np.ndarray:
                psi = f(q)
                grad = gradient(f, q, step)[..., axis]
                return (-2.0 * np.imag(np.conj(psi) * grad)).astype(complex)
            return fn

        terms = [np.real(gradient(current(a), pts, step)[..., a]) for a in range(3)]
        total = sum(terms)
        magnitude = sum(np.abs(t) for t in terms)
        if s.two_s:
            _, inv = self._frame(s, pts)
            density = gradient(lambda q: np.abs(f(q)) ** 2 + 0j, pts, step).real
            d_phi = pts[..., 0] * density[..., 1] - pts[..., 1] * density[..., 0]
            helicity = 2.0 * s.s * inv / radius(pts) * d_phi
            total = total + helicity
            magnitude = magnitude + np.abs(helicity)
        scale = float(np.max(magnitude)) if magnitude.size else 0.0
        return relative_residual(f"continuity s={s}", total, np.zeros_like(total), scale)


diffops_service = DiffOpsService()
