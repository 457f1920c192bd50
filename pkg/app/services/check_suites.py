# ABOUTME: Concrete verification suites: algebra, generators, fourier, transforms, eigenmodes, position
# ABOUTME: Each suite registers named identities with strict tolerances; nothing runs at construction

import math
from functools import partial
from typing import List

import numpy as np
from scipy import special

from app.models import (
    DecayClass,
    GridRequest,
    Helicity,
    Parity,
    PositionCheckConfig,
    Quantity,
    Residual,
    Sign,
    SphericalGrid,
    TransformKind,
    WaveMode,
)
from app.services.base_check_service import CheckSuite, RegisteredCheck, SuiteContext
from app.services.diffops_service import commutator_pairs, diffops_service
from app.services.eigenmode_service import eigenmode_service
from app.services.grid_service import grid_service
from app.services.position_service import fibonacci_directions, position_service
from app.services.ray_transform_service import ray_transform_service
from app.utils.fields import (
    RayProfile,
    ScalarField,
    add,
    gaussian_packet,
    inversion,
    odd_packets,
    parity,
    radial,
    radial_power,
    radius,
    scale,
)
from app.utils.residuals import absolute_residual, relative_residual, worst_of

HELICITIES = (Helicity(two_s=0), Helicity(two_s=1), Helicity(two_s=2))
Z_AXIS = (0.0, 0.0, 1.0)
TILTED = (0.6, 0.0, 0.8)
J0_FIRST_ZERO = 2.404825557695773


def _gaussian(sigma: float = 1.0) -> ScalarField:
    return gaussian_packet(sigma)


def _u(two_s: int, k=Z_AXIS) -> ScalarField:
    return eigenmode_service.u_field(WaveMode(s=Helicity(two_s=two_s), k=k))


class AlgebraSuite(CheckSuite):
    """Every commutator among a^lambda, K and J, for s = 0, 1/2, 1."""

    name = "algebra"
    description = "45 Poincare commutators on a Gaussian-times-polynomial field"

    def _pair(self, lhs, rhs, f: ScalarField, pts: np.ndarray) -> Residual:
        return worst_of(f"[{lhs.value}, {rhs.value}]",
                        [diffops_service.check_commutator(lhs, rhs, s, f, pts) for s in HELICITIES])

    def checks(self, ctx: SuiteContext) -> List[RegisteredCheck]:
        f = gaussian_packet(1.0, (1, 0, 0), center=(0.2, -0.1, 0.3))
        pts = self.off_axis_points(ctx, 6, r_min=0.5, r_max=2.0)
        return [
            RegisteredCheck(f"[{lhs.value}, {rhs.value}]", "poincare commutation relations", 1e-6,
                            partial(self._pair, lhs, rhs, f, pts))
            for lhs, rhs in commutator_pairs()
        ]


class GeneratorSuite(CheckSuite):
    """Eigenvalue, null, parity and continuity properties of the local generators."""

    name = "generators"
    description = "a^lambda eigenfunctions, null generator, parity and current conservation"

    def _a0_gaussian(self, pts: np.ndarray) -> Residual:
        f = _gaussian()
        r = radius(pts)
        expected = -r * (r ** 2 - 3.0) * np.exp(-r ** 2 / 2.0)
        return relative_residual("a0 gauss", diffops_service.apply_a0(HELICITIES[0], f)(pts), expected)

    def _boost_gaussian(self, pts: np.ndarray) -> Residual:
        f = _gaussian()
        r = radius(pts)
        values = [k(pts) for k in diffops_service.apply_boost(HELICITIES[0], f)]
        return worst_of("K gauss", [relative_residual(f"K{a + 1} gauss", values[a], 1j * r * pts[:, a] * f(pts))
                                    for a in range(3)])

    def _rotation_examples(self, pts: np.ndarray) -> Residual:
        m2 = ScalarField(fn=lambda p: (p[..., 0] + 1j * p[..., 1]) ** 2 * np.exp(-np.sum(p * p, axis=-1) / 2.0),
                         decay=DecayClass.gaussian(1.2), label="(x+iy)^2 gauss")
        j3 = diffops_service.apply_rotation(HELICITIES[0], m2)[2](pts)
        radial_j = [j(pts) for j in diffops_service.apply_rotation(HELICITIES[0], _gaussian())]
        scale_ = float(np.max(np.abs(_gaussian()(pts))))
        return worst_of("J examples", [
            relative_residual("J3 e^{2i phi} g = 2 f", j3, 2.0 * m2(pts)),
            relative_residual("J radial = 0", np.concatenate(radial_j), np.zeros(3 * len(pts)), scale_),
        ])

    def _null(self, two_s: int, pts: np.ndarray) -> Residual:
        f = add(_u(two_s, Z_AXIS), _u(two_s, TILTED))
        return diffops_service.check_null(Helicity(two_s=two_s), f, pts)

    def checks(self, ctx: SuiteContext) -> List[RegisteredCheck]:
        rng = ctx.rng
        far = self.off_axis_points(ctx, 30, 0.3, 10.0, rng)
        near = self.off_axis_points(ctx, 8, 0.5, 3.0, rng)
        out = []
        for s in HELICITIES:
            for k in (Z_AXIS, TILTED):
                mode = WaveMode(s=s, k=k)
                out.append(RegisteredCheck(f"eigen s={s} k={k}", "translation eigenfunctions", 1e-6,
                                           partial(diffops_service.check_eigen, mode, far)))
        out += [
            RegisteredCheck("a0 on gaussian", "time translation generator", 1e-8, partial(self._a0_gaussian, near)),
            RegisteredCheck("K on gaussian", "boost generator", 1e-8, partial(self._boost_gaussian, near)),
            RegisteredCheck("J examples", "rotation generator", 1e-8, partial(self._rotation_examples, near)),
        ]
        for s in HELICITIES:
            out.append(RegisteredCheck(f"null s={s}", "massless generator", 1e-5,
                                       partial(self._null, s.two_s, near)))
        packet = gaussian_packet(1.0, (1, 1, 0), center=(0.3, 0.1, -0.2))
        out.append(RegisteredCheck("parity relations", "parity of boosts and rotations", 1e-8,
                                   partial(diffops_service.check_parity_relations, packet, near)))
        continuity_pts = self.off_axis_points(ctx, 20, 0.5, 8.0, rng)
        out += [
            RegisteredCheck("continuity u0", "probability current conservation", 1e-6,
                            partial(diffops_service.continuity_residual, _u(0), continuity_pts, HELICITIES[0])),
            RegisteredCheck("continuity real gauss", "probability current conservation", 1e-12,
                            partial(diffops_service.continuity_residual, _gaussian(), continuity_pts, HELICITIES[0])),
            RegisteredCheck("continuity u1/2", "probability current conservation", 1e-5,
                            partial(diffops_service.continuity_residual, _u(1), continuity_pts, HELICITIES[1])),
        ]
        return out


class FourierSuite(CheckSuite):
    """Half-line Fourier and Hilbert transforms on single rays."""

    name = "fourier"
    description = "cosine, sine, F+- and Hilbert transforms with their composition table"

    def _profile(self, fn, decay: DecayClass, extent=None) -> RayProfile:
        return RayProfile(direction=np.array(Z_AXIS), profile=fn, decay=decay, extent=extent)

    def _gauss_profile(self, power: int = 0) -> RayProfile:
        decay = DecayClass.gaussian(1.0)
        return self._profile(lambda t: t ** power * np.exp(-t ** 2 / 2.0), decay, decay.extent())

    def _cosine_gaussian(self, r: np.ndarray) -> Residual:
        out = ray_transform_service.fourier_ray(TransformKind.cosine, self._gauss_profile())(r)
        return relative_residual("Fc gauss", out, np.exp(-r ** 2 / 2.0))

    def _cosine_roundtrip(self, r: np.ndarray) -> Residual:
        decay = DecayClass.gaussian(1.0)
        p = self._profile(lambda t: (1.0 + t ** 2) * np.exp(-t ** 2 / 2.0), decay, decay.extent())
        once = ray_transform_service.fourier_ray(TransformKind.cosine, p)
        twice = ray_transform_service.fourier_ray(TransformKind.cosine, RayProfile(
            direction=p.direction, profile=once, decay=decay, extent=decay.extent()))
        return relative_residual("FcFc = 1", twice(r), p(r))

    def _sine_example(self, r: np.ndarray) -> Residual:
        out = ray_transform_service.fourier_ray(TransformKind.sine, self._gauss_profile(1))(r)
        return relative_residual("Fs t gauss", out, r * np.exp(-r ** 2 / 2.0))

    def _hilbert_examples(self, r: np.ndarray) -> Residual:
        decay = DecayClass.power_law(-1.0)
        even = ray_transform_service.hilbert_ray(Parity.even, self._profile(lambda t: 1.0 / (1.0 + t ** 2), decay))
        odd = ray_transform_service.hilbert_ray(Parity.odd, self._profile(lambda t: t / (1.0 + t ** 2), decay))
        return worst_of("Hilbert examples", [
            relative_residual("He 1/(1+t^2)", even(r), -r / (1.0 + r ** 2)),
            relative_residual("Ho t/(1+t^2)", odd(r), 1.0 / (1.0 + r ** 2)),
        ])

    def _generalized(self, r: np.ndarray) -> Residual:
        p = self._gauss_profile(2)
        plain = ray_transform_service.fourier_ray(TransformKind.cosine, p)(r)
        general = ray_transform_service.fourier_ray(TransformKind.cosine, p, generalized=True)(r)
        return relative_residual("generalized Fc = Fc", general, plain)

    def checks(self, ctx: SuiteContext) -> List[RegisteredCheck]:
        r = np.linspace(0.1, 5.0, ctx.count(12))
        decay = DecayClass.gaussian(1.0)
        smooth = self._profile(lambda t: (1.0 + t) * np.exp(-t ** 2 / 2.0), decay, decay.extent())
        return [
            RegisteredCheck("Fc gaussian", "self-reciprocal gaussian", 1e-8, partial(self._cosine_gaussian, r)),
            RegisteredCheck("Fc Fc = 1", "half-line transforms are involutions", 1e-8,
                            partial(self._cosine_roundtrip, r)),
            RegisteredCheck("Fs t gaussian", "sine transform oracle", 1e-8, partial(self._sine_example, r)),
            RegisteredCheck("Hilbert examples", "hilbert transforms of even and odd functions", 1e-6,
                            partial(self._hilbert_examples, r)),
            RegisteredCheck("composition table", "products of half-line transforms", 1e-6,
                            partial(ray_transform_service.compose_check, smooth, r)),
            RegisteredCheck("generalized cosine", "integration by parts without surface terms", 1e-6,
                            partial(self._generalized, r)),
        ]


class TransformSuite(CheckSuite):
    """V, U and their inverses, G and Z on fields, unitarity and intertwining."""

    name = "transforms"
    description = "field-level ray transforms and their identities"

    def _v_eigen(self, two_s: int, pts: np.ndarray) -> Residual:
        s = Helicity(two_s=two_s)
        lhs = ray_transform_service.apply_V(_u(two_s))(pts)
        return relative_residual(f"V u = w s={s}", lhs, eigenmode_service.eval_w(s, 1.0, pts))

    def _roundtrip(self, forward, backward, f: ScalarField, pts: np.ndarray, name: str) -> Residual:
        return relative_residual(name, backward(forward(f))(pts), f(pts))

    def _vinv_w(self, pts: np.ndarray) -> Residual:
        s = HELICITIES[1]
        lhs = ray_transform_service.apply_Vinv(eigenmode_service.w_field(s, 1.0))(pts)
        return relative_residual("V^-1 w = u s=1/2", lhs, _u(1)(pts))

    def _linearity(self, pts: np.ndarray) -> Residual:
        g1, g2 = gaussian_packet(1.0, (0, 0, 1)), gaussian_packet(0.8, center=(0.2, 0.0, 0.1))
        alpha = 0.3 - 1.1j
        lhs = ray_transform_service.apply_Vinv(add(scale(g1, alpha), g2))(pts)
        rhs = alpha * ray_transform_service.apply_Vinv(g1)(pts) + ray_transform_service.apply_Vinv(g2)(pts)
        return relative_residual("V^-1 linear", lhs, rhs)

    def _unitarity(self) -> Residual:
        phi = gaussian_packet(1.0, center=(0.0, 0.0, 0.5))
        psi = gaussian_packet(0.8, (0, 0, 1), center=(0.0, 0.0, 0.2))
        grid = SphericalGrid.axisymmetric(r_max=24.0, radial_panels=24, tail_panels=16, n_theta=32)
        lhs = eigenmode_service.inner_product(ray_transform_service.apply_V(phi), ray_transform_service.apply_V(psi),
                                              grid)
        rhs = eigenmode_service.inner_product(phi, psi, grid)
        return relative_residual("<V phi|V psi> = <phi|psi>", np.array([lhs]), np.array([rhs]))

    def _g_shift(self, pts: np.ndarray) -> Residual:
        f = gaussian_packet(1.0, (0, 1, 1), center=(0.1, 0.0, 0.0))
        rf = radial_power(f, 1.0)
        r = radius(pts)
        checks = []
        for sign, other in ((Sign.plus, Sign.minus), (Sign.minus, Sign.plus)):
            lhs = ray_transform_service.apply_G(sign, rf)(pts)
            rhs = r * (ray_transform_service.apply_G(other, f)(pts) + ray_transform_service.apply_Z(other, f)(pts))
            checks.append(relative_residual(f"G{sign.value}(r f)", lhs, rhs))
        return worst_of("G shift", checks)

    def _hilbert_inversion(self, pts: np.ndarray) -> Residual:
        f = _gaussian(0.9)
        lhs = inversion(ray_transform_service.apply_H_field(Parity.even, inversion(f), sandwich=True))(pts)
        rhs = ray_transform_service.apply_H_field(Parity.odd, f, sandwich=True)(pts)
        return relative_residual("N He' N = Ho'", lhs, rhs)

    def _z_examples(self) -> Residual:
        units = fibonacci_directions(8)
        odd = gaussian_packet(1.0, (0, 0, 1))
        even = gaussian_packet(1.0, (1, 1, 0))
        exp_r = radial(lambda r: np.exp(-r), DecayClass.exponential(1.0), label="e^-r")
        return worst_of("Z examples", [
            absolute_residual("Z+(sqrt(r) odd)", ray_transform_service.apply_Z(Sign.plus, odd, sandwich=True)(units)),
            absolute_residual("Z-(even)", ray_transform_service.apply_Z(Sign.minus, even)(units)),
            relative_residual("Z+ e^-r", ray_transform_service.apply_Z(Sign.plus, exp_r)(units),
                              np.full(len(units), 2.0 / math.pi)),
        ])

    def _parity_blocks(self, pts: np.ndarray) -> Residual:
        f = gaussian_packet(1.0, (1, 0, 0), center=(0.0, 0.3, 0.2))
        v = ray_transform_service.apply_V(f)(pts)
        u = ray_transform_service.apply_U("forward", f)(pts)
        minus = ray_transform_service.apply_ray_fourier(TransformKind.minus, f)(pts)
        plus_p = ray_transform_service.apply_ray_fourier(TransformKind.plus, parity(f))(pts)
        return worst_of("U, V parity blocks", [
            relative_residual("U + V = N F-", u + v, minus),
            relative_residual("U - V = N F+ P", u - v, plus_p),
        ])

    def checks(self, ctx: SuiteContext) -> List[RegisteredCheck]:
        rng = ctx.rng
        eigen_pts = self.off_axis_points(ctx, 20, 0.5, 5.0, rng)
        pts = self.off_axis_points(ctx, 6, 0.4, 2.5, rng)
        few = self.off_axis_points(ctx, 4, 0.5, 2.0, rng)
        packet = gaussian_packet(1.0, (1, 0, 1), center=(0.1, -0.2, 0.0))
        service = ray_transform_service
        out = [
            RegisteredCheck(f"V u = w s={s}", "quasi-plane waves", 1e-4, partial(self._v_eigen, s.two_s, eigen_pts))
            for s in HELICITIES
        ]
        out += [
            RegisteredCheck("V^-1 V = 1", "inverse pair", 1e-5,
                            partial(self._roundtrip, service.apply_V, service.apply_Vinv, packet, few, "V^-1 V")),
            RegisteredCheck("U^-1 U = 1", "inverse pair", 1e-5,
                            partial(self._roundtrip, partial(service.apply_U, "forward"),
                                    partial(service.apply_U, "inverse"), packet, few, "U^-1 U")),
            RegisteredCheck("V^-1 w = u", "quasi-plane waves", 1e-4, partial(self._vinv_w, few)),
            RegisteredCheck("V^-1 linearity", "linear operator", 1e-10, partial(self._linearity, pts)),
            RegisteredCheck("unitarity", "lorentz-invariant scalar product", 1e-6, self._unitarity),
            RegisteredCheck("G shift", "G and Z under multiplication by r", 1e-6, partial(self._g_shift, pts)),
            RegisteredCheck("inverted Hilbert", "inversion exchanges hilbert parities", 1e-6,
                            partial(self._hilbert_inversion, pts)),
            RegisteredCheck("Z examples", "boundary integrals", 1e-10, self._z_examples),
            RegisteredCheck("U V parity blocks", "parity blocks of U and V", 1e-6, partial(self._parity_blocks, pts)),
            RegisteredCheck("adjointness", "adjoint properties", 1e-6,
                            partial(service.check_adjoint, _gaussian(), packet, fibonacci_directions(3))),
            RegisteredCheck("rotation commutation", "rotations commute with V", 1e-5,
                            partial(service.check_rotation_commutes, packet, few)),
        ]
        return out


class EigenmodeSuite(CheckSuite):
    """Closed forms of u and w, the 1/r product and smeared orthogonality."""

    name = "eigenmodes"
    description = "phase factor, u and w closed forms, plane waves, packets"

    def _phase_examples(self, rng: np.random.Generator) -> Residual:
        pts = rng.normal(size=(64, 3))
        rhat = pts / radius(pts)[:, None]
        axis_phase = eigenmode_service.phase_factor(rhat, np.array(Z_AXIS))
        expected = (rhat[:, 0] + 1j * rhat[:, 1]) / np.hypot(rhat[:, 0], rhat[:, 1])
        khat = np.array([0.36, 0.48, 0.8])
        aligned = eigenmode_service.phase_factor(khat, khat)
        k_pts = rng.normal(size=(1000, 3))
        r_pts = rng.normal(size=(1000, 3))
        moduli = np.abs(eigenmode_service.phase_factor(r_pts / radius(r_pts)[:, None],
                                                       k_pts / radius(k_pts)[:, None]))
        return worst_of("phase factor", [
            absolute_residual("k along z", axis_phase - expected),
            absolute_residual("rhat = khat", np.array([aligned - np.exp(1j * math.atan2(0.48, 0.36))])),
            absolute_residual("unit modulus", moduli - 1.0),
        ])

    def _u_examples(self) -> Residual:
        mode0 = WaveMode(s=HELICITIES[0], k=Z_AXIS)
        z_zero = J0_FIRST_ZERO ** 2 / 4.0
        return worst_of("u examples", [
            absolute_residual("u0 origin", np.array([eigenmode_service.eval_u(mode0, (0.0, 0.0, 0.0)) - 1.0 / (4.0 * math.pi)])),
            absolute_residual("u0 Bessel zero", np.array([eigenmode_service.eval_u(mode0, (0.0, 0.0, z_zero))])),
            absolute_residual("u1/2 negative axis", np.array([
                eigenmode_service.eval_u(WaveMode(s=HELICITIES[1], k=Z_AXIS), (0.0, 0.0, -1.7))])),
        ])

    def _w_examples(self) -> Residual:
        origin = (0.0, 0.0, 0.0)
        return worst_of("w examples", [
            absolute_residual("w0 origin", np.array([eigenmode_service.eval_w(HELICITIES[0], 1.0, origin) + 1j / (8.0 * math.pi)])),
            absolute_residual("|w1/2| on axis", np.array([
                abs(eigenmode_service.eval_w(HELICITIES[1], 1.0, (0.0, 0.0, 2.0), azimuthal=False))
                - 1.0 / (4.0 * math.pi ** 1.5)])),
            absolute_residual("w1 origin", np.array([eigenmode_service.eval_w(HELICITIES[2], 1.0, origin, azimuthal=False)])),
        ])

    def _w_half(self, pts: np.ndarray) -> Residual:
        general = eigenmode_service.eval_w(HELICITIES[1], 1.3, pts)
        return relative_residual("w1/2 special = general", eigenmode_service.eval_w_half(1.3, pts), general)

    def _w_potential(self, pts: np.ndarray) -> Residual:
        return worst_of("w from potential", [
            relative_residual(f"potential s={s}", eigenmode_service.eval_w_potential(s, 1.0, pts),
                              eigenmode_service.eval_w(s, 1.0, pts))
            for s in HELICITIES
        ])

    def _slopes(self) -> Residual:
        z = np.linspace(1.0, 40.0, 4000)
        slopes = [eigenmode_service.plane_wave_slope(HELICITIES[1], k, z) - k for k in (0.5, 1.0, 2.0)]
        return absolute_residual("plane-wave slope", np.array(slopes))

    def _growth(self) -> Residual:
        """Relative rise of sup |w| / sqrt(r) from one decade of r to the next; zero while bounded."""
        direction = (0.3, 0.4, math.sqrt(0.75))
        decades = ((1e3, 1e4), (1e4, 1e5))
        details, rises = {}, []
        for s in HELICITIES:
            sups = [eigenmode_service.growth_ratio(s, 1.0, direction, np.geomspace(lo, hi, 4000))
                    for lo, hi in decades]
            for (lo, hi), sup in zip(decades, sups):
                details[f"sup |w|/sqrt(r) s={s} r in [{lo:g}, {hi:g}]"] = sup
            rises.extend(max(0.0, later / earlier - 1.0) for earlier, later in zip(sups, sups[1:]))
        return Residual(name="|w| <= C sqrt(r)", max_residual=max(rises), max_abs=max(details.values()), scale=1.0,
                        n_points=len(details) * 4000, details=details)

    def _products(self) -> Residual:
        g = _gaussian()
        norm = eigenmode_service.inner_product(g, g)
        cross = eigenmode_service.inner_product(gaussian_packet(1.0, (1, 1, 0)), gaussian_packet(0.8, (0, 0, 1)))
        return worst_of("inner products", [
            relative_residual("<g|g> = 2 pi", np.array([norm]), np.array([2.0 * math.pi])),
            absolute_residual("even-odd", np.array([cross])),
        ])

    def _overlap_same(self) -> Residual:
        r_value, k_value = eigenmode_service.packet_overlap(HELICITIES[0], Z_AXIS, Z_AXIS, 0.2)
        return relative_residual("overlap matches k space", np.array([r_value]), np.array([k_value]))

    def _overlap_apart(self) -> Residual:
        r_value, _ = eigenmode_service.packet_overlap(HELICITIES[0], Z_AXIS, (0.0, 0.0, 5.0), 0.2)
        return absolute_residual("separated overlap", np.array([r_value]))

    def _overlap_swap(self) -> Residual:
        c1, c2 = (0.0, 0.0, 1.0), (0.0, 0.0, 1.2)
        grid = eigenmode_service.packet_grid([np.array(c1), np.array(c2)], 0.2)
        forward, _ = eigenmode_service.packet_overlap(HELICITIES[0], c1, c2, 0.2, grid)
        backward, _ = eigenmode_service.packet_overlap(HELICITIES[0], c2, c1, 0.2, grid)
        return relative_residual("swap conjugates", np.array([forward]), np.array([np.conj(backward)]))

    def _planar(self) -> Residual:
        request = GridRequest(s=HELICITIES[0], k=1.0, extent=40.0, n=256, quantity=Quantity.phase)
        deviation, _ = grid_service.wavefront_deviation(request)
        return absolute_residual("wavefront deviation (wavelengths)", np.array([deviation]))

    def checks(self, ctx: SuiteContext) -> List[RegisteredCheck]:
        rng = ctx.rng
        pts = self.off_axis_points(ctx, 20, 0.5, 10.0, rng)
        return [
            RegisteredCheck("phase factor", "angular phase", 1e-12, partial(self._phase_examples, rng)),
            RegisteredCheck("u examples", "translation eigenfunctions", 1e-14, self._u_examples),
            RegisteredCheck("w examples", "quasi-plane waves", 1e-13, self._w_examples),
            RegisteredCheck("w1/2 special form", "unidirectional wave", 1e-12, partial(self._w_half, pts)),
            RegisteredCheck("w from potential", "quasi-plane waves", 1e-7, partial(self._w_potential, pts)),
            RegisteredCheck("plane-wave slope", "unidirectional wave", 1e-6, self._slopes),
            RegisteredCheck("growth bound |w| <= C sqrt(r)", "growth of order sqrt(r)", 0.1, self._growth),
            RegisteredCheck("inner products", "lorentz-invariant scalar product", 1e-10, self._products),
            RegisteredCheck("packet overlap", "orthogonality relation", 1e-3, self._overlap_same),
            RegisteredCheck("separated packets", "orthogonality relation", 1e-6, self._overlap_apart),
            RegisteredCheck("overlap symmetry", "inner-product symmetry", 1e-10, self._overlap_swap),
            RegisteredCheck("planar wavefronts", "planar wave fronts", 0.05, self._planar),
        ]


class PositionSuite(CheckSuite):
    """The null position four-vector on parity-odd Gaussian packets."""

    name = "position"
    description = "r0 forms, boundary condition, K-bar commutators and the null property"

    def _boundary(self, fields) -> Residual:
        return absolute_residual("boundary residual", np.array([position_service.boundary_residual(f) for f in fields]))

    def _violating(self) -> Residual:
        f = _gaussian()
        moment = 2.0 / math.pi * 2.0 ** -0.25 * special.gamma(0.75)
        return relative_residual("violating gaussian", np.array([position_service.boundary_residual(f)]),
                                 np.array([moment]))

    def _sweep(self, pts: np.ndarray) -> Residual:
        samples = position_service.violation_sweep(gaussian_packet(1.0, (0, 0, 1)), _gaussian(),
                                                   (1e-3, 1e-2, 1e-1), pts)
        gaps = [s.form_gap for s in samples]
        mismatch = [abs(s.form_gap - s.predicted_gap) / s.predicted_gap for s in samples]
        monotone = all(a < b for a, b in zip(gaps, gaps[1:]))
        worst = max(mismatch) if monotone else float("inf")
        return Residual(name="violation sweep", max_residual=worst, max_abs=max(gaps), scale=1.0,
                        n_points=len(samples) * len(pts),
                        details={f"eps={s.eps:g}": s.form_gap for s in samples})

    def _each(self, name: str, check, fields, pts: np.ndarray) -> Residual:
        return worst_of(name, [check(f, pts) for f in fields])

    def checks(self, ctx: SuiteContext) -> List[RegisteredCheck]:
        rng = ctx.rng
        pts = self.off_axis_points(ctx, 6, 0.4, 2.0, rng)
        few = self.off_axis_points(ctx, 3, 0.5, 1.5, rng)
        compliant = odd_packets()
        zero_moment = radial(lambda r: np.exp(-r) * (1.0 - 2.0 * r / 3.0), DecayClass.exponential(1.0),
                             label="e^-r(1 - 2r/3)")
        config = PositionCheckConfig(test_fields=list(compliant), pts=[tuple(p) for p in few], tol=1e-4)
        return [
            RegisteredCheck("boundary compliant", "boundary condition on the wavefunction", 1e-8,
                            partial(self._boundary, compliant)),
            RegisteredCheck("boundary zero moment", "boundary condition on the wavefunction", 1e-8,
                            partial(self._boundary, [zero_moment])),
            RegisteredCheck("boundary violating", "boundary condition on the wavefunction", 1e-8, self._violating),
            RegisteredCheck("even moment", "even fields and the boundary condition", 1e-8,
                            partial(position_service.check_even_moment, _gaussian())),
            RegisteredCheck("boost-position", "transformed boost and position", config.tol,
                            partial(position_service.check_boost_position, config.test_fields, config.points)),
            RegisteredCheck("K-bar forms", "transformed boost operator", 1e-4,
                            partial(self._each, "K-bar forms", position_service.check_kbar_forms, compliant, few)),
            RegisteredCheck("null position", "null four-vector", 1e-5,
                            partial(self._each, "null position", position_service.check_null_position, compliant, pts)),
            RegisteredCheck("r0 commutes", "position components commute", 1e-5,
                            partial(self._each, "r0 commutes", position_service.check_r0_commutes, compliant, pts)),
            RegisteredCheck("unitary sandwich", "two equivalent forms for r0", 1e-5, partial(
                self._each, "unitary sandwich", position_service.check_unitary_sandwich, compliant, pts)),
            RegisteredCheck("violation sweep", "boundary condition on the wavefunction", 1e-3,
                            partial(self._sweep, pts)),
        ]


SUITES = (AlgebraSuite, GeneratorSuite, FourierSuite, TransformSuite, EigenmodeSuite, PositionSuite)
