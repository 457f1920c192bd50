# ABOUTME: Data models for Bessel orders, helicities, wave modes, quadrature and check reports
# ABOUTME: Defines the value types and vocabularies shared by operators, suites and the CLI

import math
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config import settings


class TransformKind(str, Enum):
    cosine = "Cosine"
    sine = "Sine"
    plus = "Plus"
    minus = "Minus"


class GeneratorId(str, Enum):
    A0 = "A0"
    A1 = "A1"
    A2 = "A2"
    A3 = "A3"
    K1 = "K1"
    K2 = "K2"
    K3 = "K3"
    J1 = "J1"
    J2 = "J2"
    J3 = "J3"


class SingularSet(str, Enum):
    none = "none"
    origin = "origin"
    positive_z_axis = "positive_z_axis"
    negative_z_axis = "negative_z_axis"
    full_z_axis = "full_z_axis"


class DecayKind(str, Enum):
    gaussian = "gaussian"
    exponential = "exponential"
    power_law = "power_law"
    oscillatory_bessel = "oscillatory_bessel"


class TolProfile(str, Enum):
    strict = "strict"
    default = "default"
    fast = "fast"


class Plane(str, Enum):
    xz = "xz"
    xy = "xy"


class Quantity(str, Enum):
    re = "re"
    im = "im"
    abs = "abs"
    phase = "phase"


class Direction(str, Enum):
    forward = "forward"
    inverse = "inverse"


class Sign(str, Enum):
    plus = "plus"
    minus = "minus"


class Parity(str, Enum):
    even = "even"
    odd = "odd"


class R0Form(str, Enum):
    left = "left"
    right = "right"


class CheckStatus(str, Enum):
    passed = "pass"
    failed = "fail"
    skipped = "skipped"


class BesselOrder(BaseModel):
    model_config = ConfigDict(frozen=True)

    two_nu: int

    @field_validator("two_nu")
    @classmethod
    def validate_two_nu(cls, v: int) -> int:
        if abs(v) > 100:
            raise ValueError("Bessel orders are limited to |nu| <= 50")
        return v

    @property
    def nu(self) -> float:
        return self.two_nu / 2.0

    @property
    def is_integer(self) -> bool:
        return self.two_nu % 2 == 0


class Helicity(BaseModel):
    model_config = ConfigDict(frozen=True)

    two_s: int

    @field_validator("two_s")
    @classmethod
    def validate_two_s(cls, v: int) -> int:
        if abs(v) > 4:
            raise ValueError("helicity must satisfy |s| <= 2")
        return v

    @classmethod
    def of(cls, s: float) -> "Helicity":
        return cls(two_s=int(round(2 * s)))

    @property
    def s(self) -> float:
        return self.two_s / 2.0

    def __str__(self) -> str:
        return f"{self.two_s}/2" if self.two_s % 2 else str(self.two_s // 2)


class DecayClass(BaseModel):
    """How a field behaves at large r; selects the ray quadrature path."""

    model_config = ConfigDict(frozen=True)

    kind: DecayKind
    scale: float = 1.0
    exponent: float = 0.0

    @classmethod
    def gaussian(cls, scale: float) -> "DecayClass":
        return cls(kind=DecayKind.gaussian, scale=scale)

    @classmethod
    def exponential(cls, scale: float) -> "DecayClass":
        return cls(kind=DecayKind.exponential, scale=scale)

    @classmethod
    def power_law(cls, exponent: float, scale: float = 1.0) -> "DecayClass":
        return cls(kind=DecayKind.power_law, exponent=exponent, scale=scale)

    @classmethod
    def oscillatory_bessel(cls, exponent: float = -0.25, scale: float = 1.0) -> "DecayClass":
        """Bessel-type oscillation e^{+-i k r} with envelope r**exponent; `scale` is the wavenumber k."""
        return cls(kind=DecayKind.oscillatory_bessel, exponent=exponent, scale=scale)

    @property
    def is_localized(self) -> bool:
        return self.kind in (DecayKind.gaussian, DecayKind.exponential)

    def extent(self) -> Optional[float]:
        """Radius beyond which a localized field is negligible at double precision."""
        if self.kind == DecayKind.gaussian:
            return 12.0 * self.scale
        if self.kind == DecayKind.exponential:
            return 45.0 * self.scale
        return None

    def slowest(self, other: "DecayClass") -> "DecayClass":
        rank = {DecayKind.gaussian: 0, DecayKind.exponential: 1, DecayKind.power_law: 2, DecayKind.oscillatory_bessel: 3}
        if rank[self.kind] != rank[other.kind]:
            return self if rank[self.kind] > rank[other.kind] else other
        return DecayClass(
            kind=self.kind,
            scale=max(self.scale, other.scale),
            exponent=max(self.exponent, other.exponent),
        )


class WaveMode(BaseModel):
    model_config = ConfigDict(frozen=True)

    s: Helicity
    k: Tuple[float, float, float]

    @field_validator("k")
    @classmethod
    def validate_k(cls, v: Tuple[float, float, float]) -> Tuple[float, float, float]:
        if not all(math.isfinite(c) for c in v) or math.hypot(*v) <= 0.0:
            raise ValueError("wave vector must be finite and nonzero")
        return v

    @property
    def k0(self) -> float:
        return math.hypot(*self.k)

    @property
    def k_vector(self) -> np.ndarray:
        return np.asarray(self.k, dtype=float)

    @property
    def khat(self) -> np.ndarray:
        return self.k_vector / self.k0

    @property
    def along_z(self) -> bool:
        return self.k[0] == 0.0 and self.k[1] == 0.0 and self.k[2] > 0.0

    @property
    def four_vector(self) -> Tuple[float, float, float, float]:
        return (self.k0, *self.k)


class ParabolicCoords(BaseModel):
    model_config = ConfigDict(frozen=True)

    lam: float = Field(ge=0.0)
    mu: float = Field(ge=0.0)

    @classmethod
    def from_point(cls, x: float, y: float, z: float) -> "ParabolicCoords":
        r = math.sqrt(x * x + y * y + z * z)
        rho2 = x * x + y * y
        # the smaller of r +- z is recomputed from rho^2 to avoid cancellation
        if z >= 0.0:
            lam = 0.5 * (r + z)
            mu = rho2 / (4.0 * lam) if lam > 0.0 else 0.0
        else:
            mu = 0.5 * (r - z)
            lam = rho2 / (4.0 * mu) if mu > 0.0 else 0.0
        return cls(lam=lam, mu=mu)


class QuadratureSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    u_max: float = Field(default_factory=lambda: settings.QUAD_U_MAX)
    panels: int = Field(default_factory=lambda: settings.QUAD_PANELS)
    tail_terms: int = Field(default_factory=lambda: settings.QUAD_TAIL_TERMS)
    pv_gap: float = Field(default_factory=lambda: settings.QUAD_PV_GAP)
    tolerance: float = Field(default_factory=lambda: settings.QUAD_TOLERANCE)
    max_doublings: int = Field(default_factory=lambda: settings.QUAD_MAX_DOUBLINGS)
    nodes: int = 8

    @field_validator("u_max")
    @classmethod
    def validate_u_max(cls, v: float) -> float:
        if v < 50.0:
            raise ValueError("u_max must be at least 50")
        return v

    @field_validator("panels")
    @classmethod
    def validate_panels(cls, v: int) -> int:
        if v < 64:
            raise ValueError("panels must be at least 64")
        return v

    @field_validator("pv_gap")
    @classmethod
    def validate_pv_gap(cls, v: float) -> float:
        if not 0.0 < v <= 1e-3:
            raise ValueError("pv_gap must lie in (0, 1e-3]")
        return v

    @field_validator("tail_terms", "nodes")
    @classmethod
    def validate_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be positive")
        return v

    @classmethod
    def default(cls) -> "QuadratureSpec":
        return cls()

    def doubled(self) -> "QuadratureSpec":
        return self.model_copy(update={"u_max": 2.0 * self.u_max, "panels": 2 * self.panels})


class SphericalGrid(BaseModel):
    """Tensor-product grid for the 1/r inner product."""

    model_config = ConfigDict(frozen=True)

    r_max: float = Field(default=24.0, gt=0.0)
    radial_panels: int = Field(default=24, ge=1)
    radial_nodes: int = Field(default=8, ge=2)
    tail_panels: int = Field(default=8, ge=0)
    n_theta: int = Field(default=24, ge=2)
    n_phi: int = Field(default=16, ge=1)
    grading: float = Field(default=1.0, ge=1.0)
    parabolic: bool = False

    @classmethod
    def axisymmetric(cls, **overrides) -> "SphericalGrid":
        return cls(n_phi=1, **overrides)


class Residual(BaseModel):
    """Outcome of one numerical identity evaluated over a point set."""

    name: str
    max_residual: float
    max_abs: float
    scale: float
    n_points: int
    details: Dict[str, float] = {}

    def within(self, tolerance: float) -> bool:
        return bool(np.isfinite(self.max_residual)) and self.max_residual <= tolerance


class PositionCheckConfig(BaseModel):
    """Test fields and points for the position four-vector checks."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    test_fields: List[Any]
    pts: List[Tuple[float, float, float]]
    tol: float = Field(gt=0.0)

    @field_validator("test_fields")
    @classmethod
    def validate_fields(cls, v: List[Any]) -> List[Any]:
        if not v:
            raise ValueError("at least one test field is required")
        untagged = [getattr(f, "label", "?") for f in v if getattr(f, "parity", None) is None]
        if untagged:
            raise ValueError(f"test fields need a parity class: {', '.join(untagged)}")
        return v

    @property
    def points(self) -> np.ndarray:
        return np.asarray(self.pts, dtype=float)


class ViolationSample(BaseModel):
    """Left/right r0 mismatch for a field that breaks the boundary condition by `eps`."""

    eps: float
    boundary: float
    form_gap: float
    predicted_gap: float


class GridRequest(BaseModel):
    s: Helicity
    k: float = Field(gt=0.0)
    plane: Plane = Plane.xz
    extent: float = Field(default=40.0, gt=0.0)
    n: int = Field(default=256, ge=16)
    quantity: Quantity = Quantity.re
    output_path: str = "grid.csv"


class SuiteConfig(BaseModel):
    suites: List[str] = ["all"]
    tol_profile: TolProfile = Field(default_factory=lambda: TolProfile(settings.TOL_PROFILE))
    seed: int = Field(default_factory=lambda: settings.SEED)
    output_path: str = "reports/check_report.json"
    workers: int = Field(default_factory=lambda: settings.WORKERS, ge=1)

    @model_validator(mode="after")
    def validate_suites(self) -> "SuiteConfig":
        if not self.suites:
            raise ValueError("at least one suite must be selected")
        return self


class CheckRecord(BaseModel):
    name: str
    suite: str
    anchor: str
    max_residual: Optional[float] = None
    tolerance: float
    n_points: int = 0
    wall_time_ms: float = 0.0
    status: CheckStatus
    detail: Optional[str] = None


class CheckSummary(BaseModel):
    passed: int = 0
    failed: int = 0
    skipped: int = 0


class CheckReport(BaseModel):
    suites: List[str]
    tol_profile: TolProfile
    seed: int
    records: List[CheckRecord] = []
    summary: CheckSummary = CheckSummary()

    @property
    def ok(self) -> bool:
        return self.summary.failed == 0
