# ABOUTME: Abstract base class for verification suites
# ABOUTME: Defines the registered-check interface plus shared tolerance and point-sampling logic

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from app.models import Residual, SingularSet, TolProfile
from app.utils.fields import axis_mask, radius

PROFILE_FACTOR = {TolProfile.strict: 1.0, TolProfile.default: 3.0, TolProfile.fast: 10.0}


@dataclass(frozen=True)
class RegisteredCheck:
    """One named numerical identity with its strict tolerance."""

    name: str
    anchor: str
    tolerance: float
    run: Callable[[], Residual]


@dataclass(frozen=True)
class SuiteContext:
    profile: TolProfile
    seed: int
    suite_index: int = 0

    @property
    def rng(self) -> np.random.Generator:
        return np.random.default_rng([self.seed, self.suite_index])

    def count(self, n: int) -> int:
        """Point count under the profile: a quarter (at least 2) for fast runs."""
        return max(2, n // 4) if self.profile == TolProfile.fast else n


class CheckSuite(ABC):
    """Abstract base class for verification suites."""

    name: str = ""
    description: str = ""

    @abstractmethod
    def checks(self, ctx: SuiteContext) -> List[RegisteredCheck]:
        """Build the suite's checks; nothing is evaluated until `run` is called."""
        pass

    def tolerance(self, check: RegisteredCheck, profile: TolProfile) -> float:
        return check.tolerance * PROFILE_FACTOR[TolProfile(profile)]

    def off_axis_points(self, ctx: SuiteContext, n: int, r_min: float = 0.3, r_max: float = 10.0,
                        rng: Optional[np.random.Generator] = None) -> np.ndarray:
        """Random points with |r| in [r_min, r_max], kept away from the z axis."""
        rng = rng or ctx.rng
        count = ctx.count(n)
        out = np.empty((0, 3))
        while len(out) < count:
            direction = rng.normal(size=(2 * count, 3))
            direction /= radius(direction)[:, None]
            r = rng.uniform(r_min, r_max, size=(2 * count, 1))
            pts = r * direction
            # stay well outside the exclusion tube so finite-difference probes do too
            keep = ~axis_mask(pts, SingularSet.full_z_axis, tube=0.2)
            out = np.concatenate([out, pts[keep]])
        return out[:count]
