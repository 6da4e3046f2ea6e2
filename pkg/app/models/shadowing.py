from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import stats

from app.exceptions import ParameterError, StructuralError
from app.models.enums import CorrelationMode
from app.models.geometry import PointPattern


@dataclass(frozen=True)
class PoissonLogAttenuation:
    """Law of T = K**r with r ~ Poisson(mu)."""

    K: float
    mu: float

    def __post_init__(self):
        if not 0 < self.K <= 1:
            raise ParameterError(f"attenuation factor K must lie in (0, 1], got {self.K}")
        if self.mu < 0:
            raise ParameterError(f"Poisson mean must be non-negative, got {self.mu}")

    @property
    def mean(self) -> float:
        return float(np.exp(-self.mu * (1.0 - self.K)))

    @property
    def second_moment(self) -> float:
        return float(np.exp(-self.mu * (1.0 - self.K ** 2)))

    @property
    def variance(self) -> float:
        return max(self.second_moment - self.mean ** 2, 0.0)

    def support(self, eps_tail: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
        """Obstacle counts r and their probabilities, cut where the remaining mass < eps_tail."""
        if self.mu == 0 or self.K == 1:
            return np.zeros(1, dtype=np.int64), np.ones(1)
        lo = int(stats.poisson.ppf(eps_tail / 2, self.mu))
        hi = int(stats.poisson.isf(eps_tail / 2, self.mu)) + 1
        r = np.arange(max(lo, 0), hi + 1, dtype=np.int64)
        return r, stats.poisson.pmf(r, self.mu)

    def values(self, eps_tail: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
        r, p = self.support(eps_tail)
        return self.K ** r.astype(float), p


@dataclass
class ShadowedPattern:
    """PointPattern with an attenuation and a shadowing-cell label per point."""

    pattern: PointPattern
    attenuation: np.ndarray
    cell_labels: np.ndarray
    mode: CorrelationMode
    obstacle_counts: Optional[np.ndarray] = None

    def __post_init__(self):
        self.attenuation = np.asarray(self.attenuation, dtype=float)
        if len(self.attenuation) != len(self.pattern):
            raise StructuralError("one attenuation value per point is required")
        if len(self.cell_labels) != len(self.pattern):
            raise StructuralError("one cell label per point is required")

    def __len__(self) -> int:
        return len(self.pattern)

    @property
    def distances(self) -> np.ndarray:
        return self.pattern.distances
