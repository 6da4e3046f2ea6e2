from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from app.exceptions import StructuralError
from app.models.enums import LaplaceKind
from app.models.shadowing import ShadowedPattern


@dataclass
class LaplaceCurve:
    """Laplace transform values over an s-grid with their provenance.

    For ``ANALYTIC`` curves ``errors`` holds the quadrature tolerance per point, for
    ``EMPIRICAL`` curves the Monte Carlo standard error.
    """

    s_grid: np.ndarray
    values: np.ndarray
    kind: LaplaceKind
    errors: np.ndarray
    replications: int = 0

    def __post_init__(self):
        self.s_grid = np.asarray(self.s_grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        self.errors = np.broadcast_to(np.asarray(self.errors, dtype=float), self.s_grid.shape).copy()
        if self.s_grid.shape != self.values.shape:
            raise StructuralError("s_grid and values must have the same length")

    def at(self, s: float) -> float:
        """Value at ``s``; grid points are exact, others log-linearly interpolated."""
        hits = np.flatnonzero(np.isclose(self.s_grid, s, rtol=1e-12, atol=0.0))
        if len(hits):
            return float(self.values[hits[0]])
        if s < self.s_grid.min() or s > self.s_grid.max():
            raise StructuralError(f"s={s} lies outside the curve's grid")
        logv = np.log(np.clip(self.values, 1e-300, None))
        return float(np.exp(np.interp(s, self.s_grid, logv)))

    def error_at(self, s: float) -> float:
        return float(np.interp(s, self.s_grid, self.errors))


@dataclass(frozen=True)
class MomentPair:
    mean: float
    variance: float
    error: float = 0.0


@dataclass(frozen=True)
class MetricEstimate:
    value: float
    stderr: float
    replications: int

    def __post_init__(self):
        if self.stderr < 0:
            raise StructuralError("stderr must be non-negative")


@dataclass
class InterferenceSample:
    value: float
    shadowed: ShadowedPattern
    fading: np.ndarray
    included: np.ndarray


@dataclass
class DelayTail:
    """P[L > n] for n = 1..n_max averaged over frozen patterns."""

    n_grid: np.ndarray
    tail: np.ndarray
    stderr: np.ndarray
    censored_mass: float
    mean_delay: MetricEstimate
    mean_delay_divergent: bool
    patterns: int


@dataclass(frozen=True)
class OrderingReport:
    holds: bool
    worst_violation: float
    tolerance: np.ndarray = field(default_factory=lambda: np.zeros(0))


@dataclass(frozen=True)
class RicianCoverage:
    """Coverage under a Rician serving link via the Marcum-Q route and the series route."""

    direct: MetricEstimate
    series: MetricEstimate
    series_remainder: float
    series_converged: bool
    terms: int
    kappa: float
    note: Optional[str] = None
