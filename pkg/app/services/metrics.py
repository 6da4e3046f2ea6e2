"""User metrics: coverage, Shannon throughput and local delay.

Аргумент преобразования Лапласа везде s = θ·d_link^α, шумовой множитель exp(-θ·d_link^α·N).
"""

import logging
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy import integrate, special, stats

from app.exceptions import DivergenceError, ParameterError
from app.models.results import DelayTail, LaplaceCurve, MetricEstimate, RicianCoverage
from app.schemas.scenario import LinkModel, Scenario
from app.services.simulate import sample_success_probabilities

logger = logging.getLogger(__name__)

DEFAULT_N_MAX = 100
DEFAULT_SERIES_TERMS = 40
SERIES_TOL = 1e-6
ASYMPTOTIC_SWITCH = 50.0

LaplaceEvaluator = Union[Callable[[float], float], LaplaceCurve]


def _estimate(values: np.ndarray) -> MetricEstimate:
    values = np.asarray(values, dtype=float)
    n = len(values)
    stderr = float(values.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    return MetricEstimate(value=float(values.mean()), stderr=stderr if np.isfinite(stderr) else 0.0, replications=n)


def _laplace_at(laplace: LaplaceEvaluator, s: float) -> float:
    if isinstance(laplace, LaplaceCurve):
        return laplace.at(s)
    return float(laplace(s))


def _check_theta(theta: float) -> None:
    if not theta > 0:
        raise ParameterError(f"SINR threshold must be positive, got {theta}")


def db_to_linear(theta_db):
    return 10.0 ** (np.asarray(theta_db, dtype=float) / 10.0)


# ========== ПОКРЫТИЕ ==========

def coverage_rayleigh(laplace: LaplaceEvaluator, theta: float, link: LinkModel, noise: float, alpha: float) -> float:
    """P[SINR > θ] = exp(-θ d^α N)·L(θ d^α) for a Rayleigh serving link."""
    _check_theta(theta)
    s = theta * link.d_link ** alpha
    return float(np.exp(-s * noise) * _laplace_at(laplace, s))


def coverage_samples(interference: np.ndarray, theta: float, link: LinkModel, noise: float, alpha: float) -> np.ndarray:
    """Per-sample conditional coverage e^{-θ d^α (N+I)}."""
    _check_theta(theta)
    s = theta * link.d_link ** alpha
    return np.exp(-s * (noise + np.asarray(interference, dtype=float)))


def coverage_from_samples(
    interference: np.ndarray, thetas: Sequence[float], link: LinkModel, noise: float, alpha: float,
) -> list[MetricEstimate]:
    """Rayleigh coverage with the serving fading integrated out per interference sample."""
    return [_estimate(coverage_samples(interference, theta, link, noise, alpha)) for theta in thetas]


def coverage_rician(
    interference: np.ndarray,
    theta: float,
    link: LinkModel,
    noise: float,
    alpha: float,
    n_max_series: int = DEFAULT_SERIES_TERMS,
    series_tol: float = SERIES_TOL,
) -> RicianCoverage:
    """Coverage under a unit-mean Rician serving link, by two independent routes.

    The direct route averages the noncentral chi-square tail (Marcum Q) over the samples.
    The series route sums Poisson(κ)-weighted derivatives of the transform of N+I,
    which per sample collapse to Poisson CDFs.
    """
    _check_theta(theta)
    kappa = link.kappa
    x = noise + np.asarray(interference, dtype=float)
    s = (1.0 + kappa) * theta * link.d_link ** alpha

    if kappa == 0:
        direct_values = np.exp(-s * x)
    else:
        direct_values = stats.ncx2.sf(2.0 * s * x, df=2, nc=2.0 * kappa)

    n = np.arange(n_max_series + 1)
    weights = stats.poisson.pmf(n, kappa) if kappa > 0 else (n == 0).astype(float)
    series_values = special.pdtr(n[None, :], s * x[:, None]) @ weights
    remainder = float(stats.poisson.sf(n_max_series, kappa)) if kappa > 0 else 0.0

    converged = remainder <= series_tol
    note = None
    if not converged:
        note = f"series truncated at {n_max_series} terms with remainder {remainder:.2e}"
        logger.warning(f"Rician series did not converge: {note}")
    return RicianCoverage(
        direct=_estimate(direct_values),
        series=_estimate(series_values),
        series_remainder=remainder,
        series_converged=converged,
        terms=n_max_series + 1,
        kappa=kappa,
        note=note,
    )


# ========== ПРОПУСКНАЯ СПОСОБНОСТЬ ==========

def _scaled_exp1(x: np.ndarray) -> np.ndarray:
    """e^x·E1(x); для больших x асимптотический ряд, чтобы избежать переполнения."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x < ASYMPTOTIC_SWITCH
    with np.errstate(over="ignore", invalid="ignore"):
        out[small] = np.exp(x[small]) * special.exp1(x[small])
    big = x[~small]
    inv = 1.0 / big
    out[~small] = inv * (1.0 - inv + 2.0 * inv ** 2 - 6.0 * inv ** 3 + 24.0 * inv ** 4 - 120.0 * inv ** 5)
    return out


def throughput_samples(interference: np.ndarray, link: LinkModel, noise: float, alpha: float) -> np.ndarray:
    """E[log2(1 + SINR) | I] per sample: e^x·E1(x)/ln 2 with x = d^α(N+I); inf where x = 0."""
    x = link.d_link ** alpha * (noise + np.asarray(interference, dtype=float))
    out = np.full_like(x, np.inf)
    positive = x > 0
    out[positive] = _scaled_exp1(x[positive]) / np.log(2.0)
    return out


def shannon_throughput(interference: np.ndarray, link: LinkModel, noise: float, alpha: float) -> MetricEstimate:
    """E[log2(1 + SINR)] in bits/s/Hz, Rayleigh serving fading integrated out exactly."""
    values = throughput_samples(interference, link, noise, alpha)
    if not np.all(np.isfinite(values)):
        logger.warning("Throughput is infinite for samples with zero noise and zero interference")
        return MetricEstimate(value=float("inf"), stderr=0.0, replications=len(values))
    return _estimate(values)


def shannon_throughput_analytic(laplace: LaplaceEvaluator, link: LinkModel, noise: float, alpha: float) -> float:
    """(1/ln 2)·∫_0^∞ e^{-t d^α N}·L(t d^α)/(1+t) dt."""
    scale = link.d_link ** alpha
    value, _ = integrate.quad(
        lambda t: np.exp(-t * scale * noise) * _laplace_at(laplace, t * scale) / (1.0 + t),
        0.0, np.inf, limit=200,
    )
    if not np.isfinite(value):
        raise DivergenceError("throughput integral diverges")
    return float(value / np.log(2.0))


# ========== ЛОКАЛЬНАЯ ЗАДЕРЖКА ==========

def hill_tail_index(values: np.ndarray, fraction: float = 0.02) -> float:
    """Hill estimate of the tail index from the largest order statistics."""
    values = np.sort(np.asarray(values, dtype=float))[::-1]
    values = values[np.isfinite(values) & (values > 0)]
    k = max(10, int(len(values) * fraction))
    if len(values) <= k:
        return np.inf
    logs = np.log(values[:k]) - np.log(values[k])
    mean_log = float(logs.mean())
    return np.inf if mean_log <= 0 else 1.0 / mean_log


def delay_tail_from_probs(
    success: np.ndarray, n_max: int = DEFAULT_N_MAX, infinite_mean: bool = False,
) -> DelayTail:
    """P[L > n] = E[(1-p)^n] over frozen patterns with per-pattern success probability p."""
    p = np.clip(np.asarray(success, dtype=float), 0.0, 1.0)
    n_grid = np.arange(1, n_max + 1)
    per_pattern = np.power.outer(1.0 - p, n_grid)
    tail = per_pattern.mean(axis=0)
    stderr = per_pattern.std(axis=0, ddof=1) / np.sqrt(len(p)) if len(p) > 1 else np.zeros(n_max)

    with np.errstate(divide="ignore"):
        inverse = 1.0 / p
    index = hill_tail_index(inverse)
    divergent = infinite_mean or not np.all(np.isfinite(inverse)) or index <= 1.0
    if divergent or index <= 2.0:
        logger.warning(f"Heavy-tailed local delay: tail index {index:.2f}, mean flagged divergent={divergent}")
    return DelayTail(
        n_grid=n_grid,
        tail=np.minimum.accumulate(tail),
        stderr=stderr,
        censored_mass=float(tail[-1]),
        mean_delay=_estimate(inverse) if np.all(np.isfinite(inverse)) else MetricEstimate(np.inf, 0.0, len(p)),
        mean_delay_divergent=bool(divergent),
        patterns=len(p),
    )


def local_delay_tail(
    scenario: Scenario,
    theta: float,
    n_max: int = DEFAULT_N_MAX,
    n_patterns: int = 10_000,
    seed: int = 0,
    threads: Optional[int] = None,
) -> DelayTail:
    """Delay tail with fast Rayleigh fading over frozen patterns and shadows."""
    _check_theta(theta)
    success = sample_success_probabilities(scenario, [theta], n_patterns, seed, threads)[:, 0]
    # без шара исключения E[1/p] бесконечно при релеевских помехах
    return delay_tail_from_probs(success, n_max, infinite_mean=scenario.exclusion_radius == 0)
