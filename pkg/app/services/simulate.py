"""Монте-Карло: реализации интерференции, эмпирические преобразования Лапласа и
условные вероятности успеха для модели локальной задержки.

Реплика k полностью определяется парой (seed, k): каждый подпоток (размещение,
препятствия, тени ячеек, тени точек, замирания) выводится из неё отдельно. Поэтому
режимы correlated/independent видят одни и те же точки, препятствия и замирания.
"""

import logging
from functools import partial
from multiprocessing import Pool
from typing import Callable, Sequence

import numpy as np

from app.config import THREADS
from app.exceptions import ParameterError
from app.models.enums import CorrelationMode, DeploymentKind, LaplaceKind, ShadowKind
from app.models.geometry import PointPattern
from app.models.results import InterferenceSample, LaplaceCurve, MomentPair
from app.models.shadowing import ShadowedPattern
from app.schemas.scenario import Scenario
from app.services.analytic import P_TX
from app.services.geometry import sample_matern, sample_ppp, sample_segments
from app.services.shadowing import assign_boolean, assign_cluster, assign_grid
from app.utils.rng import Stream, replication_rng

logger = logging.getLogger(__name__)

MIN_LAPLACE_REPS = 1000
CHUNK_SIZE = 500

Reducer = Callable[[InterferenceSample, Scenario], np.ndarray]


def sample_pattern(scenario: Scenario, seed: int, replication: int) -> PointPattern:
    rng = replication_rng(seed, replication, Stream.PATTERN)
    dep = scenario.deployment
    if dep.kind == DeploymentKind.MATERN:
        return sample_matern(dep.lambda_m, dep.lambda_d, dep.r_d, scenario.window, rng)
    return sample_ppp(dep.intensity, scenario.window, rng)


def shadow_pattern(scenario: Scenario, pattern: PointPattern, seed: int, replication: int) -> ShadowedPattern:
    shadow = scenario.shadow
    cell_rng = replication_rng(seed, replication, Stream.CELL_SHADOW)
    point_rng = replication_rng(seed, replication, Stream.POINT_SHADOW)

    if shadow.kind == ShadowKind.GRID:
        return assign_grid(pattern, shadow, scenario.mode, cell_rng, point_seed=point_rng)
    if shadow.kind == ShadowKind.CLUSTER:
        return assign_cluster(pattern, shadow, scenario.mode, cell_rng, point_seed=point_rng)

    if scenario.mode == CorrelationMode.CORRELATED:
        segments = sample_segments(
            shadow.lambda_b, shadow.length, scenario.window,
            replication_rng(seed, replication, Stream.OBSTACLES),
        )
    else:
        segments = None
    return assign_boolean(pattern, segments, shadow, scenario.mode, point_rng)


def sample_interference(scenario: Scenario, seed: int, replication: int) -> InterferenceSample:
    pattern = sample_pattern(scenario, seed, replication)
    shadowed = shadow_pattern(scenario, pattern, seed, replication)
    fading = replication_rng(seed, replication, Stream.FADING).exponential(1.0, len(pattern))
    return interference_from(shadowed, fading, scenario)


def interference_from(shadowed: ShadowedPattern, fading: np.ndarray, scenario: Scenario) -> InterferenceSample:
    """I(o) = Σ h_x·T_x·‖x‖^{-α} over points outside the exclusion ball."""
    fading = np.asarray(fading, dtype=float)
    distances = shadowed.distances
    included = (distances >= scenario.exclusion_radius) & (distances > 0)
    power = P_TX * fading[included] * shadowed.attenuation[included] * distances[included] ** (-scenario.alpha)
    return InterferenceSample(value=float(power.sum()), shadowed=shadowed, fading=fading, included=included)


def conditional_success_prob(sample: InterferenceSample, theta: float, scenario: Scenario) -> float:
    """Rayleigh-averaged success probability with the pattern and shadows frozen."""
    return float(conditional_success_probs(sample, np.atleast_1d(theta), scenario)[0])


def conditional_success_probs(sample: InterferenceSample, thetas: np.ndarray, scenario: Scenario) -> np.ndarray:
    s = np.asarray(thetas, dtype=float) * scenario.link.d_link ** scenario.alpha
    shadowed = sample.shadowed
    gains = shadowed.attenuation[sample.included] * shadowed.distances[sample.included] ** (-scenario.alpha)
    log_p = -s * scenario.noise - np.log1p(np.outer(s, P_TX * gains)).sum(axis=1)
    return np.exp(log_p)


# ========== РЕПЛИКАЦИИ ==========

def interference_value(sample: InterferenceSample, scenario: Scenario) -> np.ndarray:
    return np.array([sample.value])


def success_probabilities(sample: InterferenceSample, scenario: Scenario, thetas: Sequence[float]) -> np.ndarray:
    return conditional_success_probs(sample, np.asarray(thetas, dtype=float), scenario)


def _chunk_worker(args) -> np.ndarray:
    scenario, seed, start, stop, reducer = args
    rows = [reducer(sample_interference(scenario, seed, k), scenario) for k in range(start, stop)]
    return np.vstack(rows) if rows else np.zeros((0, 1))


def run_replications(
    scenario: Scenario,
    n_reps: int,
    seed: int,
    reducer: Reducer = interference_value,
    threads: int | None = None,
) -> np.ndarray:
    """Applies ``reducer`` to replications 0..n_reps-1; row k always belongs to replication k."""
    if n_reps < 1:
        raise ParameterError(f"need at least one replication, got {n_reps}")
    threads = threads or THREADS
    tasks = [
        (scenario, seed, start, min(start + CHUNK_SIZE, n_reps), reducer)
        for start in range(0, n_reps, CHUNK_SIZE)
    ]
    if threads > 1 and len(tasks) > 1:
        with Pool(processes=threads) as pool:
            chunks = pool.map(_chunk_worker, tasks)
    else:
        chunks = [_chunk_worker(task) for task in tasks]
    return np.vstack(chunks)


def sample_interference_values(scenario: Scenario, n_reps: int, seed: int, threads: int | None = None) -> np.ndarray:
    return run_replications(scenario, n_reps, seed, interference_value, threads)[:, 0]


def sample_success_probabilities(
    scenario: Scenario, thetas: Sequence[float], n_patterns: int, seed: int, threads: int | None = None,
) -> np.ndarray:
    """Матрица (n_patterns, len(thetas)) условных вероятностей успеха."""
    reducer = partial(success_probabilities, thetas=tuple(float(t) for t in thetas))
    return run_replications(scenario, n_patterns, seed, reducer, threads)


# ========== ОЦЕНКИ ==========

def laplace_from_samples(values: np.ndarray, s_grid: Sequence[float]) -> LaplaceCurve:
    values = np.asarray(values, dtype=float)
    s_grid = np.asarray(s_grid, dtype=float)
    if np.any(s_grid < 0):
        raise ParameterError("Laplace arguments must be non-negative")
    paths = np.exp(-np.outer(values, s_grid))
    n = len(values)
    stderr = paths.std(axis=0, ddof=1) / np.sqrt(n) if n > 1 else np.zeros(len(s_grid))
    return LaplaceCurve(
        s_grid=s_grid, values=paths.mean(axis=0), kind=LaplaceKind.EMPIRICAL, errors=stderr, replications=n,
    )


def empirical_laplace(
    scenario: Scenario, s_grid: Sequence[float], n_reps: int, seed: int, threads: int | None = None,
) -> LaplaceCurve:
    """E[e^{-sI}] with common random numbers across s (the same I samples for every s)."""
    if n_reps < MIN_LAPLACE_REPS:
        raise ParameterError(f"empirical Laplace needs at least {MIN_LAPLACE_REPS} replications, got {n_reps}")
    logger.info(f"Empirical Laplace: mode={scenario.mode.value}, reps={n_reps}, points={len(s_grid)}")
    return laplace_from_samples(sample_interference_values(scenario, n_reps, seed, threads), s_grid)


def sample_moments(scenario: Scenario, n_reps: int, seed: int, threads: int | None = None) -> MomentPair:
    """Sample mean and variance; ``error`` is the standard error of the mean."""
    values = sample_interference_values(scenario, n_reps, seed, threads)
    return MomentPair(
        mean=float(values.mean()),
        variance=float(values.var(ddof=1)),
        error=float(values.std(ddof=1) / np.sqrt(len(values))),
    )
