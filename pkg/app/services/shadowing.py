"""Shadowing assignment for the three obstacle models.

В коррелированном режиме все станции одной ячейки получают одну и ту же тень T = K**r;
в независимом режиме каждая станция получает собственную реализацию r с тем же
маргинальным законом, что и у её ячейки.
"""

import logging
from typing import Optional

import numpy as np

from app.exceptions import ParameterError, StructuralError
from app.models.enums import BooleanMeanRule, CorrelationMode
from app.models.geometry import PointPattern, SegmentSet
from app.models.shadowing import ShadowedPattern
from app.schemas.scenario import BooleanShadow, ClusterShadow, GridShadow
from app.services.geometry import crossing_counts, grid_cells
from app.utils.rng import as_generator

logger = logging.getLogger(__name__)


def boolean_mean_count(distance: np.ndarray, model: BooleanShadow, rule: Optional[BooleanMeanRule] = None) -> np.ndarray:
    """Mean number of segments crossing a link of the given length.

    ``CORRECTED`` is the exact value 2·λ_b·l·d/π for isotropic segments of length l;
    ``LENGTH_FREE`` drops l and uses λ_b·d/(2π).
    """
    rule = rule or model.independent_mean
    distance = np.asarray(distance, dtype=float)
    if rule == BooleanMeanRule.CORRECTED:
        return 2.0 * model.lambda_b * model.length * distance / np.pi
    return model.lambda_b * distance / (2.0 * np.pi)


def _per_cell_draw(labels: np.ndarray, means_by_label: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Одна пуассоновская реализация на ячейку, разнесённая по всем её точкам."""
    if len(labels) == 0:
        return np.zeros(0, dtype=np.int64)
    _, first, inverse = np.unique(labels, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.reshape(-1)
    cell_counts = rng.poisson(means_by_label[first])
    return cell_counts[inverse]


def _shadowed(
    pattern: PointPattern,
    counts: np.ndarray,
    K: float,
    labels: np.ndarray,
    mode: CorrelationMode,
) -> ShadowedPattern:
    counts = np.asarray(counts, dtype=np.int64)
    return ShadowedPattern(
        pattern=pattern,
        attenuation=np.power(K, counts.astype(float)),
        cell_labels=labels,
        mode=mode,
        obstacle_counts=counts,
    )


def assign_grid(
    pattern: PointPattern,
    model: GridShadow,
    mode: CorrelationMode,
    seed: int | np.random.Generator,
    point_seed: int | np.random.Generator | None = None,
) -> ShadowedPattern:
    """Grid tessellation shadows: r_ij ~ Poisson(λ_b·Δ·√(i²+j²)).

    ``seed`` drives the per-cell draws; independent mode draws per point from
    ``point_seed`` (falls back to ``seed``).
    """
    if not isinstance(model, GridShadow):
        raise ParameterError(f"assign_grid needs a grid shadow model, got {type(model).__name__}")
    labels = grid_cells(pattern.points, model.delta)
    means = model.lambda_b * model.delta * np.hypot(labels[:, 0], labels[:, 1])

    if mode == CorrelationMode.CORRELATED:
        counts = _per_cell_draw(labels, means, as_generator(seed))
    else:
        rng = as_generator(point_seed if point_seed is not None else seed)
        counts = rng.poisson(means)
    return _shadowed(pattern, counts, model.K, labels, mode)


def assign_cluster(
    pattern: PointPattern,
    model: ClusterShadow,
    mode: CorrelationMode,
    seed: int | np.random.Generator,
    point_seed: int | np.random.Generator | None = None,
) -> ShadowedPattern:
    """One shadow per cluster with mean λ_b·‖mother‖."""
    if not isinstance(model, ClusterShadow):
        raise ParameterError(f"assign_cluster needs a cluster shadow model, got {type(model).__name__}")
    if not pattern.has_mothers:
        raise StructuralError("cluster shadowing needs a pattern with mother_index")

    labels = pattern.mother_index
    mother_means = model.lambda_b * np.hypot(pattern.mothers[:, 0], pattern.mothers[:, 1])

    if mode == CorrelationMode.CORRELATED:
        # по одной реализации на каждую мать, включая матери без дочерей в окне
        per_mother = as_generator(seed).poisson(mother_means)
        counts = per_mother[labels] if len(labels) else np.zeros(0, dtype=np.int64)
    else:
        rng = as_generator(point_seed if point_seed is not None else seed)
        counts = rng.poisson(mother_means[labels]) if len(labels) else np.zeros(0, dtype=np.int64)
    return _shadowed(pattern, counts, model.K, labels, mode)


def assign_boolean(
    pattern: PointPattern,
    segments: Optional[SegmentSet],
    model: BooleanShadow,
    mode: CorrelationMode,
    seed: int | np.random.Generator,
    rule: Optional[BooleanMeanRule] = None,
) -> ShadowedPattern:
    """Correlated mode counts real crossings; independent mode draws Poisson counts."""
    if not isinstance(model, BooleanShadow):
        raise ParameterError(f"assign_boolean needs a boolean shadow model, got {type(model).__name__}")
    labels = np.arange(len(pattern))

    if mode == CorrelationMode.CORRELATED:
        if segments is None:
            raise StructuralError("correlated boolean shadowing needs the obstacle segments")
        counts = crossing_counts(segments, (0.0, 0.0), pattern.points)
    else:
        means = boolean_mean_count(pattern.distances, model, rule)
        counts = as_generator(seed).poisson(means)
    return _shadowed(pattern, counts, model.K, labels, mode)
