"""Samplers for the spatial processes and the planar predicates they need."""

import logging
from typing import Tuple

import numpy as np

from app.exceptions import DivergenceError, ParameterError, StructuralError
from app.models.geometry import PointPattern, SegmentSet, Window
from app.utils.rng import as_generator

logger = logging.getLogger(__name__)

DEFAULT_TRUNCATION_EPS = 1e-3


def _check_intensity(name: str, value: float) -> None:
    if value < 0 or not np.isfinite(value):
        raise ParameterError(f"{name} must be a finite non-negative number, got {value}")


def _uniform_disk(rng: np.random.Generator, n: int, radius: float) -> np.ndarray:
    r = radius * np.sqrt(rng.random(n))
    phi = 2.0 * np.pi * rng.random(n)
    return np.column_stack([r * np.cos(phi), r * np.sin(phi)])


def truncation_radius(alpha: float, eps_trunc: float = DEFAULT_TRUNCATION_EPS, inner_radius: float = 0.5) -> float:
    """Радиус окна, при котором потерянная средняя интерференция ``2πλ r^{2-α}/(α-2)``
    не превышает доли ``eps_trunc`` от средней интерференции за пределами ``inner_radius``.
    """
    if alpha <= 2:
        raise DivergenceError(f"mean interference is infinite for alpha={alpha} <= 2")
    if not 0 < eps_trunc < 1 or inner_radius <= 0:
        raise ParameterError("eps_trunc must lie in (0, 1) and inner_radius must be positive")
    return float(inner_radius * eps_trunc ** (-1.0 / (alpha - 2.0)))


def sample_ppp(intensity: float, window: Window, seed: int | np.random.Generator) -> PointPattern:
    _check_intensity("intensity", intensity)
    rng = as_generator(seed)
    n = rng.poisson(intensity * window.area)
    return PointPattern(
        points=_uniform_disk(rng, n, window.r_max),
        window=window,
        intensity_meta={"lambda": intensity},
    )


def sample_matern(
    lambda_m: float,
    lambda_d: float,
    r_d: float,
    window: Window,
    seed: int | np.random.Generator,
) -> PointPattern:
    """Matérn cluster process; mothers live on the window inflated by ``r_d``."""
    _check_intensity("lambda_m", lambda_m)
    _check_intensity("lambda_d", lambda_d)
    if not r_d > 0:
        raise ParameterError(f"cluster radius r_d must be positive, got {r_d}")
    rng = as_generator(seed)

    mother_window = window.inflated(r_d)
    n_mothers = rng.poisson(lambda_m * mother_window.area)
    mothers = _uniform_disk(rng, n_mothers, mother_window.r_max)
    counts = rng.poisson(lambda_d, n_mothers)

    owner = np.repeat(np.arange(n_mothers), counts)
    daughters = mothers[owner] + _uniform_disk(rng, len(owner), r_d)

    # дочерние точки вне окна отбрасываются, материнские индексы сохраняются
    inside = window.contains(daughters)
    return PointPattern(
        points=daughters[inside],
        window=window,
        mother_index=owner[inside],
        mothers=mothers,
        intensity_meta={"lambda_m": lambda_m, "lambda_d": lambda_d, "r_d": r_d},
    )


def sample_segments(
    lambda_b: float,
    length: float,
    window: Window,
    seed: int | np.random.Generator,
) -> SegmentSet:
    _check_intensity("lambda_b", lambda_b)
    if not length > 0:
        raise ParameterError(f"segment length must be positive, got {length}")
    rng = as_generator(seed)

    center_window = window.inflated(length / 2.0)
    n = rng.poisson(lambda_b * center_window.area)
    centers = _uniform_disk(rng, n, center_window.r_max)
    angles = np.pi * rng.random(n)
    return SegmentSet(centers=centers, length=length, angles=angles, center_intensity=lambda_b)


# ========== ПЕРЕСЕЧЕНИЯ ОТРЕЗКОВ ==========

def _orientation(px, py, qx, qy, rx, ry):
    return np.sign((qx - px) * (ry - py) - (qy - py) * (rx - px))


def _on_segment(px, py, qx, qy, rx, ry):
    """r лежит в ограничивающем прямоугольнике отрезка pq (коллинеарность проверена отдельно)."""
    return (
        (np.minimum(px, qx) <= rx) & (rx <= np.maximum(px, qx))
        & (np.minimum(py, qy) <= ry) & (ry <= np.maximum(py, qy))
    )


def segments_intersect(p1: np.ndarray, q1: np.ndarray, p2: np.ndarray, q2: np.ndarray) -> np.ndarray:
    """Closed-segment intersection test, broadcast over leading dimensions of (…, 2) arrays."""
    p1x, p1y = p1[..., 0], p1[..., 1]
    q1x, q1y = q1[..., 0], q1[..., 1]
    p2x, p2y = p2[..., 0], p2[..., 1]
    q2x, q2y = q2[..., 0], q2[..., 1]

    o1 = _orientation(p1x, p1y, q1x, q1y, p2x, p2y)
    o2 = _orientation(p1x, p1y, q1x, q1y, q2x, q2y)
    o3 = _orientation(p2x, p2y, q2x, q2y, p1x, p1y)
    o4 = _orientation(p2x, p2y, q2x, q2y, q1x, q1y)

    general = (o1 != o2) & (o3 != o4)
    collinear = (
        ((o1 == 0) & _on_segment(p1x, p1y, q1x, q1y, p2x, p2y))
        | ((o2 == 0) & _on_segment(p1x, p1y, q1x, q1y, q2x, q2y))
        | ((o3 == 0) & _on_segment(p2x, p2y, q2x, q2y, p1x, p1y))
        | ((o4 == 0) & _on_segment(p2x, p2y, q2x, q2y, q1x, q1y))
    )
    return general | collinear


def count_crossings(segments: SegmentSet, a, b) -> int:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.array_equal(a, b):
        raise StructuralError("link endpoints must differ")
    if len(segments) == 0:
        return 0
    starts, ends = segments.endpoints()
    return int(segments_intersect(a[None, :], b[None, :], starts, ends).sum())


def crossing_counts(segments: SegmentSet, origin, points: np.ndarray, chunk: int = 2048) -> np.ndarray:
    """Number of obstacles crossing each link origin→point, vectorised over points."""
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    counts = np.zeros(len(points), dtype=np.int64)
    if len(segments) == 0 or len(points) == 0:
        return counts
    origin = np.asarray(origin, dtype=float)
    starts, ends = segments.endpoints()
    for lo in range(0, len(points), chunk):
        block = points[lo:lo + chunk]
        hits = segments_intersect(origin[None, None, :], block[:, None, :], starts[None, :, :], ends[None, :, :])
        counts[lo:lo + chunk] = hits.sum(axis=1)
    return counts


def grid_cell(point, delta: float) -> Tuple[int, int]:
    if not delta > 0:
        raise ParameterError(f"grid side must be positive, got {delta}")
    x, y = float(point[0]), float(point[1])
    return int(np.floor(x / delta + 0.5)), int(np.floor(y / delta + 0.5))


def grid_cells(points: np.ndarray, delta: float) -> np.ndarray:
    """Векторная версия grid_cell: массив (n, 2) индексов ячеек."""
    if not delta > 0:
        raise ParameterError(f"grid side must be positive, got {delta}")
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    return np.floor(points / delta + 0.5).astype(np.int64)
