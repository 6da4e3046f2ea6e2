"""Gauss-Legendre quadrature of radial functions over planar regions.

Все интегралы здесь имеют вид ∫ φ(‖x‖) w(x) dx, где область - квадратная ячейка сетки
(с вырезанным диском радиуса ``exclusion`` вокруг начала координат) либо диск дочерних
точек кластера, смещённый от начала координат. Узлы строятся в полярных координатах
с центром в начале координат, так что φ вычисляется только на радиусах.
"""

import logging
from functools import lru_cache
from typing import Callable, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from app.exceptions import DivergenceError

logger = logging.getLogger(__name__)

START_ORDER = 6
MAX_ORDER = 96

NodeSet = Tuple[np.ndarray, np.ndarray]


@lru_cache(maxsize=64)
def _gauss(order: int) -> NodeSet:
    return leggauss(order)


def _map_interval(a, b, order: int) -> NodeSet:
    """Узлы и веса Гаусса на отрезках [a, b] (a, b могут быть массивами одинаковой формы)."""
    t, w = _gauss(order)
    a = np.asarray(a, dtype=float)[..., None]
    b = np.asarray(b, dtype=float)[..., None]
    half = 0.5 * (b - a)
    return a + half * (t + 1.0), half * w


def _radial_nodes(r_lo: np.ndarray, r_hi: np.ndarray, order: int) -> NodeSet:
    """Radial nodes carrying the polar Jacobian r; log spacing when r_lo > 0."""
    r_lo = np.asarray(r_lo, dtype=float)
    r_hi = np.maximum(np.asarray(r_hi, dtype=float), r_lo)
    positive = r_lo > 0
    safe_lo = np.where(positive, r_lo, 1.0)
    safe_hi = np.where(positive, r_hi, 1.0)

    u, wu = _map_interval(np.log(safe_lo), np.log(safe_hi), order)
    r_log = np.exp(u)
    w_log = wu * r_log ** 2

    r_lin, w_lin = _map_interval(r_lo, r_hi, order)
    w_lin = w_lin * r_lin

    mask = positive[..., None]
    return np.where(mask, r_log, r_lin), np.where(mask, w_log, w_lin)


# ========== ЯЧЕЙКИ СЕТКИ ==========

def _slab(lo: float, hi: float, d: np.ndarray):
    """Параметры входа/выхода луча t·d из полосы lo <= x <= hi."""
    inside = lo <= 0.0 <= hi
    safe = np.where(d == 0.0, 1.0, d)
    t1, t2 = lo / safe, hi / safe
    t_min = np.where(d == 0.0, -np.inf if inside else np.inf, np.minimum(t1, t2))
    t_max = np.where(d == 0.0, np.inf if inside else -np.inf, np.maximum(t1, t2))
    return t_min, t_max


def _ray_limits(theta: np.ndarray, x0: float, x1: float, y0: float, y1: float):
    tx_min, tx_max = _slab(x0, x1, np.cos(theta))
    ty_min, ty_max = _slab(y0, y1, np.sin(theta))
    r_in = np.maximum(np.maximum(tx_min, ty_min), 0.0)
    r_out = np.minimum(tx_max, ty_max)
    return r_in, np.maximum(r_out, r_in)


def _circle_edge_angles(radius: float, x0: float, x1: float, y0: float, y1: float) -> list[float]:
    if radius <= 0:
        return []
    angles = []
    for x in (x0, x1):
        if abs(x) <= radius:
            y = np.sqrt(radius ** 2 - x ** 2)
            angles += [np.arctan2(v, x) for v in (y, -y) if y0 <= v <= y1]
    for y in (y0, y1):
        if abs(y) <= radius:
            x = np.sqrt(radius ** 2 - y ** 2)
            angles += [np.arctan2(y, v) for v in (x, -x) if x0 <= v <= x1]
    return angles


@lru_cache(maxsize=8192)
def cell_nodes(i: int, j: int, delta: float, exclusion: float, order: int) -> NodeSet:
    """Radii and weights with ∫_{cell(i,j), ‖x‖≥exclusion} φ(‖x‖) dx ≈ Σ w·φ(r)."""
    x0, x1 = (i - 0.5) * delta, (i + 0.5) * delta
    y0, y1 = (j - 0.5) * delta, (j + 0.5) * delta
    corners = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]

    if i == 0 and j == 0:
        # ячейка содержит начало координат: полный оборот
        ref = 0.0
        lo, hi = -np.pi, np.pi
    else:
        ref = float(np.arctan2(j * delta, i * delta))
        rel = [(np.arctan2(cy, cx) - ref + np.pi) % (2 * np.pi) - np.pi for cx, cy in corners]
        lo, hi = ref + min(rel), ref + max(rel)

    def unwrap(angle: float) -> float:
        return ref + (angle - ref + np.pi) % (2 * np.pi) - np.pi

    breaks = [lo, hi]
    breaks += [unwrap(np.arctan2(cy, cx)) for cx, cy in corners]
    breaks += [unwrap(a) for a in _circle_edge_angles(exclusion, x0, x1, y0, y1)]
    breaks = np.unique(np.clip(breaks, lo, hi))

    theta, w_theta = _map_interval(breaks[:-1], breaks[1:], order)
    theta, w_theta = theta.ravel(), w_theta.ravel()
    r_in, r_out = _ray_limits(theta, x0, x1, y0, y1)
    r_lo = np.maximum(r_in, exclusion)
    r_hi = np.maximum(r_out, r_lo)

    r, w_r = _radial_nodes(r_lo, r_hi, order)
    weights = w_r * w_theta[:, None]
    keep = weights.ravel() > 0
    return r.ravel()[keep], weights.ravel()[keep]


def cell_area(i: int, j: int, delta: float, exclusion: float = 0.0) -> float:
    r, w = cell_nodes(i, j, delta, exclusion, START_ORDER)
    return float(w.sum())


# ========== СМЕЩЁННЫЙ ДИСК (КЛАСТЕР) ==========

@lru_cache(maxsize=4096)
def disk_offset_nodes(rho: float, r_d: float, exclusion: float, order: int) -> NodeSet:
    """Nodes for the mean of φ(‖x+y‖) over x uniform on the radius-r_d disk, ‖y‖ = rho.

    Points closer than ``exclusion`` to the origin contribute zero.
    """
    norm = 1.0 / (np.pi * r_d ** 2)
    radii, weights = [], []

    # часть, где окружность радиуса r целиком внутри диска
    full_hi = r_d - rho
    if full_hi > exclusion:
        r, w = _radial_nodes(np.array(exclusion), np.array(full_hi), order)
        radii.append(r.ravel())
        weights.append(2.0 * np.pi * w.ravel() * norm)

    # дуговая часть: r = a + (b-a)(1-cos t)/2 снимает корневые особенности на концах
    a, b = abs(rho - r_d), rho + r_d
    lower = max(a, exclusion)
    if b > lower and rho > 0:
        t_lo = np.arccos(np.clip(1.0 - 2.0 * (lower - a) / (b - a), -1.0, 1.0))
        t, w_t = _map_interval(t_lo, np.pi, order)
        t, w_t = t.ravel(), w_t.ravel()
        r = a + 0.5 * (b - a) * (1.0 - np.cos(t))
        dr = 0.5 * (b - a) * np.sin(t)
        cos_arg = np.clip((r ** 2 + rho ** 2 - r_d ** 2) / (2.0 * r * rho), -1.0, 1.0)
        arc = 2.0 * r * np.arccos(cos_arg)
        radii.append(r)
        weights.append(arc * dr * w_t * norm)

    if not radii:
        return np.zeros(0), np.zeros(0)
    return np.concatenate(radii), np.concatenate(weights)


# ========== АДАПТИВНОЕ УДВОЕНИЕ ПОРЯДКА ==========

def integrate_adaptive(
    nodes: Callable[[int], NodeSet],
    integrand: Callable[[np.ndarray], np.ndarray],
    tol: float,
    rtol: float = 0.0,
    start_order: int = START_ORDER,
    max_order: int = MAX_ORDER,
) -> Tuple[np.ndarray, float]:
    """Удваивает порядок, пока два последовательных приближения не совпадут
    с точностью max(tol, rtol·|значение|).

    ``integrand`` получает массив радиусов и возвращает массив формы (..., n_nodes);
    интегрирование идёт по последней оси. Возвращает (значения, оценка ошибки).
    """
    order = start_order
    r, w = nodes(order)
    previous = integrand(r) @ w
    error = np.inf
    while order < max_order:
        order *= 2
        r, w = nodes(order)
        current = integrand(r) @ w
        error = float(np.max(np.abs(current - previous), initial=0.0))
        if not np.all(np.isfinite(current)):
            raise DivergenceError("quadrature produced a non-finite value")
        if error <= max(tol, rtol * float(np.max(np.abs(current), initial=0.0))):
            return current, error
        previous = current
    logger.warning(f"Quadrature did not reach tol={tol:.1e} at order {max_order}, error estimate {error:.2e}")
    return previous, error
