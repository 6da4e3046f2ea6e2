"""Численное вычисление преобразований Лапласа интерференции и её моментов.

Все формулы обусловлены разбиением на ячейки затенения; интегралы берутся по области
‖x‖ ≥ exclusion_radius, чтобы аналитика и Монте-Карло сравнивались на одной модели.
"""

import logging
import math
from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, special

from app.exceptions import DivergenceError, DomainError, ParameterError, StructuralError, UnsupportedError
from app.models.enums import CorrelationMode, DeploymentKind, LaplaceKind, ShadowKind
from app.models.results import LaplaceCurve, MomentPair, OrderingReport
from app.models.shadowing import PoissonLogAttenuation
from app.schemas.scenario import Scenario
from app.utils.quadrature import cell_nodes, disk_offset_nodes, integrate_adaptive

logger = logging.getLogger(__name__)

P_TX = 1.0
DEFAULT_QUAD_TOL = 1e-6
DEFAULT_EPS_TAIL = 1e-10
CELL_CUTOFF_FACTOR = 40.0

MarkLaplace = Callable[[float], float]


def _check_alpha(alpha: float) -> None:
    if alpha <= 2:
        raise DivergenceError(f"interference is infinite for path-loss exponent alpha={alpha} <= 2")


def _check_s(s: float) -> None:
    if s < 0 or not np.isfinite(s):
        raise DomainError(f"Laplace argument must be a finite non-negative number, got {s}")


def _kernel(a: np.ndarray, r: np.ndarray, alpha: float) -> np.ndarray:
    """1 - 1/(1 + a r^{-α}) в устойчивой форме a/(a + r^α); строки - значения a."""
    a = np.asarray(a, dtype=float)[..., None]
    return a / (a + np.power(r, alpha))


def mix_expectation(a: float, law: PoissonLogAttenuation, eps_tail: float = DEFAULT_EPS_TAIL) -> float:
    """E_T[1/(1 + aT)] for T = K**r, r ~ Poisson(μ)."""
    if a < 0:
        raise DomainError(f"mix_expectation needs a >= 0, got {a}")
    values, probs = law.values(eps_tail)
    return float(np.sum(probs / (1.0 + a * values)))


# ========== PPP БЕЗ ЗАТЕНЕНИЯ ==========

def unshadowed_kernel_integral(s: float, alpha: float, exclusion_radius: float = 0.0) -> float:
    """∫_{‖x‖≥ε} (1 - 1/(1 + s‖x‖^{-α})) dx from the full-plane closed form."""
    _check_alpha(alpha)
    if s == 0:
        return 0.0
    full = np.pi * s ** (2.0 / alpha) * (2.0 * np.pi / alpha) / np.sin(2.0 * np.pi / alpha)
    if exclusion_radius <= 0:
        return float(full)
    inner, _ = integrate.quad(lambda r: 2.0 * np.pi * r * s / (s + r ** alpha), 0.0, exclusion_radius)
    return float(full - inner)


def laplace_ppp_closed_form(s: float, lam: float, alpha: float, exclusion_radius: float = 0.0) -> float:
    _check_s(s)
    return float(np.exp(-lam * unshadowed_kernel_integral(s, alpha, exclusion_radius)))


def laplace_ppp_unshadowed(
    s: float, lam: float, alpha: float, exclusion_radius: float = 0.0, quad_tol: float = DEFAULT_QUAD_TOL,
) -> float:
    """PGFL of the unshadowed PPP by radial quadrature over [ε, ∞)."""
    _check_alpha(alpha)
    _check_s(s)
    if s == 0 or lam == 0:
        return 1.0
    value, _ = integrate.quad(
        lambda r: 2.0 * np.pi * r * s / (s + r ** alpha),
        exclusion_radius, np.inf, epsabs=quad_tol / max(lam, 1.0), limit=200,
    )
    return float(np.exp(-lam * value))


# ========== СЕТКА ЯЧЕЕК ==========

def _grid_cells(delta: float, radius: float) -> list[Tuple[int, int]]:
    n = int(np.floor(radius / delta + 1e-9))
    idx = np.arange(-n, n + 1)
    i, j = np.meshgrid(idx, idx, indexing="ij")
    keep = np.hypot(i, j) * delta <= radius * (1 + 1e-12)
    return list(zip(i[keep].tolist(), j[keep].tolist()))


def _grid_tail_bound(scale: float, alpha: float, delta: float, decay: float, radius: float, exclusion: float) -> float:
    """scale·∫_{‖x‖ > radius - Δ/√2} ‖x‖^{-α} e^{-decay(‖x‖ - Δ/√2)} dx."""
    h = delta / np.sqrt(2.0)
    lower = max(radius - h, exclusion)
    if lower <= 0:
        return np.inf
    value, _ = integrate.quad(
        lambda r: 2.0 * np.pi * r ** (1.0 - alpha) * np.exp(-decay * (r - h)), lower, np.inf, limit=200,
    )
    return float(scale * value)


def _grid_radius(
    scale: float, alpha: float, delta: float, decay: float, cutoff: float, exclusion: float, target: float,
) -> Tuple[float, float]:
    """Наименьший радиус перебора ячеек (кратный Δ, не больше cutoff), при котором хвост <= target."""
    steps = max(int(np.floor(cutoff / delta + 1e-9)), 1)
    bound = np.inf
    for k in range(1, steps + 1):
        radius = k * delta
        bound = _grid_tail_bound(scale, alpha, delta, decay, radius, exclusion)
        if bound <= target:
            return radius, bound
    return steps * delta, bound


def _grid_cell_law(i: int, j: int, delta: float, lambda_b: float, K: float) -> PoissonLogAttenuation:
    return PoissonLogAttenuation(K=K, mu=lambda_b * delta * math.hypot(i, j))


@lru_cache(maxsize=16384)
def _law_values(law: PoissonLogAttenuation, eps_tail: float) -> Tuple[np.ndarray, np.ndarray]:
    return law.values(eps_tail)


def grid_log_laplace(
    s: float,
    lam: float,
    alpha: float,
    delta: float,
    lambda_b: float,
    K: float,
    mode: CorrelationMode,
    quad_tol: float = DEFAULT_QUAD_TOL,
    cell_cutoff: Optional[float] = None,
    exclusion_radius: float = 0.0,
    eps_tail: float = DEFAULT_EPS_TAIL,
) -> Tuple[float, float]:
    """log L(s) of the grid-shadowed PPP with its absolute error budget."""
    _check_alpha(alpha)
    _check_s(s)
    if delta <= 0:
        raise ParameterError(f"grid side must be positive, got {delta}")
    if s == 0 or lam == 0:
        return 0.0, 0.0
    if K == 1 or lambda_b == 0:
        # тени вырождены (T = 1): остаток по ячейкам известен точно
        return -lam * unshadowed_kernel_integral(s, alpha, exclusion_radius), 0.0

    cutoff = cell_cutoff if cell_cutoff is not None else CELL_CUTOFF_FACTOR * delta
    decay = lambda_b * (1.0 - K)
    radius, tail = _grid_radius(lam * s, alpha, delta, decay, cutoff, exclusion_radius, quad_tol / 2)
    if tail > quad_tol:
        raise DivergenceError(
            f"grid tail bound {tail:.2e} exceeds quad_tol={quad_tol:.1e} at cell cutoff {cutoff}; raise cell_cutoff"
        )

    cell_tol = quad_tol / lam
    log_value, error = 0.0, tail
    for i, j in _grid_cells(delta, radius):
        values, probs = _law_values(_grid_cell_law(i, j, delta, lambda_b, K), eps_tail)
        a = s * values
        g, g_err = integrate_adaptive(
            lambda order, i=i, j=j: cell_nodes(i, j, delta, exclusion_radius, order),
            lambda r, a=a: _kernel(a, r, alpha),
            cell_tol,
        )
        if mode == CorrelationMode.CORRELATED:
            log_value += float(np.log(np.sum(probs * np.exp(-lam * g))))
        else:
            log_value += float(-lam * np.sum(probs * g))
        error += lam * g_err
    return log_value, error


def laplace_ppp_grid(
    s: float,
    lam: float,
    alpha: float,
    delta: float,
    lambda_b: float,
    K: float,
    mode: CorrelationMode,
    quad_tol: float = DEFAULT_QUAD_TOL,
    cell_cutoff: Optional[float] = None,
    exclusion_radius: float = 0.0,
) -> float:
    """Conditional Laplace transform of the interference for grid shadowing cells.

    Independent mode puts E_T inside the per-cell exponent, correlated mode outside.
    """
    log_value, _ = grid_log_laplace(
        s, lam, alpha, delta, lambda_b, K, mode, quad_tol, cell_cutoff, exclusion_radius,
    )
    return float(np.exp(log_value))


# ========== КЛАСТЕРНЫЙ ПРОЦЕСС ==========

def _cluster_inner(
    rho: float,
    s: float,
    lambda_d: float,
    r_d: float,
    alpha: float,
    lambda_b: float,
    K: float,
    mode: CorrelationMode,
    exclusion: float,
    inner_tol: float,
    eps_tail: float,
) -> float:
    """1 - E[exp(-λ_d ∫ ...)] для кластера с матерью на расстоянии rho."""
    law = PoissonLogAttenuation(K=K, mu=lambda_b * rho)
    if rho > r_d + exclusion:
        upper = lambda_d * s * law.mean * (rho - r_d) ** (-alpha)
        if upper < 1e-18:
            return upper
    values, probs = law.values(eps_tail)
    a = s * values
    b, _ = integrate_adaptive(
        lambda order: disk_offset_nodes(float(rho), r_d, exclusion, order),
        lambda r: _kernel(a, r, alpha),
        inner_tol,
    )
    if mode == CorrelationMode.CORRELATED:
        return float(1.0 - np.sum(probs * np.exp(-lambda_d * b)))
    return float(-np.expm1(-lambda_d * np.sum(probs * b)))


def _radial_breaks(r_d: float, exclusion: float) -> list[float]:
    points = {r_d, r_d + exclusion, abs(r_d - exclusion), 2 * r_d + exclusion}
    return sorted(p for p in points if p > 0)


def _integrate_radial(func: Callable[[float], float], r_d: float, exclusion: float, epsabs: float) -> Tuple[float, float]:
    """∫_0^∞ 2πρ func(ρ) dρ, split at the kinks of the disk-offset weights."""
    breaks = _radial_breaks(r_d, exclusion)
    split = breaks[-1]
    head, head_err = integrate.quad(
        lambda rho: 2.0 * np.pi * rho * func(rho), 0.0, split, points=breaks[:-1], epsabs=epsabs, limit=200,
    )
    tail, tail_err = integrate.quad(
        lambda rho: 2.0 * np.pi * rho * func(rho), split, np.inf, epsabs=epsabs, limit=200,
    )
    return head + tail, head_err + tail_err


def pcp_log_laplace(
    s: float,
    lambda_m: float,
    lambda_d: float,
    r_d: float,
    alpha: float,
    lambda_b: float,
    K: float,
    mode: CorrelationMode,
    quad_tol: float = DEFAULT_QUAD_TOL,
    exclusion_radius: float = 0.0,
    eps_tail: float = DEFAULT_EPS_TAIL,
) -> Tuple[float, float]:
    _check_alpha(alpha)
    _check_s(s)
    if r_d <= 0:
        raise ParameterError(f"cluster radius must be positive, got {r_d}")
    if s == 0 or lambda_m == 0 or lambda_d == 0:
        return 0.0, 0.0

    epsabs = quad_tol / (2.0 * lambda_m)
    inner_tol = min(quad_tol * 1e-2, 1e-9)
    value, err = _integrate_radial(
        lambda rho: _cluster_inner(
            rho, s, lambda_d, r_d, alpha, lambda_b, K, mode, exclusion_radius, inner_tol, eps_tail,
        ),
        r_d, exclusion_radius, epsabs,
    )
    return -lambda_m * value, lambda_m * err


def laplace_pcp(
    s: float,
    lambda_m: float,
    lambda_d: float,
    r_d: float,
    alpha: float,
    lambda_b: float,
    K: float,
    mode: CorrelationMode,
    quad_tol: float = DEFAULT_QUAD_TOL,
    exclusion_radius: float = 0.0,
) -> float:
    """Laplace transform for the Matérn cluster process with one shadow per cluster.

    Daughters are uniform on the disk, f = 1/(π r_d²); T_y has Poisson mean λ_b‖y‖.
    """
    log_value, _ = pcp_log_laplace(s, lambda_m, lambda_d, r_d, alpha, lambda_b, K, mode, quad_tol, exclusion_radius)
    return float(np.exp(log_value))


# ========== МОМЕНТЫ ==========

def _require_exclusion(exclusion_radius: float) -> None:
    if exclusion_radius <= 0:
        raise DivergenceError(
            "interference moments are infinite without an exclusion ball: ∫‖x‖^{-α} diverges at the origin"
        )


def moments_ppp_grid(
    lam: float,
    alpha: float,
    delta: float,
    lambda_b: float,
    K: float,
    mode: CorrelationMode,
    exclusion_radius: float = 0.25,
    quad_tol: float = 1e-10,
    cell_cutoff: Optional[float] = None,
) -> MomentPair:
    """Mean and variance of the interference given the grid cells."""
    _check_alpha(alpha)
    _require_exclusion(exclusion_radius)
    if delta <= 0:
        raise ParameterError(f"grid side must be positive, got {delta}")
    eps = exclusion_radius

    if K == 1 or lambda_b == 0:
        mean = lam * 2.0 * np.pi * eps ** (2.0 - alpha) / (alpha - 2.0)
        var = 2.0 * lam * 2.0 * np.pi * eps ** (2.0 - 2.0 * alpha) / (2.0 * alpha - 2.0)
        return MomentPair(mean=float(mean), variance=float(var), error=0.0)

    cutoff = cell_cutoff if cell_cutoff is not None else CELL_CUTOFF_FACTOR * delta
    decay = lambda_b * (1.0 - K)
    rough_mean = lam * 2.0 * np.pi * eps ** (2.0 - alpha) / (alpha - 2.0)
    radius, tail = _grid_radius(lam, alpha, delta, decay, cutoff, eps, quad_tol * rough_mean)
    if tail > 1e-3 * rough_mean:
        raise DivergenceError(f"grid moment tail bound {tail:.2e} is not negligible at cutoff {cutoff}")
    if tail > quad_tol * rough_mean:
        logger.warning(f"Grid moment tail bound {tail:.2e} above requested tolerance at cutoff {cutoff}")

    mean = var_ind = gap = 0.0
    error = tail
    for i, j in _grid_cells(delta, radius):
        law = _grid_cell_law(i, j, delta, lambda_b, K)
        a, a_err = integrate_adaptive(
            lambda order, i=i, j=j: cell_nodes(i, j, delta, eps, order),
            lambda r: np.vstack([r ** (-alpha), r ** (-2.0 * alpha)]),
            0.0,
            rtol=quad_tol,
        )
        a1, a2 = float(a[0]), float(a[1])
        mean += lam * law.mean * a1
        var_ind += 2.0 * lam * law.second_moment * a2
        gap += lam ** 2 * law.variance * a1 ** 2
        error += lam * a_err

    variance = var_ind + gap if mode == CorrelationMode.CORRELATED else var_ind
    return MomentPair(mean=mean, variance=variance, error=error)


def moments_pcp(
    lambda_m: float,
    lambda_d: float,
    r_d: float,
    alpha: float,
    lambda_b: float,
    K: float,
    mode: CorrelationMode,
    exclusion_radius: float = 0.25,
    quad_tol: float = 1e-10,
) -> MomentPair:
    """Mean and variance for the cluster process with A_k(y) = ∫‖x+y‖^{-kα} f(x) dx."""
    _check_alpha(alpha)
    _require_exclusion(exclusion_radius)
    eps = exclusion_radius
    decay1 = lambda_b * (1.0 - K)
    decay2 = lambda_b * (1.0 - K ** 2)

    def offsets(rho: float) -> Tuple[float, float]:
        a, _ = integrate_adaptive(
            lambda order: disk_offset_nodes(float(rho), r_d, eps, order),
            lambda r: np.vstack([r ** (-alpha), r ** (-2.0 * alpha)]),
            0.0,
            rtol=quad_tol,
        )
        return float(a[0]), float(a[1])

    def mean_term(rho):
        a1, _ = offsets(rho)
        return np.exp(-decay1 * rho) * a1

    def var_ind_term(rho):
        a1, a2 = offsets(rho)
        m1 = np.exp(-decay1 * rho)
        m2 = np.exp(-decay2 * rho)
        return 2.0 * lambda_d * m2 * a2 + lambda_d ** 2 * m1 ** 2 * a1 ** 2

    def gap_term(rho):
        a1, _ = offsets(rho)
        var_t = max(np.exp(-decay2 * rho) - np.exp(-2.0 * decay1 * rho), 0.0)
        return lambda_d ** 2 * var_t * a1 ** 2

    scale = 2.0 * np.pi * eps ** (2.0 - alpha) / (alpha - 2.0)
    epsabs = quad_tol * scale
    mean, mean_err = _integrate_radial(mean_term, r_d, eps, epsabs)
    var_ind, var_err = _integrate_radial(var_ind_term, r_d, eps, epsabs)
    mean *= lambda_m * lambda_d
    var_ind *= lambda_m
    if mode == CorrelationMode.CORRELATED:
        gap, gap_err = _integrate_radial(gap_term, r_d, eps, epsabs)
        variance = var_ind + lambda_m * gap
        var_err += gap_err
    else:
        variance = var_ind
    error = lambda_m * lambda_d * mean_err + lambda_m * var_err
    return MomentPair(mean=float(mean), variance=float(variance), error=float(error))


# ========== ЛОКАЛЬНАЯ ЗАДЕРЖКА: ПРОСТРАНСТВЕННОЕ ПЕРЕИСПОЛЬЗОВАНИЕ ==========

def rayleigh_mark_laplace(law: Optional[PoissonLogAttenuation] = None) -> MarkLaplace:
    """L_G for G = h·T with h ~ Exp(1) and T from ``law`` (T = 1 when omitted)."""
    if law is None:
        return lambda c: 1.0 / (1.0 + c)
    return lambda c: mix_expectation(c, law)


def spatial_reuse_inverse(
    s: float,
    lam: float,
    alpha: float,
    mark_laplace: MarkLaplace,
    exclusion_radius: float = 0.0,
    mode: CorrelationMode = CorrelationMode.INDEPENDENT,
) -> float:
    """E[1/L_{I|Φ}(s)] for a PPP with i.i.d. marks; ``math.inf`` when the integral diverges."""
    if mode == CorrelationMode.CORRELATED:
        raise UnsupportedError("the spatial-reuse identity needs i.i.d. marks; correlated shadows share them")
    _check_alpha(alpha)
    _check_s(s)
    if s == 0 or lam == 0:
        return 1.0

    def integrand(v: float) -> float:
        lg = mark_laplace(s * v ** (-alpha))
        if lg <= 0:
            return -np.inf
        return v * (1.0 - 1.0 / lg)

    with np.errstate(over="ignore", divide="ignore"):
        far, _ = integrate.quad(integrand, max(exclusion_radius, 1.0), np.inf, limit=200)
        if exclusion_radius >= 1.0:
            total = far
        elif exclusion_radius > 0:
            near, _ = integrate.quad(integrand, exclusion_radius, 1.0, limit=200)
            total = far + near
        else:
            # при ε = 0 следим за вкладом декад (10^{-k-1}, 10^{-k}]: рост означает расходимость
            total = far
            previous = np.inf
            for k in range(12):
                piece, _ = integrate.quad(integrand, 10.0 ** (-k - 1), 10.0 ** (-k), limit=200)
                if not np.isfinite(piece):
                    return math.inf
                total += piece
                if k >= 2 and abs(piece) >= abs(previous) and abs(piece) > 1e-12:
                    logger.info(f"Spatial-reuse integral diverges near the origin (s={s}, alpha={alpha})")
                    return math.inf
                previous = piece

    exponent = -2.0 * np.pi * lam * total
    if exponent > 700:
        return math.inf
    return float(np.exp(exponent))


# ========== ПОРЯДОК ЛАПЛАСА И ВПОЛНЕ МОНОТОННЫЕ ФУНКЦИИ ==========

def check_ordering(curve_a: LaplaceCurve, curve_b: LaplaceCurve, k_sigma: float = 3.0) -> OrderingReport:
    """Does curve_a dominate curve_b pointwise, up to k_sigma combined errors?"""
    if curve_a.s_grid.shape != curve_b.s_grid.shape or not np.allclose(curve_a.s_grid, curve_b.s_grid):
        raise StructuralError("ordering check needs curves on the same s-grid")
    tolerance = k_sigma * np.hypot(curve_a.errors, curve_b.errors)
    diff = curve_b.values - curve_a.values
    # max(b - a): отрицательное значение показывает запас
    worst = float(np.max(diff))
    return OrderingReport(holds=bool(np.all(diff <= tolerance)), worst_violation=worst, tolerance=tolerance)


def cm_probe(
    f: Callable[[float], float],
    max_order: int,
    grid: Sequence[float],
    h: float,
    f_tol: float = 1e-12,
) -> bool:
    """Finite-difference test of (-1)^n f^(n) >= 0 for n = 1..max_order on ``grid``."""
    grid = np.asarray(grid, dtype=float)
    if h <= 0 or max_order < 1:
        raise ParameterError("cm_probe needs h > 0 and max_order >= 1")
    for n in range(1, max_order + 1):
        offsets = (n / 2.0 - np.arange(n + 1)) * h
        coeffs = np.array([(-1) ** k * special.comb(n, k) for k in range(n + 1)])
        samples = np.array([[f(x + o) for o in offsets] for x in grid])
        derivative = samples @ coeffs / h ** n
        # ошибка округления разностной схемы
        slack = 2.0 ** n * f_tol / h ** n
        if np.any((-1) ** n * derivative < -slack):
            return False
    return True


# ========== ДИСПЕТЧЕР ПО СЦЕНАРИЮ ==========

def scenario_log_laplace(scenario: Scenario, s: float, quad_tol: float = DEFAULT_QUAD_TOL) -> Tuple[float, float]:
    dep, shadow = scenario.deployment, scenario.shadow
    if shadow.kind == ShadowKind.GRID and dep.kind == DeploymentKind.PPP:
        return grid_log_laplace(
            s, dep.intensity, scenario.alpha, shadow.delta, shadow.lambda_b, shadow.K, scenario.mode,
            quad_tol=quad_tol, exclusion_radius=scenario.exclusion_radius,
        )
    if shadow.kind == ShadowKind.CLUSTER and dep.kind == DeploymentKind.MATERN:
        return pcp_log_laplace(
            s, dep.lambda_m, dep.lambda_d, dep.r_d, scenario.alpha, shadow.lambda_b, shadow.K, scenario.mode,
            quad_tol=quad_tol, exclusion_radius=scenario.exclusion_radius,
        )
    raise UnsupportedError(
        f"no analytic transform for {dep.kind} deployment with {shadow.kind} shadowing; use the Monte Carlo engine"
    )


def analytic_laplace(scenario: Scenario, s: float, quad_tol: float = DEFAULT_QUAD_TOL) -> float:
    log_value, _ = scenario_log_laplace(scenario, s, quad_tol)
    return float(np.exp(log_value))


def analytic_curve(scenario: Scenario, s_grid: Sequence[float], quad_tol: float = DEFAULT_QUAD_TOL) -> LaplaceCurve:
    s_grid = np.asarray(s_grid, dtype=float)
    values, errors = np.empty_like(s_grid), np.empty_like(s_grid)
    for k, s in enumerate(s_grid):
        log_value, err = scenario_log_laplace(scenario, float(s), quad_tol)
        values[k] = np.exp(log_value)
        errors[k] = max(err, quad_tol)
    return LaplaceCurve(s_grid=s_grid, values=values, kind=LaplaceKind.ANALYTIC, errors=errors)


def analytic_moments(scenario: Scenario, quad_tol: float = 1e-10) -> MomentPair:
    dep, shadow = scenario.deployment, scenario.shadow
    if shadow.kind == ShadowKind.GRID and dep.kind == DeploymentKind.PPP:
        return moments_ppp_grid(
            dep.intensity, scenario.alpha, shadow.delta, shadow.lambda_b, shadow.K, scenario.mode,
            exclusion_radius=scenario.exclusion_radius, quad_tol=quad_tol,
        )
    if shadow.kind == ShadowKind.CLUSTER and dep.kind == DeploymentKind.MATERN:
        return moments_pcp(
            dep.lambda_m, dep.lambda_d, dep.r_d, scenario.alpha, shadow.lambda_b, shadow.K, scenario.mode,
            exclusion_radius=scenario.exclusion_radius, quad_tol=quad_tol,
        )
    raise UnsupportedError(f"no analytic moments for {dep.kind} deployment with {shadow.kind} shadowing")
