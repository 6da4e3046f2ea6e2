"""Наборы свойств, проверяемые командой ``verify``.

Каждый набор возвращает VerificationReport; margin у свойства положителен, когда
свойство выполняется с запасом, и отрицателен на величину нарушения. Набор
``reproduction`` сравнивает измеренные величины с эталонными числами и инвариантом
модели не является.
"""

import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from app.config import DEFAULT_SEED
from app.exceptions import PropertyFailure
from app.models.enums import BooleanMeanRule, CorrelationMode, FadingKind, ShadowKind, VerifySuite
from app.schemas.scenario import (
    BooleanShadow,
    ClusterShadow,
    GridShadow,
    LinkModel,
    MaternDeployment,
    PPPDeployment,
    Scenario,
)
from app.schemas.verification import PropertyResult, VerificationReport
from app.services.analytic import (
    analytic_curve,
    analytic_laplace,
    analytic_moments,
    check_ordering,
    cm_probe,
    laplace_ppp_closed_form,
    laplace_ppp_unshadowed,
    rayleigh_mark_laplace,
    spatial_reuse_inverse,
)
from app.services.experiment import apply_sweep, list_bundled, load_configs, sweep_label
from app.services.metrics import (
    coverage_from_samples,
    coverage_rician,
    coverage_samples,
    db_to_linear,
    shannon_throughput,
    throughput_samples,
)
from app.services.simulate import empirical_laplace, sample_interference_values, sample_success_probabilities

logger = logging.getLogger(__name__)

DEFAULT_VERIFY_REPS = 2000
VERIFY_THETAS_DB = (-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0)
K_SIGMA = 3.0
ANALYTIC_TOL = 1e-8

CM_ORDER = 3
CM_GRID = (0.1, 0.3)
CM_STEP = 0.02

RICIAN_KAPPAS = (1.0, 5.0)
RICIAN_THETAS_DB = (-10.0, 0.0, 10.0)
RAYLEIGH_LIMIT_TOL = 1e-12

COR, IND = CorrelationMode.CORRELATED, CorrelationMode.INDEPENDENT


# ========== ЭТАЛОННЫЕ СЦЕНАРИИ ==========

def grid_scenario(delta: float, exclusion_radius: float = 0.25, r_max: float = 20.0, K: float = 0.1) -> Scenario:
    return Scenario(
        deployment=PPPDeployment(intensity=1.0),
        shadow=GridShadow(lambda_b=1.0, K=K, delta=delta),
        exclusion_radius=exclusion_radius,
        r_max=r_max,
    )


def cluster_scenario(lambda_d: float, exclusion_radius: float = 0.25, r_max: float = 20.0) -> Scenario:
    """Matérn cluster process with λ_m·λ_d = 1 and one shadow per cluster."""
    return Scenario(
        deployment=MaternDeployment(lambda_m=1.0 / lambda_d, lambda_d=lambda_d, r_d=1.0),
        shadow=ClusterShadow(lambda_b=1.0, K=0.1),
        exclusion_radius=exclusion_radius,
        r_max=r_max,
    )


def boolean_scenario(lambda_b: float = 0.5, length: float = 5.0, r_max: float = 10.0) -> Scenario:
    return Scenario(
        deployment=PPPDeployment(intensity=1.0),
        shadow=BooleanShadow(lambda_b=lambda_b, K=0.01, length=length),
        r_max=r_max,
    )


def bundled_points(name: str) -> List[Tuple[str, str, Scenario]]:
    """(config name, sweep label, scenario) for every config ``name`` expands to and every sweep point."""
    points = []
    for config in load_configs(name):
        for value in config.sweep.points():
            scenario = apply_sweep(config.scenario, config.sweep, value)
            points.append((config.name, sweep_label(config.sweep.variable, value), scenario))
    return points


def bundled_scenarios() -> List[Tuple[str, Scenario]]:
    """Distinct Rayleigh scenarios across all bundled configs, in correlated mode.

    The serving-link fading is dropped, so Rician sweeps collapse onto their
    Rayleigh counterpart; the first config that reaches a scenario names it.
    """
    seen, scenarios = set(), []
    for name in list_bundled():
        for config_name, label, scenario in bundled_points(name):
            scenario = scenario.model_copy(update={"link": LinkModel(d_link=scenario.link.d_link)}).with_mode(COR)
            key = scenario.model_dump_json()
            if key in seen:
                continue
            seen.add(key)
            scenarios.append((f"{config_name} {label}".strip(), scenario))
    return scenarios


def _s_grid(scenario: Scenario, thetas_db: Sequence[float] = VERIFY_THETAS_DB) -> np.ndarray:
    return db_to_linear(thetas_db) * scenario.link.d_link ** scenario.alpha


def _paired_margin(diff: np.ndarray) -> float:
    """Наихудшее по столбцам mean + kσ·stderr для парных разностей (должно быть >= 0)."""
    diff = np.atleast_2d(np.asarray(diff, dtype=float).T).T
    n = diff.shape[0]
    stderr = diff.std(axis=0, ddof=1) / np.sqrt(n) if n > 1 else np.zeros(diff.shape[1])
    return float(np.min(diff.mean(axis=0) + K_SIGMA * stderr))


def _prop(name: str, margin: float, detail: Optional[str] = None) -> PropertyResult:
    return PropertyResult(name=name, passed=bool(margin >= 0), margin=float(margin), detail=detail)


# ========== ПОРЯДОК ==========

def _analytic_ordering(label: str, scenario: Scenario) -> PropertyResult:
    s_grid = _s_grid(scenario)
    cor = analytic_curve(scenario.with_mode(COR), s_grid, ANALYTIC_TOL)
    ind = analytic_curve(scenario.with_mode(IND), s_grid, ANALYTIC_TOL)
    report = check_ordering(cor, ind, K_SIGMA)
    margin = float(np.min(report.tolerance - (ind.values - cor.values)))
    return PropertyResult(
        name=f"laplace ordering [{label}]", passed=report.holds, margin=margin,
        detail=f"worst violation {report.worst_violation:.3g}",
    )


def _complete_monotonicity(label: str, scenario: Scenario) -> List[PropertyResult]:
    results = []
    for mode in (COR, IND):
        sc = scenario.with_mode(mode)
        holds = cm_probe(lambda s: analytic_laplace(sc, s, 1e-10), CM_ORDER, CM_GRID, CM_STEP, f_tol=1e-9)
        results.append(_prop(
            f"complete monotonicity [{label}, {mode.value}]", 0.0 if holds else -1.0,
            f"orders 1..{CM_ORDER} at s in {list(CM_GRID)}",
        ))
    return results


def _mc_orderings(label: str, scenario: Scenario, reps: int, seed: int, threads) -> List[PropertyResult]:
    sc_cor, sc_ind = scenario.with_mode(COR), scenario.with_mode(IND)
    link = scenario.link
    i_cor = sample_interference_values(sc_cor, reps, seed, threads)
    i_ind = sample_interference_values(sc_ind, reps, seed, threads)

    thetas = db_to_linear(VERIFY_THETAS_DB)
    coverage_gap = np.column_stack([
        coverage_samples(i_cor, t, link, scenario.noise, scenario.alpha)
        - coverage_samples(i_ind, t, link, scenario.noise, scenario.alpha)
        for t in thetas
    ])
    throughput_gap = (
        throughput_samples(i_cor, link, scenario.noise, scenario.alpha)
        - throughput_samples(i_ind, link, scenario.noise, scenario.alpha)
    )

    theta0 = float(db_to_linear(0.0))
    p_cor = sample_success_probabilities(sc_cor, [theta0], reps, seed, threads)[:, 0]
    p_ind = sample_success_probabilities(sc_ind, [theta0], reps, seed, threads)[:, 0]
    n_grid = np.arange(1, 101)
    delay_gap = np.power.outer(1.0 - p_ind, n_grid) - np.power.outer(1.0 - p_cor, n_grid)

    return [
        _prop(f"coverage ordering [{label}]", _paired_margin(coverage_gap), f"{len(thetas)} thresholds, {reps} reps"),
        _prop(f"throughput ordering [{label}]", _paired_margin(throughput_gap)),
        _prop(f"delay tail ordering [{label}]", _paired_margin(delay_gap), "theta=0 dB, n=1..100"),
    ]


def ordering_suite(reps: int, seed: int, threads: Optional[int] = None) -> List[PropertyResult]:
    """Reference scenarios followed by every bundled one; Boolean has no analytic transform."""
    scenarios = [
        ("grid delta=15", grid_scenario(15.0)),
        ("cluster lambda_d=10", cluster_scenario(10.0)),
        ("boolean lambda_b=0.5 l=5", boolean_scenario()),
    ] + bundled_scenarios()

    results = []
    for label, scenario in scenarios:
        if scenario.shadow.kind != ShadowKind.BOOLEAN:
            results.append(_analytic_ordering(label, scenario))
            results.extend(_complete_monotonicity(label, scenario))
        results.extend(_mc_orderings(label, scenario, reps, seed, threads))
    return results


# ========== МОМЕНТЫ ==========

def _mc_moment_checks(label: str, scenario: Scenario, reps: int, seed: int, threads) -> List[PropertyResult]:
    analytic = analytic_moments(scenario)
    values = sample_interference_values(scenario, reps, seed, threads)
    n = len(values)
    mean, var = float(values.mean()), float(values.var(ddof=1))
    mean_se = np.sqrt(var / n)
    m4 = float(np.mean((values - mean) ** 4))
    var_se = np.sqrt(max(m4 - var ** 2, 0.0) / n)
    return [
        _prop(
            f"MC mean [{label}]", K_SIGMA * mean_se - abs(mean - analytic.mean),
            f"analytic {analytic.mean:.6g}, sample {mean:.6g} ± {mean_se:.2g}",
        ),
        _prop(
            f"MC variance [{label}]", K_SIGMA * var_se - abs(var - analytic.variance),
            f"analytic {analytic.variance:.6g}, sample {var:.6g} ± {var_se:.2g}",
        ),
    ]


def moments_suite(reps: int, seed: int, threads: Optional[int] = None) -> List[PropertyResult]:
    results = []
    scenarios = [(f"grid delta={d:g}", grid_scenario(d)) for d in (1.0, 5.0, 15.0)]
    scenarios += [(f"cluster lambda_d={ld:g}", cluster_scenario(ld)) for ld in (1.0, 5.0, 10.0)]
    for label, scenario in scenarios:
        cor = analytic_moments(scenario.with_mode(COR))
        ind = analytic_moments(scenario.with_mode(IND))
        results.append(_prop(
            f"mean equality [{label}]", 1e-6 * abs(ind.mean) - abs(cor.mean - ind.mean),
            f"mean {ind.mean:.6g}",
        ))
        results.append(_prop(
            f"variance ordering [{label}]", cor.variance - ind.variance + cor.error + ind.error,
            f"gap {cor.variance - ind.variance:.6g}",
        ))

    for mode in (COR, IND):
        results.extend(_mc_moment_checks(f"grid delta=5, {mode.value}", grid_scenario(5.0).with_mode(mode), reps, seed, threads))
        results.extend(
            _mc_moment_checks(f"cluster lambda_d=5, {mode.value}", cluster_scenario(5.0).with_mode(mode), reps, seed, threads)
        )
    return results


# ========== СХОДИМОСТЬ ==========

def _coverage_gap_0db(scenario: Scenario) -> float:
    s = float(_s_grid(scenario, [0.0])[0])
    noise = np.exp(-s * scenario.noise)
    cor = analytic_laplace(scenario.with_mode(COR), s, ANALYTIC_TOL)
    ind = analytic_laplace(scenario.with_mode(IND), s, ANALYTIC_TOL)
    return float(noise * (cor - ind))


def _increasing(name: str, labels: Sequence[str], values: Sequence[float]) -> PropertyResult:
    steps = np.diff(np.asarray(values, dtype=float))
    detail = ", ".join(f"{label}: {value:.4g}" for label, value in zip(labels, values))
    return _prop(name, float(np.min(steps) - 2 * ANALYTIC_TOL), detail)


def convergence_suite(reps: int, seed: int, threads: Optional[int] = None) -> List[PropertyResult]:
    """Analytic only; ``reps`` and ``seed`` are unused but kept for a uniform signature."""
    deltas = [0.2, 1.0, 5.0, 15.0]
    var_gaps = []
    for delta in deltas:
        scenario = grid_scenario(delta)
        var_gaps.append(
            analytic_moments(scenario.with_mode(COR)).variance - analytic_moments(scenario.with_mode(IND)).variance
        )
    results = [_increasing("grid variance gap shrinks as delta decreases", [f"delta={d:g}" for d in deltas], var_gaps)]

    # покрытие при 0 дБ без шара исключения
    grid_deltas = [1.0, 5.0, 15.0]
    results.append(_increasing(
        "grid coverage gap at 0 dB grows with delta",
        [f"delta={d:g}" for d in grid_deltas],
        [_coverage_gap_0db(grid_scenario(d, exclusion_radius=0.0)) for d in grid_deltas],
    ))
    cluster_sizes = [1.0, 5.0, 10.0]
    cluster_gaps = [_coverage_gap_0db(cluster_scenario(ld, exclusion_radius=0.0)) for ld in cluster_sizes]
    results.append(_increasing(
        "cluster coverage gap at 0 dB grows with lambda_d", [f"lambda_d={ld:g}" for ld in cluster_sizes], cluster_gaps,
    ))

    small_gap = _coverage_gap_0db(cluster_scenario(1e-2, exclusion_radius=0.0))
    results.append(_prop(
        "cluster model approaches the independent one as lambda_d -> 0",
        0.1 * abs(cluster_gaps[0]) - abs(small_gap),
        f"gap at lambda_d=0.01: {small_gap:.3g}, at lambda_d=1: {cluster_gaps[0]:.3g}",
    ))
    return results


# ========== ПЕРЕКРЁСТНАЯ ПРОВЕРКА ==========

def _laplace_agreement(label: str, scenario: Scenario, reps: int, seed: int, threads) -> PropertyResult:
    s_grid = _s_grid(scenario, [-10.0, 0.0, 10.0])
    analytic = analytic_curve(scenario, s_grid, ANALYTIC_TOL)
    empirical = empirical_laplace(scenario, s_grid, reps, seed, threads)
    bound = K_SIGMA * np.hypot(empirical.errors, analytic.errors)
    margin = float(np.min(bound - np.abs(empirical.values - analytic.values)))
    return _prop(f"analytic vs empirical Laplace [{label}]", margin, f"{reps} reps")


def _rician_routes(label: str, scenario: Scenario, reps: int, seed: int, threads) -> List[PropertyResult]:
    """Marcum Q route against the Poisson series on the same interference samples."""
    interference = sample_interference_values(scenario, reps, seed, threads)
    thetas = db_to_linear(RICIAN_THETAS_DB)
    noise, alpha = scenario.noise, scenario.alpha

    results = []
    for kappa in RICIAN_KAPPAS:
        link = scenario.link.model_copy(update={"fading": FadingKind.RICIAN, "kappa": kappa})
        margins = []
        for theta in thetas:
            routes = coverage_rician(interference, float(theta), link, noise, alpha)
            bound = K_SIGMA * np.hypot(routes.direct.stderr, routes.series.stderr) + routes.series_remainder
            margins.append(bound + ANALYTIC_TOL - abs(routes.series.value - routes.direct.value))
        results.append(_prop(
            f"Rician series vs Marcum Q [{label}, kappa={kappa:g}]", min(margins),
            f"{len(thetas)} thresholds, {reps} reps",
        ))

    rayleigh = coverage_from_samples(interference, thetas, scenario.link, noise, alpha)
    link = scenario.link.model_copy(update={"fading": FadingKind.RICIAN, "kappa": 0.0})
    worst = 0.0
    for theta, expected in zip(thetas, rayleigh):
        routes = coverage_rician(interference, float(theta), link, noise, alpha)
        worst = max(worst, abs(routes.direct.value - expected.value), abs(routes.series.value - expected.value))
    results.append(_prop(
        f"Rician with kappa=0 is Rayleigh [{label}]", RAYLEIGH_LIMIT_TOL - worst, f"max difference {worst:.2e}",
    ))
    return results


def cross_validation_suite(reps: int, seed: int, threads: Optional[int] = None) -> List[PropertyResult]:
    results = []
    scenarios = [(f"grid delta={d:g}", grid_scenario(d)) for d in (1.0, 5.0, 15.0)]
    scenarios += [(f"cluster lambda_d={ld:g}", cluster_scenario(ld)) for ld in (1.0, 5.0, 10.0)]
    for label, scenario in scenarios:
        for mode in (COR, IND):
            results.append(_laplace_agreement(f"{label}, {mode.value}", scenario.with_mode(mode), reps, seed, threads))

    s_values = [0.01, 0.0625, 0.5, 2.0]
    worst = max(
        abs(laplace_ppp_closed_form(s, 1.0, 4.0) - laplace_ppp_unshadowed(s, 1.0, 4.0, quad_tol=1e-10))
        for s in s_values
    )
    results.append(_prop("closed-form PGFL vs radial quadrature", 1e-6 - worst, f"max difference {worst:.2e}"))

    # пространственное переиспользование: T = 1, поэтому метки i.i.d. в обоих режимах
    unshadowed = grid_scenario(1.0, K=1.0)
    theta = float(db_to_linear(-10.0))
    s = theta * unshadowed.link.d_link ** unshadowed.alpha
    p = sample_success_probabilities(unshadowed.with_mode(IND), [theta], reps, seed, threads)[:, 0]
    inverse = 1.0 / p
    se = inverse.std(ddof=1) / np.sqrt(len(inverse))
    expected = spatial_reuse_inverse(s, 1.0, 4.0, rayleigh_mark_laplace(), exclusion_radius=unshadowed.exclusion_radius)
    results.append(_prop(
        "spatial reuse identity vs E[1/p]", K_SIGMA * se - abs(inverse.mean() - expected),
        f"analytic {expected:.6g}, sample {inverse.mean():.6g} ± {se:.2g}",
    ))

    results.extend(_rician_routes("grid delta=5", grid_scenario(5.0), reps, seed, threads))
    return results


# ========== ВОСПРОИЗВЕДЕНИЕ ==========

REFERENCE_BOOLEAN_POINT = "lambda_b=0.5/l=5"
REFERENCE_BOOLEAN_GAPS = {0.0: 0.23, 10.0: 0.79}
BOOLEAN_GAP_TOL = 0.08

# P[L > 1]: относительное снижение коррелированной модели против независимой
REFERENCE_DELAY_REDUCTION = {"delay_grid": (0.033, 0.117), "delay_cluster": (0.017, 0.076)}
DELAY_REDUCTION_TOL = 0.03
DELAY_N_MAX = 100

REFERENCE_THROUGHPUT = {
    ("throughput_grid", "delta=1"): (1.9370, 1.8942),
    ("throughput_grid", "delta=5"): (2.7300, 1.6358),
    ("throughput_grid", "delta=15"): (2.7737, 1.6101),
    ("throughput_cluster", "lambda_d=1"): (2.0180, 1.9075),
    ("throughput_cluster", "lambda_d=5"): (3.5615, 2.9402),
    ("throughput_cluster", "lambda_d=10"): (5.2018, 4.1043),
}
THROUGHPUT_RTOL = 0.05


def boolean_coverage_gaps(
    reps: int,
    seed: int,
    threads: Optional[int] = None,
    thetas_db: Sequence[float] = tuple(REFERENCE_BOOLEAN_GAPS),
    points: Optional[Sequence[str]] = None,
) -> pd.DataFrame:
    """Coverage gain of exact crossing counts over each independent mean rule.

    One row per (sweep point, rule, threshold) of the bundled Boolean config;
    ``gap`` is correlated / independent − 1 on common random numbers.
    """
    rows = []
    for _, label, scenario in bundled_points("coverage_boolean"):
        if points is not None and label not in points:
            continue
        link, noise, alpha = scenario.link, scenario.noise, scenario.alpha
        i_cor = sample_interference_values(scenario.with_mode(COR), reps, seed, threads)
        for rule in BooleanMeanRule:
            shadow = scenario.shadow.model_copy(update={"independent_mean": rule})
            independent = scenario.model_copy(update={"shadow": shadow, "mode": IND})
            i_ind = sample_interference_values(independent, reps, seed, threads)
            for theta_db in thetas_db:
                theta = float(db_to_linear(theta_db))
                cor = float(coverage_samples(i_cor, theta, link, noise, alpha).mean())
                ind = float(coverage_samples(i_ind, theta, link, noise, alpha).mean())
                rows.append({
                    "point": label, "rule": rule.value, "theta_db": float(theta_db),
                    "correlated": cor, "independent": ind, "gap": cor / ind - 1.0,
                })
    logger.info(f"Boolean coverage gaps: {len(rows)} rows, {reps} reps")
    return pd.DataFrame(rows)


def delay_reductions(n_patterns: int, seed: int, threads: Optional[int] = None, theta_db: float = 0.0) -> pd.DataFrame:
    """P[L > 1] in both modes for every point of the bundled delay configs."""
    theta = float(db_to_linear(theta_db))
    rows = []
    for name in REFERENCE_DELAY_REDUCTION:
        for config_name, label, scenario in bundled_points(name):
            p_cor = sample_success_probabilities(scenario.with_mode(COR), [theta], n_patterns, seed, threads)[:, 0]
            p_ind = sample_success_probabilities(scenario.with_mode(IND), [theta], n_patterns, seed, threads)[:, 0]
            cor, ind = float(np.mean(1.0 - p_cor)), float(np.mean(1.0 - p_ind))
            rows.append({
                "config": config_name, "point": label, "correlated": cor, "independent": ind,
                "reduction": 1.0 - cor / ind,
                "censored": float(np.mean((1.0 - p_cor) ** DELAY_N_MAX)),
            })
    logger.info(f"Delay reductions: {len(rows)} rows, {n_patterns} patterns")
    return pd.DataFrame(rows)


def throughput_table(reps: int, seed: int, threads: Optional[int] = None) -> pd.DataFrame:
    """Shannon throughput of every ``table1`` point in both modes."""
    rows = []
    for config_name, label, scenario in bundled_points("table1"):
        row = {"config": config_name, "point": label}
        for mode in (COR, IND):
            values = sample_interference_values(scenario.with_mode(mode), reps, seed, threads)
            row[mode.value] = shannon_throughput(values, scenario.link, scenario.noise, scenario.alpha).value
        row["gap"] = row[COR.value] / row[IND.value] - 1.0
        rows.append(row)
    return pd.DataFrame(rows)


def _band_margin(value: float, low: float, high: float, tol: float) -> float:
    return tol - max(low - value, value - high, 0.0)


def reproduction_suite(reps: int, seed: int, threads: Optional[int] = None) -> List[PropertyResult]:
    results = []
    gaps = boolean_coverage_gaps(reps, seed, threads, points=[REFERENCE_BOOLEAN_POINT])
    for row in gaps.itertuples(index=False):
        reference = REFERENCE_BOOLEAN_GAPS[row.theta_db]
        results.append(_prop(
            f"boolean coverage gap at {row.theta_db:g} dB [{row.rule}]",
            BOOLEAN_GAP_TOL - abs(row.gap - reference),
            f"measured {row.gap:+.1%}, reference {reference:+.0%}",
        ))

    delays = delay_reductions(reps, seed, threads)
    for row in delays.itertuples(index=False):
        low, high = REFERENCE_DELAY_REDUCTION[row.config]
        results.append(_prop(
            f"delay P[L>1] reduction [{row.config} {row.point}]",
            _band_margin(row.reduction, low, high, DELAY_REDUCTION_TOL),
            f"measured {row.reduction:.2%}, reference {low:.1%}..{high:.1%}",
        ))
    censored = float(delays["censored"].max())
    results.append(_prop(
        f"censored delay mass at n={DELAY_N_MAX} is nonzero", censored - np.finfo(float).tiny, f"max {censored:.3g}",
    ))

    table = throughput_table(reps, seed, threads)
    for row in table.itertuples(index=False):
        ref_cor, ref_ind = REFERENCE_THROUGHPUT[(row.config, row.point)]
        worst = max(abs(row.correlated / ref_cor - 1.0), abs(row.independent / ref_ind - 1.0))
        results.append(_prop(
            f"throughput [{row.config} {row.point}]", THROUGHPUT_RTOL - worst,
            f"measured {row.correlated:.4f}/{row.independent:.4f}, reference {ref_cor}/{ref_ind}",
        ))
    return results


SUITES: Dict[VerifySuite, Callable[..., List[PropertyResult]]] = {
    VerifySuite.ORDERING: ordering_suite,
    VerifySuite.MOMENTS: moments_suite,
    VerifySuite.CONVERGENCE: convergence_suite,
    VerifySuite.CROSS_VALIDATION: cross_validation_suite,
    VerifySuite.REPRODUCTION: reproduction_suite,
}


def run_suite(
    suite: VerifySuite | str,
    reps: Optional[int] = None,
    seed: Optional[int] = None,
    threads: Optional[int] = None,
) -> VerificationReport:
    try:
        suite = VerifySuite(suite)
    except ValueError:
        raise ValueError(f"Unknown verify suite: {suite}. Available: {[s.value for s in VerifySuite]}")
    reps = reps or DEFAULT_VERIFY_REPS
    seed = seed if seed is not None else DEFAULT_SEED

    logger.info(f"Verify suite '{suite.value}': reps={reps}, seed={seed}")
    properties = SUITES[suite](reps, seed, threads)
    report = VerificationReport(
        suite=suite, passed=all(p.passed for p in properties), seed=seed, reps=reps, properties=properties,
    )
    for prop in report.failures:
        logger.warning(f"Property failed: {prop.name} (margin {prop.margin:.3g}) {prop.detail or ''}")
    logger.info(f"Verify suite '{suite.value}': {len(properties) - len(report.failures)}/{len(properties)} passed")
    return report


def assert_passed(report: VerificationReport) -> None:
    if not report.passed:
        names = ", ".join(p.name for p in report.failures)
        raise PropertyFailure(f"suite '{report.suite.value}' failed: {names}")
