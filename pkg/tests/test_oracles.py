"""
Производные оракулы: аналитика против Монте-Карло, перебор пересечений,
стационарность и маргинальные законы теней
"""

import numpy as np
import pytest
from scipy import stats

from app.models.enums import CorrelationMode
from app.models.geometry import PointPattern, SegmentSet, Window
from app.schemas.scenario import ClusterShadow, GridShadow
from app.services import verification
from app.services.analytic import analytic_laplace, analytic_moments, rayleigh_mark_laplace, spatial_reuse_inverse
from app.services.geometry import count_crossings, sample_matern, sample_ppp
from app.services.metrics import db_to_linear
from app.services.shadowing import assign_cluster, assign_grid
from app.services.simulate import sample_interference_values, sample_success_probabilities

COR, IND = CorrelationMode.CORRELATED, CorrelationMode.INDEPENDENT
SEED = 11


def _orient(p, q, r) -> float:
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def _brute_force_crossings(segments: SegmentSet, a, b) -> int:
    """Строгий тест ориентаций по каждому отрезку (для точек общего положения)."""
    starts, ends = segments.endpoints()
    count = 0
    for p, q in zip(starts, ends):
        if _orient(a, b, p) * _orient(a, b, q) < 0 and _orient(p, q, a) * _orient(p, q, b) < 0:
            count += 1
    return count


def _counts_in_disk(points: np.ndarray, center, radius: float) -> int:
    return int(np.sum(np.hypot(points[:, 0] - center[0], points[:, 1] - center[1]) < radius))


class TestCrossingOracle:
    """Подсчёт пересечений против перебора"""

    def test_random_sets_match_brute_force(self):
        rng = np.random.default_rng(SEED)
        for _ in range(300):
            n = int(rng.integers(1, 9))
            segments = SegmentSet(
                centers=rng.uniform(-3.0, 3.0, (n, 2)), length=2.0,
                angles=rng.uniform(0.0, np.pi, n), center_intensity=0.0,
            )
            a, b = rng.uniform(-4.0, 4.0, 2), rng.uniform(-4.0, 4.0, 2)
            assert count_crossings(segments, a, b) == _brute_force_crossings(segments, a, b)


@pytest.mark.slow
class TestPointProcessOracles:
    """Интенсивность и стационарность генераторов"""

    def test_matern_intensity(self):
        window = Window(10.0)
        counts = np.array([len(sample_matern(0.2, 5.0, 1.0, window, seed)) for seed in range(2000)])
        density = counts / window.area
        stderr = density.std(ddof=1) / np.sqrt(len(density))
        assert abs(density.mean() - 1.0) < 3 * stderr

    @pytest.mark.parametrize("sampler", ["ppp", "matern"])
    def test_congruent_regions_have_equal_counts(self, sampler):
        window = Window(10.0)
        diffs = []
        for seed in range(2000):
            if sampler == "ppp":
                pattern = sample_ppp(1.0, window, seed)
            else:
                pattern = sample_matern(0.2, 5.0, 1.0, window, seed)
            diffs.append(
                _counts_in_disk(pattern.points, (5.0, 0.0), 3.0) - _counts_in_disk(pattern.points, (-5.0, 0.0), 3.0)
            )
        diffs = np.asarray(diffs, dtype=float)
        assert abs(diffs.mean()) < 3 * diffs.std(ddof=1) / np.sqrt(len(diffs))


@pytest.mark.slow
class TestShadowLawOracles:
    """Маргинальный закон тени одинаков в обоих режимах"""

    def test_cluster_independent_mean_is_poisson_pgf(self):
        n = 20000
        pattern = PointPattern(
            points=np.tile([[2.0, 0.5]], (n, 1)), window=Window(10.0),
            mother_index=np.zeros(n, dtype=np.int64), mothers=np.array([[2.0, 0.0]]),
        )
        shadowed = assign_cluster(pattern, ClusterShadow(lambda_b=1.0, K=0.1), IND, 1, point_seed=2)
        stderr = shadowed.attenuation.std() / np.sqrt(n)
        assert abs(shadowed.attenuation.mean() - np.exp(-2.0 * 0.9)) < 4 * stderr

    def test_grid_cell_law_same_in_both_modes(self):
        model = GridShadow(lambda_b=1.0, K=0.5, delta=5.0)
        single = PointPattern(points=[[5.0, 0.0]], window=Window(10.0))
        correlated = np.array([assign_grid(single, model, COR, seed).attenuation[0] for seed in range(3000)])
        tiled = PointPattern(points=np.tile([[5.0, 0.0]], (3000, 1)), window=Window(10.0))
        independent = assign_grid(tiled, model, IND, 1, point_seed=7).attenuation
        assert stats.ks_2samp(correlated, independent).pvalue > 1e-3

    def test_cluster_law_same_in_both_modes(self):
        model = ClusterShadow(lambda_b=1.0, K=0.1)
        mothers = np.array([[2.0, 0.0]])
        single = PointPattern(points=[[2.0, 0.5]], window=Window(10.0), mother_index=[0], mothers=mothers)
        correlated = np.array([assign_cluster(single, model, COR, seed).attenuation[0] for seed in range(3000)])
        tiled = PointPattern(
            points=np.tile([[2.0, 0.5]], (3000, 1)), window=Window(10.0),
            mother_index=np.zeros(3000, dtype=np.int64), mothers=mothers,
        )
        independent = assign_cluster(tiled, model, IND, 1, point_seed=7).attenuation
        assert stats.ks_2samp(correlated, independent).pvalue > 1e-3


@pytest.mark.slow
class TestAnalyticOracles:
    """Аналитические формулы против Монте-Карло на эталонных сценариях"""

    @pytest.mark.parametrize("mode", [COR, IND])
    @pytest.mark.parametrize("label,factory,value", [
        ("grid delta=5", verification.grid_scenario, 5.0),
        ("cluster lambda_d=5", verification.cluster_scenario, 5.0),
    ])
    def test_laplace_matches_empirical(self, label, factory, value, mode):
        result = verification._laplace_agreement(label, factory(value).with_mode(mode), 4000, SEED, 1)
        assert result.passed, result.margin

    @pytest.mark.parametrize("mode", [COR, IND])
    @pytest.mark.parametrize("factory,value", [
        (verification.grid_scenario, 5.0),
        (verification.cluster_scenario, 5.0),
    ])
    def test_moments_match_sample(self, factory, value, mode):
        scenario = factory(value).with_mode(mode)
        analytic = analytic_moments(scenario)
        values = sample_interference_values(scenario, 20000, SEED, 1)
        n = len(values)
        mean, var = values.mean(), values.var(ddof=1)
        var_se = np.sqrt(np.mean((values - mean) ** 4) - var ** 2) / np.sqrt(n)
        assert abs(mean - analytic.mean) < 3 * np.sqrt(var / n)
        assert abs(var - analytic.variance) < 3 * var_se + 0.05 * analytic.variance

    def test_mean_success_probability_is_laplace(self):
        scenario = verification.grid_scenario(5.0)
        thetas = db_to_linear([-10.0, 0.0, 10.0])
        p = sample_success_probabilities(scenario, thetas, 4000, SEED, 1)
        stderr = p.std(axis=0, ddof=1) / np.sqrt(len(p))
        for k, theta in enumerate(thetas):
            expected = analytic_laplace(scenario, float(theta) * scenario.link.d_link ** scenario.alpha, 1e-10)
            assert abs(p[:, k].mean() - expected) < 3 * stderr[k] + 1e-8

    def test_spatial_reuse_inverse_matches_sample(self):
        scenario = verification.grid_scenario(1.0, K=1.0).with_mode(IND)
        theta = float(db_to_linear(-10.0))
        s = theta * scenario.link.d_link ** scenario.alpha
        expected = spatial_reuse_inverse(s, 1.0, 4.0, rayleigh_mark_laplace(), exclusion_radius=0.25)
        # E[1/p] = exp(2πλ s ∫_{0.25}^∞ r^{-3} dr) при релеевских замираниях
        assert expected == pytest.approx(np.exp(0.1 * np.pi), rel=1e-6)
        inverse = 1.0 / sample_success_probabilities(scenario, [theta], 4000, SEED, 1)[:, 0]
        assert abs(inverse.mean() - expected) < 3 * inverse.std(ddof=1) / np.sqrt(len(inverse))


@pytest.mark.slow
class TestReproductions:
    """Измеренные значения на встроенных конфигурациях (см. DESIGN.md)"""

    def test_boolean_coverage_gaps(self):
        frame = verification.boolean_coverage_gaps(2000, SEED, 1, points=[verification.REFERENCE_BOOLEAN_POINT])
        gap = frame.set_index(["rule", "theta_db"])["gap"]
        assert -0.04 <= gap[("corrected", 0.0)] <= 0.10
        assert 0.05 <= gap[("corrected", 10.0)] <= 0.40
        assert gap[("length_free", 0.0)] > 0.4
        assert gap[("length_free", 10.0)] > 2.0
        correlated = frame[frame["rule"] == "corrected"].set_index("theta_db")["correlated"]
        assert correlated[0.0] == pytest.approx(0.59, abs=0.04)
        assert correlated[10.0] == pytest.approx(0.37, abs=0.04)

    def test_delay_reductions(self):
        frame = verification.delay_reductions(3000, SEED, 1)
        reduction = frame.set_index(["config", "point"])["reduction"]
        assert abs(reduction[("delay_grid", "delta=1")]) < 0.02
        assert abs(reduction[("delay_grid", "delta=5")]) < 0.005
        assert abs(reduction[("delay_grid", "delta=15")]) < 0.005
        assert abs(reduction[("delay_cluster", "lambda_d=1")]) < 0.03
        assert 0.04 <= reduction[("delay_cluster", "lambda_d=10")] <= 0.14
        assert reduction[("delay_cluster", "lambda_d=10")] > reduction[("delay_cluster", "lambda_d=1")]
        assert frame["censored"].max() > 0

    def test_throughput_table(self):
        frame = verification.throughput_table(3000, SEED, 1)
        table = frame.set_index(["config", "point"])
        assert len(table) == 6
        for delta in ("delta=1", "delta=5", "delta=15"):
            assert abs(table.loc[("throughput_grid", delta), "gap"]) < 0.03
        for delta in ("delta=5", "delta=15"):
            reference, _ = verification.REFERENCE_THROUGHPUT[("throughput_grid", delta)]
            assert table.loc[("throughput_grid", delta), "correlated"] < 0.5 * reference
        cluster = table.loc["throughput_cluster", "gap"]
        assert cluster.min() > -0.02
        assert cluster["lambda_d=10"] > cluster["lambda_d=1"]
