"""
Тесты аналитических преобразований Лапласа, моментов и проверок порядка
"""

import math

import numpy as np
import pytest
from scipy import special

from app.exceptions import DivergenceError, DomainError, ParameterError, StructuralError, UnsupportedError
from app.models.enums import CorrelationMode, LaplaceKind
from app.models.results import LaplaceCurve
from app.models.shadowing import PoissonLogAttenuation
from app.services.analytic import (
    analytic_curve,
    analytic_laplace,
    analytic_moments,
    check_ordering,
    cm_probe,
    laplace_pcp,
    laplace_ppp_closed_form,
    laplace_ppp_grid,
    laplace_ppp_unshadowed,
    mix_expectation,
    moments_pcp,
    moments_ppp_grid,
    rayleigh_mark_laplace,
    spatial_reuse_inverse,
    unshadowed_kernel_integral,
)

COR, IND = CorrelationMode.CORRELATED, CorrelationMode.INDEPENDENT


class TestUnshadowedPPP:
    """PGFL пуассоновского процесса без затенения"""

    def test_full_plane_alpha_four(self):
        # ∫ s/(s + r^4) dx = π² √s / 2
        assert unshadowed_kernel_integral(1.0, 4.0) == pytest.approx(np.pi ** 2 / 2)
        assert laplace_ppp_closed_form(4.0, 1.0, 4.0) == pytest.approx(np.exp(-np.pi ** 2))

    @pytest.mark.parametrize("s", [0.01, 0.5, 3.0])
    def test_quadrature_matches_closed_form(self, s):
        assert laplace_ppp_unshadowed(s, 1.0, 4.0, 0.25, quad_tol=1e-10) == pytest.approx(
            laplace_ppp_closed_form(s, 1.0, 4.0, 0.25), rel=1e-7
        )

    def test_zero_argument(self):
        assert laplace_ppp_closed_form(0.0, 1.0, 4.0) == 1.0
        assert laplace_ppp_unshadowed(0.0, 1.0, 4.0) == 1.0

    def test_alpha_two_diverges(self):
        with pytest.raises(DivergenceError):
            unshadowed_kernel_integral(1.0, 2.0)

    def test_negative_argument(self):
        with pytest.raises(DomainError):
            laplace_ppp_closed_form(-1.0, 1.0, 4.0)


class TestMixExpectation:
    """E_T[1/(1 + aT)]"""

    def test_zero_argument(self):
        assert mix_expectation(0.0, PoissonLogAttenuation(K=0.1, mu=2.0)) == pytest.approx(1.0)

    def test_no_shadow(self):
        assert mix_expectation(3.0, PoissonLogAttenuation(K=0.1, mu=0.0)) == pytest.approx(0.25)
        assert mix_expectation(3.0, PoissonLogAttenuation(K=1.0, mu=5.0)) == pytest.approx(0.25)

    def test_matches_long_sum(self):
        r = np.arange(51)
        direct = np.sum(np.exp(-1.0) / special.factorial(r) / (1.0 + 0.1 ** r))
        assert mix_expectation(1.0, PoissonLogAttenuation(K=0.1, mu=1.0), 1e-14) == pytest.approx(direct, abs=1e-12)

    def test_shadow_increases_expectation(self):
        assert mix_expectation(3.0, PoissonLogAttenuation(K=0.1, mu=2.0)) > 0.25

    def test_negative_argument(self):
        with pytest.raises(DomainError):
            mix_expectation(-1.0, PoissonLogAttenuation(K=0.1, mu=1.0))


class TestGridLaplace:
    """Сеточное затенение: два режима"""

    def test_unit_K_collapses_modes(self):
        closed = laplace_ppp_closed_form(1.0, 1.0, 4.0, 0.25)
        for mode in (COR, IND):
            assert laplace_ppp_grid(1.0, 1.0, 4.0, 5.0, 1.0, 1.0, mode, exclusion_radius=0.25) == pytest.approx(closed)

    def test_correlated_dominates_independent(self):
        cor = laplace_ppp_grid(1.0, 1.0, 4.0, 5.0, 1.0, 0.1, COR, exclusion_radius=0.25)
        ind = laplace_ppp_grid(1.0, 1.0, 4.0, 5.0, 1.0, 0.1, IND, exclusion_radius=0.25)
        assert 1.0 >= cor >= ind
        # тени только ослабляют интерференцию
        assert ind >= laplace_ppp_closed_form(1.0, 1.0, 4.0, 0.25)

    def test_scenario_dispatch(self, grid_scenario):
        scenario = grid_scenario(delta=5.0)
        assert analytic_laplace(scenario, 0.0) == 1.0
        assert analytic_laplace(scenario, 1.0) == pytest.approx(
            laplace_ppp_grid(1.0, 1.0, 4.0, 5.0, 1.0, 0.1, COR, exclusion_radius=0.25)
        )

    def test_curve_is_decreasing(self, grid_scenario):
        curve = analytic_curve(grid_scenario(delta=5.0, mode=IND), [0.0, 0.1, 1.0, 10.0])
        assert curve.kind == LaplaceKind.ANALYTIC
        assert curve.values[0] == 1.0
        assert np.all(np.diff(curve.values) < 0)
        assert np.all(curve.errors > 0)

    def test_invalid_delta(self):
        with pytest.raises(ParameterError):
            laplace_ppp_grid(1.0, 1.0, 4.0, 0.0, 1.0, 0.1, COR)

    def test_boolean_has_no_analytic_form(self, boolean_scenario):
        with pytest.raises(UnsupportedError):
            analytic_laplace(boolean_scenario(), 1.0)
        with pytest.raises(UnsupportedError):
            analytic_moments(boolean_scenario())


class TestClusterLaplace:
    """Кластерный процесс с одной тенью на кластер"""

    def test_unit_K_collapses_modes(self):
        cor = laplace_pcp(1.0, 0.2, 5.0, 1.0, 4.0, 1.0, 1.0, COR, quad_tol=1e-6, exclusion_radius=0.25)
        ind = laplace_pcp(1.0, 0.2, 5.0, 1.0, 4.0, 1.0, 1.0, IND, quad_tol=1e-6, exclusion_radius=0.25)
        assert cor == pytest.approx(ind, abs=1e-6)

    def test_correlated_dominates_independent(self):
        cor = laplace_pcp(1.0, 0.2, 5.0, 1.0, 4.0, 1.0, 0.1, COR, quad_tol=1e-6, exclusion_radius=0.25)
        ind = laplace_pcp(1.0, 0.2, 5.0, 1.0, 4.0, 1.0, 0.1, IND, quad_tol=1e-6, exclusion_radius=0.25)
        assert 1.0 >= cor >= ind > 0.0

    def test_zero_argument(self, cluster_scenario):
        assert analytic_laplace(cluster_scenario(), 0.0) == 1.0

    def test_invalid_radius(self):
        with pytest.raises(ParameterError):
            laplace_pcp(1.0, 0.2, 5.0, 0.0, 4.0, 1.0, 0.1, COR)


class TestMoments:
    """Среднее совпадает, дисперсия в коррелированном режиме больше"""

    def test_unshadowed_closed_form(self):
        pair = moments_ppp_grid(1.0, 4.0, 5.0, 1.0, 1.0, IND, exclusion_radius=0.25)
        assert pair.mean == pytest.approx(16 * np.pi)
        assert pair.variance == pytest.approx(2 * 2 * np.pi * 0.25 ** -6 / 6)

    def test_grid_mean_equal_variance_ordered(self):
        cor = moments_ppp_grid(1.0, 4.0, 5.0, 1.0, 0.1, COR, exclusion_radius=0.25)
        ind = moments_ppp_grid(1.0, 4.0, 5.0, 1.0, 0.1, IND, exclusion_radius=0.25)
        assert cor.mean == pytest.approx(ind.mean, rel=1e-12)
        assert cor.variance > ind.variance
        assert cor.mean < 16 * np.pi

    def test_cluster_mean_equal_variance_ordered(self, cluster_scenario):
        cor = analytic_moments(cluster_scenario(lambda_d=5.0), quad_tol=1e-8)
        ind = analytic_moments(cluster_scenario(lambda_d=5.0, mode=IND), quad_tol=1e-8)
        assert cor.mean == pytest.approx(ind.mean, rel=1e-6)
        assert cor.variance > ind.variance

    def test_cluster_unit_K_mean_is_unshadowed(self):
        # без теней кластеризация не меняет среднее: λ ∫_{‖x‖>ε} ‖x‖^{-4} dx = 16π
        cor = moments_pcp(0.2, 5.0, 1.0, 4.0, 1.0, 1.0, COR, exclusion_radius=0.25, quad_tol=1e-8)
        ind = moments_pcp(0.2, 5.0, 1.0, 4.0, 1.0, 1.0, IND, exclusion_radius=0.25, quad_tol=1e-8)
        assert cor.mean == pytest.approx(16 * np.pi, rel=1e-4)
        assert cor.variance == pytest.approx(ind.variance, rel=1e-8)

    def test_cluster_no_exclusion_diverges(self):
        with pytest.raises(DivergenceError):
            moments_pcp(0.2, 5.0, 1.0, 4.0, 1.0, 0.1, COR, exclusion_radius=0.0)

    def test_no_exclusion_diverges(self):
        with pytest.raises(DivergenceError):
            moments_ppp_grid(1.0, 4.0, 5.0, 1.0, 0.1, COR, exclusion_radius=0.0)


class TestSpatialReuse:
    """E[1/L_{I|Φ}(s)] для независимых меток"""

    def test_zero_argument(self):
        assert spatial_reuse_inverse(0.0, 1.0, 4.0, rayleigh_mark_laplace()) == 1.0

    def test_rayleigh_with_exclusion(self):
        # 1 - 1/L_G(c) = -c, интеграл берётся явно
        value = spatial_reuse_inverse(0.1, 1.0, 4.0, rayleigh_mark_laplace(), exclusion_radius=0.5)
        assert value == pytest.approx(np.exp(2 * np.pi * 0.1 * 0.5 ** -2 / 2), rel=1e-6)

    def test_jensen_direction(self):
        value = spatial_reuse_inverse(0.1, 1.0, 4.0, rayleigh_mark_laplace(), exclusion_radius=0.5)
        assert value >= 1.0 / laplace_ppp_closed_form(0.1, 1.0, 4.0, 0.5)

    def test_rayleigh_without_exclusion_diverges(self):
        assert spatial_reuse_inverse(0.1, 1.0, 4.0, rayleigh_mark_laplace()) == math.inf

    def test_correlated_marks_unsupported(self):
        with pytest.raises(UnsupportedError):
            spatial_reuse_inverse(0.1, 1.0, 4.0, rayleigh_mark_laplace(), 0.5, mode=COR)


class TestOrdering:
    """Поточечное сравнение кривых"""

    @staticmethod
    def _curve(values, errors=1e-6):
        return LaplaceCurve(s_grid=[0.1, 1.0, 10.0], values=values, kind=LaplaceKind.ANALYTIC, errors=errors)

    def test_identical_curves(self):
        report = check_ordering(self._curve([0.9, 0.5, 0.1]), self._curve([0.9, 0.5, 0.1]))
        assert report.holds
        assert report.worst_violation == 0.0

    def test_margin_is_signed(self):
        report = check_ordering(self._curve([0.9, 0.6, 0.2]), self._curve([0.8, 0.5, 0.15]))
        assert report.holds
        assert report.worst_violation == pytest.approx(-0.05)

    def test_violation_detected(self):
        report = check_ordering(self._curve([0.9, 0.4, 0.1]), self._curve([0.9, 0.5, 0.1]))
        assert not report.holds
        assert report.worst_violation == pytest.approx(0.1)

    def test_violation_within_error(self):
        report = check_ordering(self._curve([0.9, 0.49, 0.1], 0.01), self._curve([0.9, 0.5, 0.1], 0.01))
        assert report.holds

    def test_mismatched_grids(self):
        other = LaplaceCurve(s_grid=[0.1, 2.0, 10.0], values=[0.9, 0.5, 0.1], kind=LaplaceKind.ANALYTIC, errors=0.0)
        with pytest.raises(StructuralError):
            check_ordering(self._curve([0.9, 0.5, 0.1]), other)


class TestCompleteMonotonicity:
    """Конечно-разностная проверка полной монотонности"""

    def test_exponential(self):
        assert cm_probe(lambda x: np.exp(-2 * x), 4, [0.5, 1.0, 2.0], 1e-2)

    def test_log_ratio(self):
        assert cm_probe(lambda x: np.log1p(1.0 / (x + 1.0)), 3, [0.5, 1.0, 2.0], 1e-2)

    def test_sine_fails(self):
        assert not cm_probe(np.sin, 2, [0.5, 1.0, 2.0], 1e-2)

    def test_invalid_step(self):
        with pytest.raises(ParameterError):
            cm_probe(np.exp, 2, [1.0], 0.0)
