"""
Тесты генераторов точечных процессов и геометрических предикатов
"""

import numpy as np
import pytest

from app.exceptions import DivergenceError, ParameterError, StructuralError
from app.models.geometry import SegmentSet, Window
from app.services.geometry import (
    count_crossings,
    crossing_counts,
    grid_cell,
    grid_cells,
    sample_matern,
    sample_ppp,
    sample_segments,
    segments_intersect,
    truncation_radius,
)


class TestTruncationRadius:
    """Радиус окна по допустимой потере средней интерференции"""

    def test_alpha_four(self):
        assert truncation_radius(4.0, 1e-3, 0.25) == pytest.approx(0.25 * np.sqrt(1e3))

    def test_smaller_eps_gives_larger_window(self):
        assert truncation_radius(4.0, 1e-4, 0.5) > truncation_radius(4.0, 1e-3, 0.5)

    def test_alpha_two_diverges(self):
        with pytest.raises(DivergenceError):
            truncation_radius(2.0, 1e-3, 0.5)

    def test_invalid_eps(self):
        with pytest.raises(ParameterError):
            truncation_radius(4.0, 1.5, 0.5)


class TestSamplers:
    """Генераторы PPP, процесса Матерна и отрезков"""

    def test_ppp_points_inside_window(self, window):
        pattern = sample_ppp(1.0, window, 3)
        assert len(pattern) > 0
        assert np.all(window.contains(pattern.points))
        assert not pattern.has_mothers

    def test_ppp_count_matches_intensity(self, window):
        counts = [len(sample_ppp(2.0, window, seed)) for seed in range(50)]
        expected = 2.0 * window.area
        assert abs(np.mean(counts) - expected) < 5 * np.sqrt(expected / 50)

    def test_ppp_reproducible(self, window):
        a = sample_ppp(1.0, window, 11)
        b = sample_ppp(1.0, window, 11)
        np.testing.assert_array_equal(a.points, b.points)

    def test_ppp_zero_intensity(self, window):
        assert len(sample_ppp(0.0, window, 1)) == 0

    def test_ppp_negative_intensity(self, window):
        with pytest.raises(ParameterError):
            sample_ppp(-1.0, window, 1)

    def test_matern_daughters_near_mothers(self, window):
        pattern = sample_matern(0.2, 5.0, 1.0, window, 5)
        assert pattern.has_mothers
        offsets = pattern.points - pattern.mothers[pattern.mother_index]
        assert np.all(np.hypot(offsets[:, 0], offsets[:, 1]) <= 1.0 + 1e-12)
        assert np.all(window.contains(pattern.points))
        assert np.all(np.hypot(pattern.mothers[:, 0], pattern.mothers[:, 1]) <= window.r_max + 1.0 + 1e-12)

    def test_matern_invalid_radius(self, window):
        with pytest.raises(ParameterError):
            sample_matern(0.2, 5.0, 0.0, window, 5)

    def test_segments_orientations_and_centers(self, window):
        segments = sample_segments(0.5, 4.0, window, 9)
        assert np.all((segments.angles >= 0) & (segments.angles < np.pi))
        radii = np.hypot(segments.centers[:, 0], segments.centers[:, 1])
        assert np.all(radii <= window.r_max + 2.0 + 1e-12)
        assert segments.length == 4.0


class TestCrossings:
    """Подсчёт пересечений препятствий со звеньями"""

    def test_perpendicular_bisector(self, single_segment):
        assert count_crossings(single_segment, (0.0, 0.0), (2.0, 0.0)) == 1

    def test_short_link_misses(self, single_segment):
        assert count_crossings(single_segment, (0.0, 0.0), (0.5, 0.0)) == 0

    def test_touching_endpoint_counts(self, single_segment):
        assert count_crossings(single_segment, (0.0, 0.0), (1.0, 0.0)) == 1

    def test_symmetric(self, single_segment):
        assert count_crossings(single_segment, (2.0, 0.0), (0.0, 0.0)) == count_crossings(
            single_segment, (0.0, 0.0), (2.0, 0.0)
        )

    def test_degenerate_link(self, single_segment):
        with pytest.raises(StructuralError):
            count_crossings(single_segment, (1.0, 1.0), (1.0, 1.0))

    def test_additive_over_segment_sets(self, single_segment):
        other = SegmentSet(centers=[[1.5, 0.2]], length=2.0, angles=[np.pi / 2], center_intensity=0.0)
        merged = single_segment.concat(other)
        link = ((0.0, 0.0), (2.0, 0.0))
        assert count_crossings(merged, *link) == count_crossings(single_segment, *link) + count_crossings(other, *link)

    def test_collinear_overlap(self):
        segments = SegmentSet(centers=[[1.0, 0.0]], length=1.0, angles=[0.0], center_intensity=0.0)
        assert bool(segments_intersect(np.array([0.0, 0.0]), np.array([2.0, 0.0]),
                                       np.array([0.5, 0.0]), np.array([1.5, 0.0])))
        assert count_crossings(segments, (0.0, 0.0), (2.0, 0.0)) == 1

    def test_vectorised_counts_match_scalar(self, window):
        segments = sample_segments(0.5, 3.0, window, 21)
        points = np.array([[3.0, 1.0], [-4.0, 2.5], [0.5, -6.0], [7.0, 0.0]])
        counts = crossing_counts(segments, (0.0, 0.0), points, chunk=2)
        expected = [count_crossings(segments, (0.0, 0.0), p) for p in points]
        np.testing.assert_array_equal(counts, expected)

    def test_mean_crossings_calibration(self):
        """E[N] = 2·λ_b·l·d/π для изотропных отрезков"""
        lambda_b, length, d = 0.5, 5.0, 10.0
        window = Window(d)
        counts = np.array([
            crossing_counts(sample_segments(lambda_b, length, window, seed), (0.0, 0.0), [[d, 0.0]])[0]
            for seed in range(2000)
        ])
        expected = 2.0 * lambda_b * length * d / np.pi
        assert abs(counts.mean() - expected) < 4.0 * np.sqrt(expected / len(counts))


class TestGridCells:
    """Номера ячеек сетки"""

    def test_origin_cell_is_centered(self):
        assert grid_cell((0.49, -0.49), 1.0) == (0, 0)

    def test_boundary_goes_up(self):
        assert grid_cell((0.5, 0.0), 1.0) == (1, 0)

    def test_vectorised(self):
        points = np.array([[7.6, 0.0], [-7.6, 2.4], [0.0, 0.0]])
        np.testing.assert_array_equal(grid_cells(points, 5.0), [[2, 0], [-2, 0], [0, 0]])

    def test_invalid_delta(self):
        with pytest.raises(ParameterError):
            grid_cell((0.0, 0.0), 0.0)
