"""Tests for the simplex search and the angle optimization of q"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.hardy.closed_forms import Q_MAX, optimal_theta
from src.optimizer.angles import (
    EDGE_EPS,
    MIN_REFINE_GRID,
    boundary_values,
    conjecture_scan,
    critical_residual,
    maximize_q,
    q_at,
    q_surface,
    symmetric_slice,
    theta_grid,
)
from src.optimizer.simplex import nelder_mead
from src.spin.algebra import SpinJ
from src.utils.errors import HardyError

QUOTED_THETA_DEG = {'1/2': 76.35, '1': 103.65, '3/2': 116.815, '2': 124.9}


def rosenbrock(x):
    return (1 - x[0]) ** 2 + 100 * (x[1] - x[0] ** 2) ** 2


class TestNelderMead:

    def test_rosenbrock(self):
        res = nelder_mead(rosenbrock, [-1.2, 1.0], step=0.5, max_iter=5000, restarts=1)
        assert res.converged
        assert_allclose(res.x, [1, 1], atol=1e-6)
        assert res.fun < 1e-12

    def test_maximize_reports_caller_sign(self):
        res = nelder_mead(lambda x: 2 - np.sum((x - 0.3) ** 2), [0.0, 0.0, 0.0], maximize=True)
        assert res.fun == pytest.approx(2.0, abs=1e-12)
        assert_allclose(res.x, 0.3, atol=1e-6)

    def test_path_is_monotone(self):
        res = nelder_mead(lambda x: -np.cos(x[0]) * np.cos(x[1]), [0.7, -0.4], maximize=True, restarts=1)
        assert len(res.path) == res.iterations
        assert np.all(np.diff(res.path) >= -1e-15)

    def test_iteration_cap(self):
        res = nelder_mead(rosenbrock, [-1.2, 1.0], max_iter=5)
        assert not res.converged
        assert res.iterations == 5

    def test_handles_infeasible_region(self):
        res = nelder_mead(lambda x: -np.inf if x[0] < 0 else -(x[0] - 1) ** 2, [0.5], maximize=True)
        assert res.x[0] == pytest.approx(1.0, abs=1e-6)


class TestSurface:

    def test_grid(self):
        grid = theta_grid(5)
        assert grid[0] == pytest.approx(EDGE_EPS)
        assert grid[-1] == pytest.approx(np.pi - EDGE_EPS)
        with pytest.raises(HardyError):
            theta_grid(1)

    def test_surface_is_symmetric(self):
        surface = q_surface('1', 12)
        assert surface.q.shape == (12, 12)
        assert_allclose(surface.q, surface.q.T, atol=1e-12)
        assert np.all(surface.q <= Q_MAX + 1e-12)

    def test_threads_do_not_change_result(self):
        one = q_surface('1/2', 10, threads=1)
        many = q_surface('1/2', 10, threads=4)
        assert np.array_equal(one.q, many.q)

    def test_argmax_near_optimum(self):
        surface = q_surface('1/2', 32)
        i, k = surface.argmax()
        theta = optimal_theta('1/2')
        spacing = surface.thetas[1] - surface.thetas[0]
        assert abs(surface.thetas[i] - theta) <= spacing
        assert abs(surface.thetas[k] - theta) <= spacing


class TestMaximize:

    def test_spin_half(self):
        result = maximize_q('1/2', grid_n=16)
        assert result.q_star == pytest.approx(Q_MAX, abs=1e-9)
        assert np.degrees(result.theta1_star) == pytest.approx(QUOTED_THETA_DEG['1/2'], abs=0.05)
        assert np.degrees(result.theta2_star) == pytest.approx(QUOTED_THETA_DEG['1/2'], abs=0.05)
        assert np.cos(result.theta1_star) == pytest.approx(-2 + np.sqrt(5), abs=1e-6)
        assert result.bound_violations == 0
        assert result.grid_n == 16

    def test_result_is_reproducible(self):
        result = maximize_q('1', grid_n=16)
        assert q_at(SpinJ(2), result.theta1_star, result.theta2_star) == pytest.approx(result.q_star, abs=1e-10)
        assert result.path[-1] == pytest.approx(result.q_star)

    @pytest.mark.slow
    @pytest.mark.parametrize("j", ['1', '3/2', '2'])
    def test_quoted_optima(self, j):
        result = maximize_q(j, grid_n=32)
        assert result.q_star == pytest.approx(Q_MAX, abs=1e-6)
        assert np.degrees(result.theta1_star) == pytest.approx(QUOTED_THETA_DEG[j], abs=0.05)
        assert np.degrees(result.theta2_star) == pytest.approx(QUOTED_THETA_DEG[j], abs=0.05)

    def test_coarse_grid_rejected(self):
        with pytest.raises(HardyError):
            maximize_q('1/2', grid_n=MIN_REFINE_GRID - 1)

    def test_free_phi_gives_same_optimum(self):
        result = maximize_q('1/2', grid_n=16, free_phi=True, seed=4)
        assert result.free_phi
        assert result.q_star == pytest.approx(Q_MAX, abs=1e-9)
        assert 0 <= result.phi1_star < 2 * np.pi


class TestSlicesAndResiduals:

    def test_symmetric_slice(self):
        thetas = np.linspace(0.5, 2.5, 41)
        rows = symmetric_slice('1', thetas)
        assert len(rows) == 41
        best_theta = max(rows, key=lambda r: r[1])[0]
        assert abs(best_theta - optimal_theta('1')) <= thetas[1] - thetas[0]

    def test_critical_residual_vanishes_at_optimum(self, spin):
        theta = optimal_theta(spin)
        assert_allclose(critical_residual(spin, theta, theta), [0, 0], atol=1e-7)

    def test_critical_residual_spin_half_equator(self):
        assert_allclose(critical_residual('1/2', np.pi / 2, np.pi / 2), [-1 / 36, -1 / 36], atol=1e-7)

    def test_step_range(self):
        with pytest.raises(HardyError):
            critical_residual('1/2', 1.0, 1.0, h=1e-2)

    def test_boundary_values_are_small(self):
        rows = boundary_values(SpinJ(1))
        assert len(rows) == 6
        assert all(0 <= q < 1e-2 for _, _, q in rows)


def test_conjecture_scan_beyond_closed_forms():
    report = conjecture_scan(['5/2'], grid_n=16)
    assert report.q_reference == pytest.approx(Q_MAX)
    (row,) = report.rows
    assert row.j == "5/2"
    assert row.q_star <= Q_MAX + 1e-6
    assert row.gap == pytest.approx(abs(row.q_star - Q_MAX))
    assert len(row.boundary) == 6
