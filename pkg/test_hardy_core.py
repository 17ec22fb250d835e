"""Tests for condition states, Hardy states, closed forms and rank laws"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.hardy.checks import appendix_a_check, rank_report
from src.hardy.closed_forms import (
    Q_MAX,
    nested_overlap_q,
    optimal_theta,
    q_closed_form,
    q_coefficient_form,
    q_gradient_spin_half,
    q_overlap_form,
    q_symmetric_closed_form,
)
from src.hardy.gram_schmidt import gram_schmidt, numerical_rank, project_out
from src.hardy.scenario import BipartiteState, HardyScenario, condition_states
from src.hardy.states import (
    condition_probabilities,
    general_hardy_state,
    hardy_family,
    hardy_state_max,
    q_from_projections,
    q_value,
    random_family_coefficients,
    sample_hardy_subspace,
    verify_hardy_conditions,
)
from src.optimizer.angles import q_at
from src.spin.algebra import Direction, SpinJ
from src.spin.tables import coefficient_table
from src.utils.errors import (
    DegenerateScenarioError,
    HardyError,
    InvalidCoefficientsError,
    UnsupportedSpinError,
)

# q of psi_max at theta1 = theta2 = pi/2
Q_EQUATOR = {
    '1/2': 1 / 12,
    '1': 2.25 / 28,
    '3/2': 49 / 960,
    '2': 225 / 7936,
}
QUOTED_THETA_DEG = {'1/2': 76.35, '1': 103.65, '3/2': 116.815, '2': 124.9}


class TestGramSchmidt:

    def test_orthonormal_rows(self, rng):
        vectors = rng.normal(size=(4, 6)) + 1j * rng.normal(size=(4, 6))
        ortho, rank = gram_schmidt(vectors)
        assert rank == 4
        assert_allclose(ortho.conj() @ ortho.T, np.eye(4), atol=1e-12)

    def test_drops_dependent_vectors(self, rng):
        a, b = rng.normal(size=(2, 5))
        assert numerical_rank([a, b, 2 * a - 3j * b, np.zeros(5)]) == 2

    def test_respects_fixed_basis(self, rng):
        fixed, _ = gram_schmidt(rng.normal(size=(2, 5)))
        ortho, rank = gram_schmidt(rng.normal(size=(3, 5)), basis=fixed)
        assert rank == 3
        assert_allclose(fixed.conj() @ ortho.T, 0, atol=1e-12)

    def test_project_out(self, rng):
        ortho, _ = gram_schmidt(rng.normal(size=(2, 4)))
        w = project_out(rng.normal(size=4), ortho)
        assert_allclose(ortho.conj() @ w, 0, atol=1e-14)

    def test_rejects_empty_and_ragged_input(self):
        with pytest.raises(HardyError):
            gram_schmidt([])
        with pytest.raises(HardyError):
            gram_schmidt([np.ones(2), np.ones(3)])


class TestConditionStates:

    def test_count_and_norm(self, generic_scenario):
        conditions = condition_states(generic_scenario)
        assert len(conditions) == 2 * generic_scenario.spin.two_j + 2
        for state in conditions.states:
            assert state.is_normalized()

    def test_target_is_lowest_z_product(self, generic_scenario):
        d = generic_scenario.dim
        target = condition_states(generic_scenario).target.amplitudes
        assert abs(target[d * d - 1]) == pytest.approx(1.0)

    def test_state_length_checked(self):
        with pytest.raises(HardyError):
            BipartiteState(np.ones(5), SpinJ(1))


class TestHardyStateMax:

    def test_satisfies_conditions(self, generic_scenario):
        report = verify_hardy_conditions(generic_scenario, hardy_state_max(generic_scenario))
        assert report.passed
        assert report.max_zero_probability < 1e-18
        assert report.q > 1e-12

    def test_normalized_with_real_target_overlap(self, generic_scenario):
        psi = hardy_state_max(generic_scenario)
        assert psi.is_normalized()
        overlap = condition_states(generic_scenario).target.overlap(psi)
        assert abs(overlap.imag) < 1e-14
        assert overlap.real > 0

    def test_q_matches_projection_sum(self, generic_scenario):
        q = q_value(generic_scenario, hardy_state_max(generic_scenario))
        assert q == pytest.approx(q_from_projections(generic_scenario), abs=1e-12)

    @pytest.mark.parametrize("j, expected", sorted(Q_EQUATOR.items()))
    def test_q_at_equator(self, j, expected):
        sc = HardyScenario.from_angles(j, np.pi / 2, np.pi / 2)
        assert q_value(sc, hardy_state_max(sc)) == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("j", ['1/2', '1', '3/2', '2', '5/2', '3'])
    def test_optimal_angles_reach_bound(self, j):
        theta = optimal_theta(j)
        assert q_at(SpinJ.parse(j), theta, theta) == pytest.approx(Q_MAX, abs=1e-12)

    def test_phi_invariance(self, spin):
        base = q_at(spin, 1.2, 2.0)
        assert q_at(spin, 1.2, 2.0, 0.7, 4.1) == pytest.approx(base, abs=1e-13)

    def test_degenerate_near_the_pole(self):
        sc = HardyScenario.from_angles('2', 1e-4, 1e-4)
        with pytest.raises(DegenerateScenarioError):
            hardy_state_max(sc)
        assert q_at(SpinJ(4), 1e-4, 1e-4) == 0.0


class TestClosedForms:

    def test_q_max_value(self):
        assert Q_MAX == pytest.approx(0.0901699, abs=1e-7)

    @pytest.mark.parametrize("j", ['1/2', '1', '3/2', '2'])
    def test_pipeline_matches_closed_form(self, j, rng):
        for t1, t2, p1, p2 in zip(*rng.uniform(0.1, np.pi - 0.1, (2, 20)), *rng.uniform(0, 6, (2, 20))):
            sc = HardyScenario.from_angles(j, t1, t2, p1, p2)
            q = q_value(sc, hardy_state_max(sc))
            assert q == pytest.approx(q_closed_form(j, t1, t2), abs=1e-10)
            assert q == pytest.approx(q_overlap_form(j, t1, t2), abs=1e-10)

    @pytest.mark.parametrize("j", ['1/2', '1', '3/2'])
    def test_coefficient_form(self, j, rng):
        for t1, t2 in rng.uniform(0.1, np.pi - 0.1, (20, 2)):
            sc = HardyScenario.from_angles(j, t1, t2, 0.3, 1.7)
            assert q_coefficient_form(j, sc) == pytest.approx(q_closed_form(j, t1, t2), abs=1e-10)

    def test_nested_form_spin_half_equator(self):
        table = coefficient_table(SpinJ(1), Direction(np.pi / 2))
        assert nested_overlap_q(table[:, -1], table[:, -1]) == pytest.approx(1 / 12, abs=1e-15)

    def test_spin_two_diagonal_form(self):
        for theta in np.linspace(0.2, 3.0, 12):
            assert q_symmetric_closed_form('2', theta) == pytest.approx(q_closed_form('2', theta, theta), abs=1e-13)

    def test_closed_form_asymmetric_spin_two(self):
        # theta1 = pi/2, theta2 = pi/3 and the swap
        expected = 3825 / 1110016
        assert q_closed_form('2', np.pi / 2, np.pi / 3) == pytest.approx(expected, abs=1e-14)
        assert q_closed_form('2', np.pi / 3, np.pi / 2) == pytest.approx(expected, abs=1e-14)

    def test_unsupported_spins(self):
        with pytest.raises(UnsupportedSpinError):
            q_closed_form('5/2', 1.0, 1.0)
        with pytest.raises(UnsupportedSpinError):
            q_symmetric_closed_form('1', 1.0)
        with pytest.raises(UnsupportedSpinError):
            q_coefficient_form('2', HardyScenario.from_angles('2', 1.0, 1.0))
        with pytest.raises(UnsupportedSpinError):
            q_coefficient_form('1', HardyScenario.from_angles('1/2', 1.0, 1.0))

    def test_spin_half_gradient(self):
        assert_allclose(q_gradient_spin_half(np.pi / 2, np.pi / 2), [-1 / 36, -1 / 36], atol=1e-15)
        theta = optimal_theta('1/2')
        assert_allclose(q_gradient_spin_half(theta, theta), [0, 0], atol=1e-12)

    @pytest.mark.parametrize("j, degrees", sorted(QUOTED_THETA_DEG.items()))
    def test_optimal_theta(self, j, degrees):
        assert np.degrees(optimal_theta(j)) == pytest.approx(degrees, abs=0.05)

    def test_algebraic_cosines(self):
        assert np.cos(optimal_theta('1/2')) == pytest.approx(-2 + np.sqrt(5), abs=1e-12)
        assert np.cos(optimal_theta('1')) == pytest.approx(2 - np.sqrt(5), abs=1e-12)
        assert np.cos(optimal_theta('3/2')) == pytest.approx(1 - 2 ** (2 / 3) * (3 - np.sqrt(5)) ** (1 / 3),
                                                             abs=1e-12)


class TestHardyFamily:

    def test_sprime_dimension(self, generic_scenario):
        fam = hardy_family(generic_scenario)
        assert fam.sprime_dim == generic_scenario.spin.two_j ** 2 - 1

    def test_sprime_orthogonal_to_psi_max_and_target(self, generic_scenario):
        fam = hardy_family(generic_scenario)
        if fam.sprime_dim == 0:
            return
        target = condition_states(generic_scenario).target.amplitudes
        assert_allclose(fam.sprime_basis.conj() @ fam.psi_max.amplitudes, 0, atol=1e-12)
        assert_allclose(fam.sprime_basis.conj() @ target, 0, atol=1e-12)

    def test_general_state_scales_q(self, generic_scenario, rng):
        fam = hardy_family(generic_scenario)
        q_max = q_value(generic_scenario, fam.psi_max)
        for _ in range(10):
            v0, v = random_family_coefficients(fam, rng)
            state = general_hardy_state(fam, v0, v)
            report = verify_hardy_conditions(generic_scenario, state)
            assert report.passed
            assert report.q == pytest.approx(abs(v0) ** 2 * q_max, abs=1e-12)

    def test_rejects_bad_coefficients(self, generic_scenario):
        fam = hardy_family(generic_scenario)
        with pytest.raises(InvalidCoefficientsError):
            general_hardy_state(fam, 0.0)
        with pytest.raises(InvalidCoefficientsError):
            general_hardy_state(fam, 1.0, np.ones(fam.sprime_dim + 1))

    def test_subspace_samples_meet_zero_conditions(self, generic_scenario, rng):
        state = sample_hardy_subspace(generic_scenario, rng)
        probs = condition_probabilities(generic_scenario, state)
        assert np.max(probs[:-1]) < 1e-18

    def test_psi_max_has_largest_q_in_subspace(self, generic_scenario, rng):
        q_max = q_value(generic_scenario, hardy_state_max(generic_scenario))
        for _ in range(50):
            w = sample_hardy_subspace(generic_scenario, rng)
            assert q_value(generic_scenario, w) <= q_max + 1e-12

    def test_spin_one_equator_with_vanishing_overlap(self, rng):
        sc = HardyScenario.from_angles('1', np.pi / 2, np.pi / 2)
        # <A1=0|A2=0> vanishes only here
        assert abs(sc.basis_a1.vectors[1].conj() @ sc.basis_z.vectors[1]) < 1e-12
        fam = hardy_family(sc)
        assert fam.sprime_dim == 3
        assert verify_hardy_conditions(sc, fam.psi_max).q == pytest.approx(Q_EQUATOR['1'], abs=1e-12)
        for _ in range(20):
            state = general_hardy_state(fam, *random_family_coefficients(fam, rng))
            assert verify_hardy_conditions(sc, state).passed


class TestVerifyHardyConditions:

    def test_target_state_fails(self, generic_scenario):
        target = condition_states(generic_scenario).target
        report = verify_hardy_conditions(generic_scenario, target)
        assert not report.passed
        assert report.q == pytest.approx(1.0)

    def test_positivity_threshold(self, generic_scenario):
        report = verify_hardy_conditions(generic_scenario, hardy_state_max(generic_scenario), tol_pos=0.5)
        assert not report.passed
        assert report.failing == [len(report.probabilities)]


class TestRankLaws:

    @pytest.mark.parametrize("j", ['1/2', '1', '3/2', '2', '5/2', '3'])
    def test_decomposition_fills_space(self, j):
        report = rank_report(HardyScenario.from_angles(j, 1.1, 1.9, 0.4, 2.3))
        assert report.passed
        assert report.zero_rank == 2 * report.dim - 1
        assert report.total_rank == report.dim ** 2

    @pytest.mark.parametrize("j, expected", [('1', 3), ('3/2', 8)])
    def test_product_family_rank(self, j, expected):
        report = rank_report(HardyScenario.from_angles(j, 0.9, 2.0, 1.0, 0.2))
        assert report.product_rank == expected
        assert report.sprime_rank == expected


class TestSpinOneDeterminant:

    def test_equator(self):
        report = appendix_a_check(HardyScenario.from_angles('1', np.pi / 2, np.pi / 2))
        assert report.determinant_abs == pytest.approx(0.25, abs=1e-12)
        assert report.printed_abs == pytest.approx(0.25, abs=1e-12)
        assert report.passed

    def test_grid(self, rng):
        for t1 in np.linspace(0.1, np.pi - 0.1, 10):
            for t2 in np.linspace(0.1, np.pi - 0.1, 10):
                report = appendix_a_check(HardyScenario.from_angles('1', t1, t2, *rng.uniform(0, 6, 2)))
                assert report.passed
                assert report.rank == 4
                expected = np.sin(t1 / 2) ** 2 * np.sin(t2 / 2) ** 2
                assert report.determinant_abs == pytest.approx(expected, abs=1e-12)
                assert report.printed_abs == pytest.approx(expected * (2 + np.cos(t1)) / 2, abs=1e-12)

    def test_spin_one_only(self):
        with pytest.raises(UnsupportedSpinError):
            appendix_a_check(HardyScenario.from_angles('1/2', 1.0, 1.0))
