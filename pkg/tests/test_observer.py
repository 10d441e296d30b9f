#!/usr/bin/env python
# -*- coding: utf-8 *-*


"""
    Tests of the state-fault observer: observability, gain placement,
    auxiliary inputs, and the closed-loop error dynamics against their
    closed-form linear solution.
"""


# =--------------= #
# Libraries import #
# =--------------= #

from src.config    import config_from_dict
from src.errors    import PlacementError
from src.faults    import exosystem_matrix
from src.model     import Consist, ConsistTopology
from src.observer  import (ObserverGains, auxiliary_inputs, build_augmented_pair, carriage_pair, check_observability,
                           initial_xi, linear_error_oracle, observability_matrix, observer_rhs, synthesize_bank,
                           synthesize_gains)
from src.Simulator import Simulator
from conftest      import short_document, with_estimate_errors
import numpy as np
import pytest

# =---------------------------------------------------------------------------------------------------------------= #


C_ROW = [2.5, 0.0, 2.5]
EXPECTED_K = (-15.0, -89.0, -97.2, 126.4, -4.8)


@pytest.fixture
def pair():
    return build_augmented_pair(C_ROW, exosystem_matrix(1.0))


# =------------------------------= #
# Augmented pair and observability #
# =------------------------------= #

def test_augmented_pair_structure(pair):
    A, C = pair
    assert A.shape == (5, 5) and C.shape == (1, 5)
    assert A[0, 1] == 1.0
    assert list(A[1, 2:]) == C_ROW
    assert np.array_equal(A[2:, 2:], exosystem_matrix(1.0))
    assert list(C[0]) == [1.0, 0.0, 0.0, 0.0, 0.0]
    assert np.count_nonzero(A) == 1 + 2 + 2


def test_shipped_pair_is_observable(pair):
    assert check_observability(*pair)
    assert np.linalg.matrix_rank(observability_matrix(*pair)) == 5


def test_fault_decoupled_pair_is_unobservable():
    assert not check_observability(*build_augmented_pair([0.0, 0.0, 0.0], exosystem_matrix(1.0)))


def test_static_rotation_pair_is_unobservable():
    assert not check_observability(*build_augmented_pair([2.5, 0.0, 0.0], exosystem_matrix(0.0)))


def test_carriage_pair(carriage, pair):
    A, C = carriage_pair(carriage)
    assert np.allclose(A, pair[0]) and np.allclose(C, pair[1])

# =-----------------------------------------------------------------------------= #


# =-------------= #
# Placement tests #
# =-------------= #

def test_placement_at_minus_three(pair):
    gains = synthesize_gains(*pair, [-3.0] * 5)
    assert gains.k1 == 3.0
    assert gains.K == pytest.approx(EXPECTED_K, rel=1e-8)
    assert (gains.k2, gains.k3) == pytest.approx(EXPECTED_K[:2], rel=1e-8)
    assert gains.k4 == pytest.approx(EXPECTED_K[2:], rel=1e-8)


def test_placed_polynomial(pair):
    A, C = pair
    gains = synthesize_gains(A, C, [-3.0] * 5)
    realized = np.real(np.poly(A + np.outer(gains.K, C[0])))
    assert realized == pytest.approx([1.0, 15.0, 90.0, 270.0, 405.0, 243.0], rel=1e-6)
    # A five-fold root only resolves to the fifth root of the rounding error.
    assert np.sort_complex(np.linalg.eigvals(A + np.outer(gains.K, C[0]))).real == pytest.approx([-3.0] * 5, abs=1e-2)


def test_placement_of_distinct_eigenvalues(pair):
    A, C = pair
    desired = [-1.0, -2.0, -3.0, -4.0, -5.0]
    gains = synthesize_gains(A, C, desired, k1_eigenvalue=-2.0)
    eigenvalues = np.sort(np.linalg.eigvals(A + np.outer(gains.K, C[0])).real)
    assert eigenvalues == pytest.approx(desired, abs=1e-6)
    assert gains.k1 == 2.0


def test_placement_of_complex_pair(pair):
    A, C = pair
    desired = [complex(-2, 1), complex(-2, -1), -3.0, -4.0, -5.0]
    gains = synthesize_gains(A, C, desired)
    realized = np.poly(A + np.outer(gains.K, C[0]))
    assert np.real(realized) == pytest.approx(np.real(np.poly(desired)), rel=1e-6)


def test_placement_rejects_unobservable_pair():
    with pytest.raises(PlacementError):
        synthesize_gains(*build_augmented_pair([0.0, 0.0, 0.0], exosystem_matrix(1.0)), [-3.0] * 5)


@pytest.mark.parametrize("desired", [[-3.0] * 4 + [0.0], [-3.0] * 4 + [complex(1, 2)]])
def test_placement_rejects_non_hurwitz_request(pair, desired):
    with pytest.raises(PlacementError):
        synthesize_gains(*pair, desired)


def test_placement_rejects_nonnegative_k1_eigenvalue(pair):
    with pytest.raises(PlacementError):
        synthesize_gains(*pair, [-3.0] * 5, k1_eigenvalue=0.0)


def test_placement_rejects_wrong_count(pair):
    with pytest.raises(PlacementError):
        synthesize_gains(*pair, [-3.0] * 4)


def test_synthesize_bank_shares_and_overrides(carriage):
    override = ObserverGains(4.0, (1.0, 2.0, 3.0, 4.0, 5.0))
    k1, K = synthesize_bank([carriage] * 3, [-3.0] * 5, -3.0, [None, override, None])
    assert list(k1) == [3.0, 4.0, 3.0]
    assert K[0] == pytest.approx(EXPECTED_K, rel=1e-8)
    assert list(K[1]) == [1.0, 2.0, 3.0, 4.0, 5.0]
    assert np.array_equal(K[0], K[2])

# =-----------------------------------------------------------------------------------------------------------= #


# =-------------------= #
# Auxiliary input tests #
# =-------------------= #

@pytest.fixture
def two_carriages(carriage, davis, coupler):
    return Consist(ConsistTopology((2,)), [carriage] * 2, davis, coupler)


def test_auxiliary_inputs_vanish_on_perfect_estimates(two_carriages):
    x, v = np.array([26.0, 0.0]), np.array([20.0, 20.5])
    k1, K = np.full(2, 3.0), np.tile(EXPECTED_K, (2, 1))
    aux = auxiliary_inputs(two_carriages, x, v, x, v, np.array([0.1, -0.1]), k1, K)
    for channel in aux:
        assert np.all(channel == 0.0)


def test_auxiliary_input_position_channel(two_carriages):
    x, v = np.array([26.0, 0.0]), np.array([20.0, 20.0])
    k1, K = np.full(2, 3.0), np.tile(EXPECTED_K, (2, 1))
    aux = auxiliary_inputs(two_carriages, x, v, x + np.array([1.0, 0.0]), v + np.array([0.0, 0.5]), np.zeros(2), k1, K)
    assert aux.mu1 == pytest.approx([-3.0, -0.5])
    assert aux.mu4[1] == pytest.approx(np.array(EXPECTED_K[2:]) * 0.5)
    assert np.all(aux.mu4[0] == 0.0)


def test_observer_rhs_on_perfect_estimates(two_carriages):
    x, v, w_hat = np.array([26.0, 0.0]), np.array([20.0, 20.0]), np.array([0.1, 0.2])
    f_hat = np.array([[1.0, 0.0, 1.0], [0.0, 0.0, 0.0]])
    k1, K = np.full(2, 3.0), np.tile(EXPECTED_K, (2, 1))
    aux = auxiliary_inputs(two_carriages, x, v, x, v, w_hat, k1, K)
    u = np.array([0.3, -0.3])
    rates = observer_rhs(two_carriages, v, v, w_hat, f_hat, aux, u)
    assert rates.x_hat == pytest.approx(v)
    assert rates.v_hat == pytest.approx(w_hat)
    expected = two_carriages.composite_jerk(v, w_hat, f_hat, u)
    assert rates.w_hat == pytest.approx(expected)
    assert rates.f_hat[0] == pytest.approx([0.0, 1.0, 0.0])

# =---------------------------------------------------------------------------------------------------= #


# =-----------------------= #
# Linear error oracle tests #
# =-----------------------= #

def test_oracle_from_zero_errors(pair):
    gains = ObserverGains(3.0, EXPECTED_K)
    trajectory = linear_error_oracle(0.0, np.zeros(5), gains, *pair, np.linspace(0, 10, 11))
    assert np.all(trajectory.e_x == 0.0)
    assert np.all(trajectory.xi == 0.0)


def test_oracle_position_error_decay(pair):
    gains = ObserverGains(3.0, EXPECTED_K)
    times = np.linspace(0, 5, 51)
    trajectory = linear_error_oracle(2.0, np.zeros(5), gains, *pair, times)
    assert trajectory.e_x == pytest.approx(2.0 * np.exp(-3.0 * times))


def test_oracle_error_decay(pair):
    gains = ObserverGains(3.0, EXPECTED_K)
    xi0 = np.ones(5)
    trajectory = linear_error_oracle(1.0, xi0, gains, *pair, [0.0, 20.0])
    assert np.linalg.norm(trajectory.xi[-1]) < 1e-5 * np.linalg.norm(xi0)
    assert (trajectory.e_v[0], trajectory.zeta[0]) == pytest.approx((1.0, 1.0))
    assert trajectory.e_f.shape == (2, 3)


def test_initial_xi():
    assert initial_xi(0.1, 0.2, 0.3, -15.0, [1.0, 2.0, 3.0]) == pytest.approx([0.1, 2.0, 1.0, 2.0, 3.0])

# =--------------------------------------------------------------------------= #


# =------------------------------= #
# Closed-loop error dynamics tests #
# =------------------------------= #

E_X, E_W, F_HAT = 1.0, 0.01, (1e-3, 0.0, 0.0)


def simulate(document, control_override=None):
    simulator = Simulator(config_from_dict(document), control_override=control_override)
    return simulator.run()


def test_errors_follow_the_linear_oracle(carriage):
    document = with_estimate_errors(short_document(10.0, step=1e-3, decimate=100), E_X, E_W, F_HAT)
    record = simulate(document)

    A, C = carriage_pair(carriage)
    gains = ObserverGains(3.0, tuple(synthesize_bank([carriage], [-3.0] * 5)[1][0]))
    trajectory = linear_error_oracle(E_X, initial_xi(0.0, E_W, 0.0, gains.k2, F_HAT), gains, A, C, record.time)
    e_f = trajectory.e_f @ carriage.E
    scale = max(1.0, np.max(np.abs(e_f)))

    for i, j in record.labels:
        assert record.carriage("e_x_m", i, j) == pytest.approx(trajectory.e_x, abs=1e-6)
        assert record.carriage("e_v_mps", i, j) == pytest.approx(trajectory.e_v, abs=1e-6)
        measured = record.carriage("f_eff_hat_Nps", i, j) - record.carriage("f_eff_Nps", i, j)
        assert measured == pytest.approx(e_f, abs=1e-6 * scale)


def test_errors_do_not_depend_on_the_inputs():
    document = with_estimate_errors(short_document(20.0, step=1e-3, decimate=100), E_X, E_W, F_HAT)
    controlled = simulate(document)
    open_loop = simulate(document, control_override=lambda t, x, v: 0.05 * np.sin(t) * np.ones(len(x)))

    assert not np.allclose(controlled.carriage("u_mps3", 2, 2), open_loop.carriage("u_mps3", 2, 2))
    for i, j in controlled.labels:
        for quantity in ("e_x_m", "e_v_mps"):
            assert controlled.carriage(quantity, i, j) == pytest.approx(open_loop.carriage(quantity, i, j), abs=1e-9)
        fault_error = [
            (record.carriage("f_eff_hat_Nps", i, j) - record.carriage("f_eff_Nps", i, j)) / 2e5 for record in (controlled, open_loop)
        ]
        assert fault_error[0] == pytest.approx(fault_error[1], abs=1e-9)

# =------------------------------------------------------------------------------------------------------------------------------------= #
