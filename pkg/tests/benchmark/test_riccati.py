import numpy as np
import pytest

from mfc_engine.benchmark import (
    closed_form_example1,
    closed_form_example2,
    initial_value,
    optimal_policy,
    optimal_value,
    solve_riccati,
    sqrt_delta,
)
from mfc_engine.core.errors import AssumptionViolationError, InvalidArgumentError
from mfc_engine.core.time_grid import TimeGrid
from mfc_engine.environment.coefficients import LqCoefficients


@pytest.mark.parametrize("lam", [0.0, 0.001])
def test_trading_matches_closed_form(trading_coeffs, fine_grid, lam):
    sol = solve_riccati(trading_coeffs, lam, fine_grid)
    exact = closed_form_example2(fine_grid.times, lam=lam)

    np.testing.assert_allclose(sol.K[:, 0, 0], exact.K, rtol=0.0, atol=1e-6)
    np.testing.assert_allclose(sol.R, exact.R, rtol=0.0, atol=1e-5)
    np.testing.assert_allclose(sol.Lam, 0.0, atol=1e-12)
    np.testing.assert_allclose(sol.Y, 0.0, atol=1e-12)


@pytest.mark.parametrize("lam", [0.0, 0.001])
def test_systemic_risk_matches_closed_form(sysrisk_coeffs, fine_grid, lam):
    sol = solve_riccati(sysrisk_coeffs, lam, fine_grid)
    exact = closed_form_example1(fine_grid.times, lam=lam)

    np.testing.assert_allclose(sol.K[:, 0, 0], exact.K, rtol=0.0, atol=1e-6)
    np.testing.assert_allclose(sol.R, exact.R, rtol=0.0, atol=1e-5)


def test_terminal_values(trading_coeffs, small_grid):
    sol = solve_riccati(trading_coeffs, 0.1, small_grid)

    assert sol.K[-1, 0, 0] == 3.0
    assert sol.Lam[-1, 0, 0] == 0.0
    assert sol.R[-1] == 0.0


def test_sqrt_delta():
    assert sqrt_delta(0.6, 0.4, 1.0) == pytest.approx(1.8221, abs=1e-4)


def test_trading_initial_values(trading_coeffs, fine_grid):
    regularised = initial_value(solve_riccati(trading_coeffs, 0.001, fine_grid), 1.0, 1.0)
    entropy_free = initial_value(solve_riccati(trading_coeffs, 0.0, fine_grid), 1.0, 1.0)

    assert regularised == pytest.approx(-1.86082, abs=1e-4)
    assert entropy_free == pytest.approx(0.75 + np.log(4.0) - 4.0, abs=1e-6)
    assert entropy_free == pytest.approx(-1.8637, abs=1e-4)


def test_systemic_risk_initial_value(sysrisk_coeffs, fine_grid):
    sol = solve_riccati(sysrisk_coeffs, 0.0, fine_grid)
    value = initial_value(sol, 0.0, 1.0)

    assert value == pytest.approx(0.613, rel=0.02)
    assert value == pytest.approx(sol.K[0, 0, 0] + sol.R[0], abs=1e-15)


def test_optimal_value_reads_the_shell(trading_coeffs, small_grid):
    sol = solve_riccati(trading_coeffs, 0.0, small_grid)
    K0, R0 = sol.K[0, 0, 0], sol.R[0]

    assert optimal_value(sol, 0.0, [2.0], [0.5]) == pytest.approx(K0 * 1.5 ** 2 + R0, rel=1e-14)


def test_trading_optimal_policy(trading_coeffs, fine_grid):
    sol = solve_riccati(trading_coeffs, 0.001, fine_grid)
    policy = optimal_policy(sol)
    t = fine_grid.times[::400]
    K = closed_form_example2(t).K

    x = np.full((t.size, 1), 1.5)
    mu_bar = np.full((t.size, 1), 1.0)
    np.testing.assert_allclose(policy.mean(t, x, mu_bar)[:, 0], -K * 0.5 - 2.0, atol=1e-6)
    np.testing.assert_allclose(policy.covariance(t)[:, 0, 0], 0.0005, rtol=1e-12)
    assert policy.entropy(0.0) == pytest.approx(0.5 * np.log(2 * np.pi * np.e * 0.0005), rel=1e-12)


def test_systemic_risk_feedback(sysrisk_coeffs, fine_grid):
    sol = solve_riccati(sysrisk_coeffs, 0.0, fine_grid)
    t = fine_grid.times[::250]
    phi1, phi2, phi3 = sol.feedback(t)
    exact = closed_form_example1(t)

    np.testing.assert_allclose(phi1[:, 0, 0], exact.phi, atol=1e-6)
    np.testing.assert_allclose(phi2[:, 0, 0], -exact.phi, atol=1e-6)
    np.testing.assert_allclose(phi3, 0.0, atol=1e-12)


def test_entropy_free_policy_is_deterministic(trading_coeffs, small_grid):
    policy = optimal_policy(solve_riccati(trading_coeffs, 0.0, small_grid))

    assert not np.any(policy.covariance(0.3))
    assert policy.entropy(0.3) == -np.inf


def test_policy_log_density(trading_coeffs, small_grid):
    policy = optimal_policy(solve_riccati(trading_coeffs, 0.2, small_grid))
    x, mu_bar = np.array([1.0]), np.array([1.0])
    a = policy.mean(0.0, x, mu_bar) + 0.3

    expected = -0.5 * np.log(2 * np.pi * 0.1) - 0.3 ** 2 / (2 * 0.1)
    assert policy.log_density(0.0, x, mu_bar, a) == pytest.approx(expected, rel=1e-10)


def test_negative_temperature_raises(trading_coeffs, small_grid):
    with pytest.raises(InvalidArgumentError):
        solve_riccati(trading_coeffs, -0.1, small_grid)


def test_indefinite_action_weight_raises(small_grid):
    coeffs = LqCoefficients.trading(n=-1.0, validate=False)
    with pytest.raises(AssumptionViolationError):
        solve_riccati(coeffs, 0.0, small_grid)


def test_policy_needs_matching_coefficients(trading_coeffs, sysrisk_coeffs, small_grid):
    sol = solve_riccati(trading_coeffs, 0.0, small_grid)
    with pytest.raises(InvalidArgumentError):
        optimal_policy(sol, sysrisk_coeffs)


def test_multidimensional_system_stays_symmetric():
    coeffs = LqCoefficients.zeros(
        2, 1,
        B=[[0.1, 0.2], [0.0, -0.3]], C=[[1.0], [0.5]], gamma=[1.0, 0.5],
        Q=np.eye(2), N=1.0, P=[[2.0, 0.5], [0.5, 1.0]], L=[0.1, -0.2],
    )
    sol = solve_riccati(coeffs, 0.01, TimeGrid(1.0, 200))

    np.testing.assert_array_equal(sol.K, np.swapaxes(sol.K, 1, 2))
    assert np.all(np.linalg.eigvalsh(sol.K) > 0.0)


@pytest.mark.parametrize(
    "coeffs_fixture, closed_form",
    [("trading_coeffs", closed_form_example2), ("sysrisk_coeffs", closed_form_example1)],
)
def test_rk4_error_shrinks_sixteenfold_when_step_halves(coeffs_fixture, closed_form, request):
    coeffs = request.getfixturevalue(coeffs_fixture)

    def k_error(n_steps: int) -> float:
        grid = TimeGrid(1.0, n_steps)
        sol = solve_riccati(coeffs, 0.0, grid)
        return float(np.max(np.abs(sol.K[:, 0, 0] - closed_form(grid.times).K)))

    coarse, fine = k_error(40), k_error(80)

    assert fine > 1e-13
    assert 12.0 < coarse / fine < 20.0
