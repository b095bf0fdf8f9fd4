import csv

import numpy as np

from mfc_engine.benchmark import optimal_policy, solve_riccati
from mfc_engine.environment import TradingEnvironment
from mfc_engine.evaluation import trajectory_compare
from mfc_engine.models import ExactTradingActor


def test_same_policy_gives_identical_paths(small_grid, tmp_path):
    env = TradingEnvironment(small_grid)
    actor = ExactTradingActor((3.0, 2.0))
    path = tmp_path / "trajectories.csv"

    comparison = trajectory_compare(env, actor, actor, n_agents=100, seed=2, path=str(path))

    np.testing.assert_array_equal(comparison.mean_a, comparison.mean_b)
    np.testing.assert_array_equal(comparison.cost_a, comparison.cost_b)
    np.testing.assert_array_equal(comparison.max_control_gap[:-1], 0.0)
    assert np.isnan(comparison.control_a[-1]).all()

    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == small_grid.n_steps + 1
    assert list(rows[0])[:4] == ["k", "t", "mean_a_1", "mean_b_1"]


def test_learnt_and_benchmark_policies_share_noise(small_grid, fine_grid, trading_coeffs):
    env = TradingEnvironment(small_grid)
    benchmark = optimal_policy(solve_riccati(trading_coeffs, 0.0, fine_grid))

    comparison = trajectory_compare(env, ExactTradingActor((3.0, 1.0)), benchmark, n_agents=100)

    # the two policies differ only in their constant offset (1 against 2)
    np.testing.assert_allclose(comparison.max_control_gap[:-1], 1.0, atol=1e-6)
    np.testing.assert_allclose(comparison.control_a[:-1] - comparison.control_b[:-1], 1.0, atol=1e-6)
    assert comparison.mean_a[0, 0] == comparison.mean_b[0, 0]
