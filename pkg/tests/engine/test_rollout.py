import numpy as np
import pytest

from mfc_engine.core.errors import InvalidArgumentError
from mfc_engine.core.time_grid import TimeGrid
from mfc_engine.engine import EpisodeTrace, RolloutStreams, initial_measures, rollout
from mfc_engine.environment import TradingEnvironment
from mfc_engine.models import ExactTradingActor


@pytest.fixture
def quiet_env(small_grid) -> TradingEnvironment:
    return TradingEnvironment(small_grid, gamma=0.0, initial_mean=1.0, initial_variance=0.0)


def test_deterministic_rollout_by_hand(quiet_env):
    actor = ExactTradingActor((3.0, 2.0))
    measures = initial_measures(quiet_env, [1.0])

    trace = rollout(quiet_env, actor, measures, 0.0, 1.0, RolloutStreams.from_seed(0), deterministic=True)

    # with rho_S = 1 the estimate is the agent itself, so only the offset -H acts
    assert len(trace) == 10
    np.testing.assert_allclose(trace.states[:, 0], 1.0 - 2.0 * trace.times, atol=1e-14)
    np.testing.assert_allclose(trace.actions, -2.0)
    np.testing.assert_allclose(trace.costs, 4.0 - 8.0)
    assert trace.terminal_cost == pytest.approx(0.0, abs=1e-24)
    assert trace.total_cost() == pytest.approx(-4.0)
    assert trace.regularised_cost() == trace.total_cost()
    assert trace.lam == 0.0
    np.testing.assert_array_equal(trace.log_densities, 0.0)


def test_rollout_updates_every_node(quiet_env):
    measures = initial_measures(quiet_env)
    before = list(measures)

    trace = rollout(quiet_env, ExactTradingActor((3.0, 2.0)), measures, 0.1, 0.5, RolloutStreams.from_seed(1))

    assert all(after is not prior for after, prior in zip(measures, before))
    np.testing.assert_allclose(measures[0].mean, [0.5])
    np.testing.assert_allclose(trace.means[-1], 0.5 * trace.states[-1])
    assert trace.lam == 0.1
    assert np.all(np.isfinite(trace.log_densities)) and np.any(trace.log_densities != 0.0)


def test_same_streams_same_episode(small_grid):
    env = TradingEnvironment(small_grid)
    actor = ExactTradingActor((3.0, 2.0))

    first = rollout(env, actor, initial_measures(env), 0.1, 0.2, RolloutStreams.from_seed(4))
    second = rollout(env, actor, initial_measures(env), 0.1, 0.2, RolloutStreams.from_seed(4))

    np.testing.assert_array_equal(first.states, second.states)
    np.testing.assert_array_equal(first.actions, second.actions)


def test_fixed_initial_state(small_grid):
    env = TradingEnvironment(small_grid)
    trace = rollout(
        env, ExactTradingActor(), initial_measures(env), 0.1, 0.2, RolloutStreams.from_seed(0),
        initial_state=[3.0],
    )

    assert trace.states[0, 0] == 3.0


def test_wrong_number_of_measures_raises(quiet_env):
    with pytest.raises(InvalidArgumentError):
        rollout(quiet_env, ExactTradingActor(), initial_measures(quiet_env)[:-1], 0.1, 0.2, RolloutStreams.from_seed(0))


def test_trace_lengths_are_checked():
    grid = TimeGrid(1.0, 2)
    with pytest.raises(InvalidArgumentError):
        EpisodeTrace(grid.times, np.zeros((3, 1)), np.zeros((3, 1)), np.zeros((1, 1)), np.zeros(2), np.zeros(2), 0.0, 0.0)
