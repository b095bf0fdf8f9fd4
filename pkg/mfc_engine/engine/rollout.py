from dataclasses import dataclass

import numpy as np

from mfc_engine.core.errors import InvalidArgumentError, NumericError
from mfc_engine.core.measure import EmpiricalMeasure
from mfc_engine.core.rng import ACTION_NOISE_STREAM, ENV_NOISE_STREAM, INITIAL_STATE_STREAM, RngStream
from mfc_engine.environment.base import Environment
from mfc_engine.models.base import Actor


@dataclass(frozen=True, eq=False)
class EpisodeTrace:
    """
    One simulated episode.

    Attributes:
        times (np.ndarray): t_0 .. t_n, shape (n + 1,).
        states (np.ndarray): X_{t_0} .. X_{t_n}, shape (n + 1, d).
        means (np.ndarray): Estimated population means at each node, shape (n + 1, d).
        actions (np.ndarray): Shape (n, m).
        costs (np.ndarray): Running costs f_{t_k}, shape (n,).
        log_densities (np.ndarray): log p_theta at the sampled actions, shape (n,); zero for
            deterministic rollouts.
        terminal_cost (float): g_{t_n}.
        lam (float): Temperature the actions were drawn with (0 when deterministic).
    """

    times: np.ndarray
    states: np.ndarray
    means: np.ndarray
    actions: np.ndarray
    costs: np.ndarray
    log_densities: np.ndarray
    terminal_cost: float
    lam: float


    def __post_init__(self):
        n = self.costs.shape[0]
        if self.states.shape[0] != n + 1 or self.means.shape[0] != n + 1 or self.actions.shape[0] != n:
            raise InvalidArgumentError("inconsistent trace lengths")


    def __len__(self) -> int:
        return self.costs.shape[0]


    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])


    def total_cost(self) -> float:
        """Sum of f dt plus the terminal cost."""

        return float(np.sum(self.costs) * self.dt + self.terminal_cost)


    def regularised_cost(self) -> float:
        """Sum of (f + lam log p) dt plus the terminal cost."""

        return float(np.sum(self.costs + self.lam * self.log_densities) * self.dt + self.terminal_cost)


@dataclass
class RolloutStreams:
    """Independent streams for initial states, Brownian increments and action noise."""

    initial: RngStream
    env: RngStream
    action: RngStream


    @classmethod
    def from_seed(cls, seed: int) -> "RolloutStreams":
        return cls(
            RngStream(seed, INITIAL_STATE_STREAM),
            RngStream(seed, ENV_NOISE_STREAM),
            RngStream(seed, ACTION_NOISE_STREAM),
        )


def initial_measures(env: Environment, location=None) -> list[EmpiricalMeasure]:
    """One Dirac estimate per grid node, at ``location`` (default the origin)."""

    point = np.zeros(env.state_dim) if location is None else np.asarray(location, dtype=float)
    start = EmpiricalMeasure.dirac(point)
    return [start] * (env.grid.n_steps + 1)


def rollout(
        env: Environment,
        actor: Actor,
        measures: list[EmpiricalMeasure],
        lam: float,
        rho_s: float,
        streams: RolloutStreams,
        deterministic: bool = False,
        initial_state=None
    ) -> EpisodeTrace:
    """
    Simulate one episode with the current actor.

    Before each action the node's measure estimate absorbs the current state,
    and the terminal measure absorbs X_{t_n}; the list ``measures`` is updated
    in place. Actions and costs use the estimated means.

    Args:
        env (Environment): Simulator.
        actor (Actor): Policy to follow.
        measures (list[EmpiricalMeasure]): n + 1 estimates, mutated in place.
        lam (float): Temperature of the randomised policy.
        rho_s (float): Measure update rate.
        streams (RolloutStreams): Random streams.
        deterministic (bool): Apply the policy mean instead of sampling.
        initial_state: Fixed X_0 instead of a draw from the initial law.

    Returns:
        EpisodeTrace: The simulated episode.

    Raises:
        InvalidArgumentError: If ``measures`` has the wrong length.
        NumericError: Propagated from the simulator with the step index.
    """

    grid = env.grid
    n = grid.n_steps
    if len(measures) != n + 1:
        raise InvalidArgumentError(f"need {n + 1} measure estimates, got {len(measures)}")

    x = env.sample_initial(streams.initial) if initial_state is None else np.asarray(initial_state, dtype=float)

    states = np.empty((n + 1, env.state_dim))
    means = np.empty((n + 1, env.state_dim))
    actions = np.empty((n, env.action_dim))
    costs = np.empty(n)
    log_densities = np.zeros(n)

    for k in range(n):
        measures[k] = measures[k].update(x, rho_s)
        mu_bar = measures[k].mean
        t = grid[k]

        if deterministic:
            a = actor.mean(t, x, mu_bar)
        else:
            a = actor.sample(t, x, mu_bar, lam, streams.action)
            log_densities[k] = actor.log_density(t, x, mu_bar, a, lam)

        step = env.step(k, x, a, mu_bar, streams.env)
        states[k], means[k], actions[k], costs[k] = x, mu_bar, a, step.running_cost
        x = step.next_state

    measures[n] = measures[n].update(x, rho_s)
    states[n], means[n] = x, measures[n].mean
    terminal = float(env.terminal_cost(x, means[n]))

    if not np.all(np.isfinite(log_densities)):
        raise NumericError("non-finite policy log-density in rollout")

    return EpisodeTrace(
        times=np.asarray(grid.times),
        states=states,
        means=means,
        actions=actions,
        costs=costs,
        log_densities=log_densities,
        terminal_cost=terminal,
        lam=0.0 if deterministic else float(lam),
    )
