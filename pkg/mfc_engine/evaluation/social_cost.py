"""Monte Carlo social cost of a policy run on finite interacting populations."""

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from mfc_engine.core.errors import InvalidArgumentError, NumericError
from mfc_engine.core.rng import EVAL_STREAM, RngStream
from mfc_engine.environment.base import Environment
from mfc_engine.models.base import Actor

logger = logging.getLogger(__name__)

THREADS_ENV_VAR = "MFC_THREADS"


class KahanAccumulator:
    """Compensated running sum, one lane per agent."""


    def __init__(self, shape):
        self.total = np.zeros(shape)
        self._compensation = np.zeros(shape)


    def add(self, values) -> None:
        y = np.asarray(values, dtype=float) - self._compensation
        t = self.total + y
        self._compensation = (t - self.total) - y
        self.total = t


@dataclass
class PopulationRun:
    """
    One simulated population.

    Attributes:
        n_agents (int): Population size.
        social_cost (float): Agent-averaged running plus terminal cost.
        stream_id (int): RNG stream the population was drawn from.
        mean_path (np.ndarray | None): Empirical mean at each node, (n + 1, d).
        control_path (np.ndarray | None): Agent-averaged control at each step, (n, m).
        cost_path (np.ndarray | None): Agent-averaged cumulative cost at each node, (n + 1,).
    """

    n_agents: int
    social_cost: float
    stream_id: int
    mean_path: Optional[np.ndarray] = None
    control_path: Optional[np.ndarray] = None
    cost_path: Optional[np.ndarray] = None


@dataclass
class EvalReport:
    """
    Summary across populations.

    ``relative_error`` is |mean - exact| / |exact| when an exact value is known.
    """

    population_costs: np.ndarray
    n_agents: int
    exact: Optional[float] = None
    exact_regularised: Optional[float] = None
    runs: list[PopulationRun] = field(default_factory=list, repr=False)


    @property
    def mean(self) -> float:
        return math.fsum(self.population_costs) / len(self.population_costs)


    @property
    def std(self) -> float:
        if len(self.population_costs) < 2:
            return 0.0
        return float(np.std(self.population_costs, ddof=1))


    @property
    def relative_error(self) -> Optional[float]:
        if self.exact is None or self.exact == 0.0:
            return None
        return abs(self.mean - self.exact) / abs(self.exact)


    def rows(self) -> list[dict]:
        """Per-population rows followed by the summary rows."""

        rows = [{"population": i, "social_cost": c} for i, c in enumerate(self.population_costs)]
        rows.append({"population": "mean", "social_cost": self.mean})
        rows.append({"population": "std", "social_cost": self.std})
        if self.exact is not None:
            rows.append({"population": "exact", "social_cost": self.exact})
            rows.append({"population": "relative_error", "social_cost": self.relative_error})
        if self.exact_regularised is not None:
            rows.append({"population": "exact_regularised", "social_cost": self.exact_regularised})
        return rows


def _action_sampler(policy, lam: float) -> Callable:
    """(t, x, mu_bar, rng) -> (action, log density) for stochastic evaluation."""

    if isinstance(policy, Actor):
        def sample(t, x, mu_bar, rng):
            a = policy.sample(t, x, mu_bar, lam, rng)
            return a, policy.log_density(t, x, mu_bar, a, lam)
        return sample

    if hasattr(policy, "sample") and hasattr(policy, "log_density"):
        def sample(t, x, mu_bar, rng):
            a = policy.sample(t, x, mu_bar, rng)
            return a, policy.log_density(t, x, mu_bar, a)
        return sample

    raise InvalidArgumentError(f"{type(policy).__name__} cannot be sampled for stochastic evaluation")


def _mean_map(policy) -> Callable:
    if isinstance(policy, Actor):
        return policy.mean
    if callable(policy):
        return policy
    raise InvalidArgumentError(f"{type(policy).__name__} is not a policy-mean map")


def simulate_population(
        env: Environment,
        policy,
        n_agents: int,
        rng: RngStream,
        stochastic: bool = False,
        lam: float = 0.0,
        keep_paths: bool = False
    ) -> PopulationRun:
    """
    Propagate ``n_agents`` coupled agents over the simulator's grid.

    Each agent applies the policy mean (or a sampled action when
    ``stochastic``) and the mean-field input is the live empirical mean of the
    population. With a sampled policy the cost also carries lam log p.

    Args:
        env (Environment): Simulator.
        policy: ``Actor``, ``GaussianPolicy`` or any callable (t, x, mu_bar) -> action.
        n_agents (int): Population size, at least 2.
        rng (RngStream): Stream for initial states, Brownian increments and actions.
        stochastic (bool): Sample actions instead of applying the mean.
        lam (float): Temperature for sampled actions.
        keep_paths (bool): Retain mean, control and cumulative cost paths.

    Returns:
        PopulationRun: The population's social cost.
    """

    if n_agents < 2:
        raise InvalidArgumentError(f"a population needs at least 2 agents, got {n_agents}")

    grid = env.grid
    n, dt = grid.n_steps, grid.dt
    mean_action = _mean_map(policy)
    sampler = _action_sampler(policy, lam) if stochastic else None

    x = env.sample_initial(rng, size=n_agents)
    acc = KahanAccumulator(n_agents)
    mean_path = np.empty((n + 1, env.state_dim)) if keep_paths else None
    control_path = np.empty((n, env.action_dim)) if keep_paths else None
    cost_path = np.zeros(n + 1) if keep_paths else None

    for k in range(n):
        t = grid[k]
        mu_bar = x.mean(axis=0)
        if sampler is None:
            a = mean_action(t, x, mu_bar)
            penalty = 0.0
        else:
            a, log_p = sampler(t, x, mu_bar, rng)
            penalty = lam * log_p

        step = env.step(k, x, a, mu_bar, rng)
        acc.add((step.running_cost + penalty) * dt)

        if keep_paths:
            mean_path[k] = mu_bar
            control_path[k] = a.mean(axis=0)
            cost_path[k + 1] = math.fsum(acc.total) / n_agents
        x = step.next_state

    mu_T = x.mean(axis=0)
    acc.add(env.terminal_cost(x, mu_T))
    social_cost = math.fsum(acc.total) / n_agents
    if not math.isfinite(social_cost):
        raise NumericError("non-finite social cost")

    if keep_paths:
        mean_path[n] = mu_T
        cost_path[n] = social_cost

    return PopulationRun(n_agents, social_cost, rng.stream_id, mean_path, control_path, cost_path)


def eval_threads() -> int:
    """Worker count from ``MFC_THREADS`` (default 1)."""

    raw = os.environ.get(THREADS_ENV_VAR, "1")
    try:
        threads = int(raw)
    except ValueError:
        raise InvalidArgumentError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}")
    return max(threads, 1)


def social_cost(
        env: Environment,
        policy,
        n_agents: int,
        n_populations: int,
        seed: int = 0,
        lam: float = 0.0,
        stochastic: bool = False,
        exact: Optional[float] = None,
        exact_regularised: Optional[float] = None,
        threads: Optional[int] = None,
        keep_paths: bool = False
    ) -> EvalReport:
    """
    Social cost of ``policy`` over independent populations.

    Population p draws from stream ``EVAL_STREAM + p`` of ``seed``, so results
    do not depend on the number of worker threads.

    Args:
        env (Environment): Simulator (its grid may be finer than the training grid).
        policy: Policy-mean map, ``Actor`` or ``GaussianPolicy``.
        n_agents (int): Agents per population, at least 2.
        n_populations (int): Number of populations, at least 1.
        seed (int): Root seed.
        lam (float): Temperature, only used when ``stochastic``.
        stochastic (bool): Sample actions and charge lam log p.
        exact (float | None): Reference value for the relative error.
        exact_regularised (float | None): Entropy-regularised reference, reported alongside.
        threads (int | None): Worker threads; defaults to ``MFC_THREADS``.
        keep_paths (bool): Retain per-population paths.

    Returns:
        EvalReport: Per-population costs and summary.
    """

    if n_populations < 1:
        raise InvalidArgumentError(f"need at least one population, got {n_populations}")
    if n_agents < 2:
        raise InvalidArgumentError(f"a population needs at least 2 agents, got {n_agents}")
    if stochastic and lam <= 0.0:
        raise InvalidArgumentError(f"stochastic evaluation needs lam > 0, got {lam}")

    threads = eval_threads() if threads is None else max(int(threads), 1)
    logger.info(
        "evaluating %d populations x %d agents on %d steps (%s, %d threads)",
        n_populations, n_agents, env.grid.n_steps, "sampled" if stochastic else "policy mean", threads,
    )

    def run(p: int) -> PopulationRun:
        return simulate_population(
            env, policy, n_agents, RngStream(seed, EVAL_STREAM + p), stochastic, lam, keep_paths
        )

    if threads == 1:
        runs = [run(p) for p in range(n_populations)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            runs = list(pool.map(run, range(n_populations)))

    report = EvalReport(
        population_costs=np.array([r.social_cost for r in runs]),
        n_agents=n_agents,
        exact=exact,
        exact_regularised=exact_regularised,
        runs=runs,
    )
    logger.info("social cost %.6f (std %.6f)", report.mean, report.std)
    return report
