import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from mfc_engine.core.errors import InvalidArgumentError
from mfc_engine.core.rng import ENV_NOISE_STREAM, INITIAL_STATE_STREAM, RngStream
from mfc_engine.environment.base import Environment
from mfc_engine.evaluation.social_cost import KahanAccumulator, _mean_map
from mfc_engine.utils.csv_writer import write_csv

logger = logging.getLogger(__name__)


@dataclass
class TrajectoryComparison:
    """
    Two populations driven by the same initial states and Brownian increments.

    Per-step arrays have one row per node t_0 .. t_n; control rows at t_n are NaN.
    """

    times: np.ndarray
    mean_a: np.ndarray
    mean_b: np.ndarray
    control_a: np.ndarray
    control_b: np.ndarray
    max_control_gap: np.ndarray
    cost_a: np.ndarray
    cost_b: np.ndarray


    def rows(self) -> list[dict]:
        d = self.mean_a.shape[1]
        m = self.control_a.shape[1]
        rows = []
        for k, t in enumerate(self.times):
            row = {"k": k, "t": t}
            for i in range(d):
                row[f"mean_a_{i + 1}"] = self.mean_a[k, i]
                row[f"mean_b_{i + 1}"] = self.mean_b[k, i]
            for j in range(m):
                row[f"control_a_{j + 1}"] = self.control_a[k, j]
                row[f"control_b_{j + 1}"] = self.control_b[k, j]
            row["max_control_gap"] = self.max_control_gap[k]
            row["cost_a"] = self.cost_a[k]
            row["cost_b"] = self.cost_b[k]
            rows.append(row)
        return rows


    def field_names(self) -> list[str]:
        d = self.mean_a.shape[1]
        m = self.control_a.shape[1]
        names = ["k", "t"]
        names += [f"mean_{side}_{i + 1}" for i in range(d) for side in ("a", "b")]
        names += [f"control_{side}_{j + 1}" for j in range(m) for side in ("a", "b")]
        return names + ["max_control_gap", "cost_a", "cost_b"]


    def write_csv(self, path: str) -> str:
        return write_csv(path, self.field_names(), self.rows())


def trajectory_compare(
        env: Environment,
        policy_a,
        policy_b,
        n_agents: int,
        seed: int = 0,
        path: Optional[str] = None
    ) -> TrajectoryComparison:
    """
    Run two populations side by side, one per policy, on common random numbers.

    Both populations start from the same draw and receive the same Brownian
    increments; only the controls differ. Agents apply the policy means with
    the live empirical mean as mean-field input.

    Args:
        env (Environment): Simulator.
        policy_a: First policy-mean map (e.g. the learnt actor).
        policy_b: Second policy-mean map (e.g. the benchmark policy).
        n_agents (int): Agents per population, at least 2.
        seed (int): Root seed.
        path (str | None): CSV destination.

    Returns:
        TrajectoryComparison: Paths of both populations.
    """

    if n_agents < 2:
        raise InvalidArgumentError(f"a population needs at least 2 agents, got {n_agents}")

    grid = env.grid
    n, dt = grid.n_steps, grid.dt
    mean_a, mean_b = _mean_map(policy_a), _mean_map(policy_b)

    x0 = env.sample_initial(RngStream(seed, INITIAL_STATE_STREAM), size=n_agents)
    noise_a = RngStream(seed, ENV_NOISE_STREAM)
    noise_b = RngStream(seed, ENV_NOISE_STREAM)

    xa, xb = x0.copy(), x0.copy()
    acc_a, acc_b = KahanAccumulator(n_agents), KahanAccumulator(n_agents)
    means_a = np.empty((n + 1, env.state_dim))
    means_b = np.empty((n + 1, env.state_dim))
    controls_a = np.full((n + 1, env.action_dim), np.nan)
    controls_b = np.full((n + 1, env.action_dim), np.nan)
    gap = np.full(n + 1, np.nan)
    costs_a = np.zeros(n + 1)
    costs_b = np.zeros(n + 1)

    for k in range(n):
        t = grid[k]
        mu_a, mu_b = xa.mean(axis=0), xb.mean(axis=0)
        a = mean_a(t, xa, mu_a)
        b = mean_b(t, xb, mu_b)

        step_a = env.step(k, xa, a, mu_a, noise_a)
        step_b = env.step(k, xb, b, mu_b, noise_b)
        acc_a.add(step_a.running_cost * dt)
        acc_b.add(step_b.running_cost * dt)

        means_a[k], means_b[k] = mu_a, mu_b
        controls_a[k], controls_b[k] = a.mean(axis=0), b.mean(axis=0)
        gap[k] = float(np.max(np.abs(a - b)))
        costs_a[k + 1] = acc_a.total.mean()
        costs_b[k + 1] = acc_b.total.mean()
        xa, xb = step_a.next_state, step_b.next_state

    means_a[n], means_b[n] = xa.mean(axis=0), xb.mean(axis=0)
    acc_a.add(env.terminal_cost(xa, means_a[n]))
    acc_b.add(env.terminal_cost(xb, means_b[n]))
    costs_a[n] = acc_a.total.mean()
    costs_b[n] = acc_b.total.mean()

    comparison = TrajectoryComparison(
        times=np.asarray(grid.times),
        mean_a=means_a,
        mean_b=means_b,
        control_a=controls_a,
        control_b=controls_b,
        max_control_gap=gap,
        cost_a=costs_a,
        cost_b=costs_b,
    )
    logger.info("final cost gap %.6f", costs_a[n] - costs_b[n])
    if path is not None:
        comparison.write_csv(path)
    return comparison
