import logging
import time
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np
from tqdm import tqdm

from mfc_engine.core.errors import InvalidArgumentError, NumericError
from mfc_engine.core.schedule import Schedule
from mfc_engine.core.time_grid import TimeGrid
from mfc_engine.engine.estimators import StepRecord, offline_critic_delta, offline_policy_gradient, online_deltas
from mfc_engine.engine.report import TrainReport
from mfc_engine.engine.rollout import RolloutStreams, initial_measures, rollout
from mfc_engine.environment.base import Environment
from mfc_engine.models.base import Actor, Critic

logger = logging.getLogger(__name__)

_SCHEDULE_NAMES = ("rho_s", "rho_e", "rho_g", "lam", "minibatch")


@dataclass
class TrainConfig:
    """
    Everything a trainer needs besides the simulator and the two parametrisations.

    ``minibatch`` is the number of independent episodes per update in offline
    mode and the number of simultaneously simulated agents in online mode.
    ``control_matrix`` is the C the learner is told about; None drops the
    mean-field correction from the actor gradient.
    """

    episodes: int
    grid: TimeGrid
    rho_s: Schedule
    rho_e: Schedule
    rho_g: Schedule
    lam: Schedule
    minibatch: Schedule = field(default_factory=lambda: Schedule.constant(1))
    beta: float = 0.0
    clip_norm: Optional[float] = None
    seed: int = 0
    oracle_mean: bool = False
    terminal_critic: Literal["observed", "learned"] = "observed"
    record_every: int = 1
    control_matrix: Optional[np.ndarray] = None
    initial_measure: Optional[np.ndarray] = None
    progress: bool = False


    def __post_init__(self):
        if self.episodes < 1:
            raise InvalidArgumentError(f"episodes must be >= 1, got {self.episodes}")
        if self.clip_norm is not None and self.clip_norm <= 0.0:
            raise InvalidArgumentError(f"clip_norm must be positive, got {self.clip_norm}")
        if self.record_every < 1:
            raise InvalidArgumentError(f"record_every must be >= 1, got {self.record_every}")
        if self.beta < 0.0:
            raise InvalidArgumentError(f"beta must be >= 0, got {self.beta}")
        if self.terminal_critic not in ("observed", "learned"):
            raise InvalidArgumentError(f"unknown terminal_critic {self.terminal_critic!r}")
        if self.control_matrix is not None:
            self.control_matrix = np.atleast_2d(np.asarray(self.control_matrix, dtype=float))


    def schedules_at(self, episode: int) -> dict:
        values = {name: getattr(self, name).at(episode) for name in _SCHEDULE_NAMES}
        batch = values["minibatch"]
        if int(batch) != batch or batch < 1:
            raise InvalidArgumentError(f"minibatch must be a positive integer, got {batch} at episode {episode}")
        values["minibatch"] = int(batch)
        return values


    @staticmethod
    def from_config(run_cfg, episodes: int | None = None, seed: int | None = None, progress: bool = False) -> "TrainConfig":
        """
        Build the trainer settings from a ``RunConfig``.

        Args:
            run_cfg: Validated ``RunConfig``.
            episodes (int | None): Override of ``training.episodes``.
            seed (int | None): Override of ``seed``.
            progress (bool): Show a progress bar.
        """

        training = run_cfg.training
        schedules = training.schedules
        initial_measure = training.initial_measure
        return TrainConfig(
            episodes=episodes if episodes is not None else training.episodes,
            grid=TimeGrid.from_config(run_cfg.environment),
            rho_s=Schedule.from_config(schedules.rho_s),
            rho_e=Schedule.from_config(schedules.rho_e),
            rho_g=Schedule.from_config(schedules.rho_g),
            lam=Schedule.from_config(schedules.lam),
            minibatch=Schedule.from_config(schedules.minibatch),
            beta=training.beta,
            clip_norm=training.clip_norm,
            seed=seed if seed is not None else run_cfg.seed,
            oracle_mean=run_cfg.environment.oracle_mean,
            terminal_critic=training.terminal_critic,
            record_every=training.record_every,
            control_matrix=np.array(run_cfg.parametrisation.control_matrix, dtype=float),
            initial_measure=None if initial_measure is None else np.array(initial_measure, dtype=float),
            progress=progress,
        )


def clip_by_norm(vector: np.ndarray, cap: Optional[float]) -> np.ndarray:
    """Rescale ``vector`` to L2 norm ``cap`` when it is longer; direction is kept."""

    if cap is None:
        return vector
    norm = float(np.linalg.norm(vector))
    if norm > cap:
        return vector * (cap / norm)
    return vector


class Trainer:
    """
    Base class for the actor-critic trainers.

    Owns the episode loop, schedule lookup, parameter updates and abort
    handling; subclasses implement ``episode``.

    Attributes:
        env (Environment): Simulator.
        actor (Actor): Policy, updated in place.
        critic (Critic): Value function, updated in place.
        cfg (TrainConfig): Settings.
        measures (list): Per-node estimates of the population law, kept across episodes.
    """

    mode: str = "abstract"


    def __init__(self, env: Environment, actor: Actor, critic: Critic, cfg: TrainConfig):
        if env.grid != cfg.grid:
            raise InvalidArgumentError(f"simulator grid {env.grid!r} differs from training grid {cfg.grid!r}")
        if cfg.control_matrix is not None and cfg.control_matrix.shape != (env.state_dim, env.action_dim):
            raise InvalidArgumentError(
                f"control matrix must be {env.state_dim} x {env.action_dim}, got {cfg.control_matrix.shape}"
            )

        self.env = env
        self.actor = actor
        self.critic = critic
        self.cfg = cfg
        self.streams = RolloutStreams.from_seed(cfg.seed)
        self.measures = initial_measures(env, cfg.initial_measure)


    def episode(self, episode: int, schedules: dict) -> tuple[float, float]:
        """Run one training episode; returns (mean cost, mean regularised cost)."""

        raise NotImplementedError("Subclasses must implement this method.")


    def run(self) -> TrainReport:
        """
        Train for ``cfg.episodes`` episodes.

        A non-finite state or parameter stops the run; the actor and critic
        keep the last finite parameters and the report is marked aborted.

        Returns:
            TrainReport: Parameter and cost history.
        """

        cfg = self.cfg
        report = TrainReport(self.mode, self.critic.n_params, self.actor.n_params)
        logger.info(
            "%s training: actor=%s (variance %s * lam), critic=%s, episodes=%d, n_steps=%d, seed=%d",
            self.mode, self.actor.kind, self.actor.variance_scale, self.critic.kind,
            cfg.episodes, cfg.grid.n_steps, cfg.seed,
        )
        if cfg.oracle_mean:
            logger.info("running costs use the exact population mean")

        start = time.perf_counter()
        episodes = tqdm(range(1, cfg.episodes + 1), desc=f"{self.mode} training", disable=not cfg.progress)
        for i in episodes:
            schedules = cfg.schedules_at(i)
            for name in _SCHEDULE_NAMES:
                if getattr(cfg, name).is_switch(i):
                    logger.info("episode %d: %s -> %s", i, name, schedules[name])

            try:
                cost, regularised = self.episode(i, schedules)
            except NumericError as err:
                err = err.with_context(episode=i)
                logger.error("training aborted, keeping last finite parameters: %s", err)
                report.abort(i, str(err))
                break

            if i % cfg.record_every == 0 or i == cfg.episodes:
                report.record(i, schedules, cost, regularised, self.critic.params, self.actor.params)
                logger.debug("episode %d: cost %.6f, eta %s, theta %s", i, cost, self.critic.params, self.actor.params)
            if cfg.progress:
                episodes.set_postfix(cost=f"{cost:.4f}")

        report.final_eta = self.critic.params.copy()
        report.final_theta = self.actor.params.copy()
        report.wall_clock = time.perf_counter() - start
        logger.info("%s training finished in %.1fs: eta=%s theta=%s", self.mode, report.wall_clock,
                    report.final_eta, report.final_theta)
        return report


    def _apply(self, d_eta, g_theta, rho_e, rho_g, step: int | None = None) -> None:
        """Critic ascent along ``d_eta``, actor descent along ``g_theta``."""

        d_eta = clip_by_norm(np.asarray(d_eta, dtype=float), self.cfg.clip_norm)
        g_theta = clip_by_norm(np.asarray(g_theta, dtype=float), self.cfg.clip_norm)
        eta = self.critic.params + rho_e * d_eta
        theta = self.actor.params - rho_g * g_theta
        if not (np.all(np.isfinite(eta)) and np.all(np.isfinite(theta))):
            raise NumericError("non-finite parameters after update", step=step)

        self.critic.set_params(eta)
        self.critic.project()
        self.actor.set_params(theta)
        self.actor.project()


class OfflineTrainer(Trainer):
    """
    Episode-wise actor-critic: simulate whole episodes, then update once.

    Episodes of a minibatch run against a frozen copy of the measure
    estimates; their states are folded into the shared estimates afterwards
    in batch order.
    """

    mode = "offline"


    def episode(self, episode: int, schedules: dict) -> tuple[float, float]:
        cfg = self.cfg
        lam, rho_s, batch = schedules["lam"], schedules["rho_s"], schedules["minibatch"]

        frozen = self.measures
        d_eta = np.zeros(self.critic.n_params)
        g_theta = np.zeros(self.actor.n_params)
        costs, regularised, states = [], [], []

        for _ in range(batch):
            trace = rollout(self.env, self.actor, list(frozen), lam, rho_s, self.streams)
            d_eta += offline_critic_delta(trace, self.critic, self.actor, lam, cfg.beta)
            g_theta += offline_policy_gradient(
                trace, self.critic, self.actor, lam, cfg.beta, cfg.control_matrix, cfg.terminal_critic
            )
            costs.append(trace.total_cost())
            regularised.append(trace.regularised_cost())
            states.append(trace.states)

        self._apply(d_eta / batch, g_theta / batch, schedules["rho_e"], schedules["rho_g"])

        states = np.stack(states)
        self.measures = [mu.update_many(states[:, k], rho_s) for k, mu in enumerate(frozen)]
        return float(np.mean(costs)), float(np.mean(regularised))


class OnlineTrainer(Trainer):
    """
    Step-wise actor-critic: parameters move after every time step.

    ``minibatch`` agents are simulated side by side; each sees the frozen
    estimate at its node updated with its own state, and the per-step
    updates average over agents. The value at the next node is read against
    the estimate stored at the start of the episode.
    """

    mode = "online"


    def episode(self, episode: int, schedules: dict) -> tuple[float, float]:
        cfg = self.cfg
        env, actor, critic = self.env, self.actor, self.critic
        lam, rho_s, batch = schedules["lam"], schedules["rho_s"], schedules["minibatch"]
        n, dt = cfg.grid.n_steps, cfg.grid.dt

        frozen = self.measures
        updated = list(frozen)
        x = env.sample_initial(self.streams.initial, size=batch)
        cost = np.zeros(batch)
        penalty = np.zeros(batch)

        for k in range(n):
            t = cfg.grid[k]
            mu_bar = frozen[k].preview_mean(x, rho_s)
            updated[k] = frozen[k].update_many(x, rho_s)

            a = actor.sample(t, x, mu_bar, lam, self.streams.action)
            log_p = actor.log_density(t, x, mu_bar, a, lam)
            step = env.step(k, x, a, mu_bar, self.streams.env)
            x_next = step.next_state
            cost += step.running_cost * dt
            penalty += lam * log_p * dt

            if k == n - 1:
                mu_T = frozen[n].preview_mean(x_next, rho_s)
                updated[n] = frozen[n].update_many(x_next, rho_s)
                terminal = env.terminal_cost(x_next, mu_T)
                cost += terminal
                next_record = StepRecord(x_next, mu_T, terminal_cost=terminal)
            else:
                next_record = StepRecord(x_next, np.broadcast_to(frozen[k + 1].mean, x_next.shape))

            record = StepRecord(x, mu_bar, a, step.running_cost)
            _, d_eta, d_theta = online_deltas(
                k, record, next_record, critic, actor, lam, cfg.beta, dt, cfg.control_matrix
            )
            self._apply(d_eta.mean(axis=0), d_theta.mean(axis=0), schedules["rho_e"], schedules["rho_g"], step=k)
            x = x_next

        self.measures = updated
        return float(cost.mean()), float((cost + penalty).mean())


def train_offline(env: Environment, actor: Actor, critic: Critic, cfg: TrainConfig) -> TrainReport:
    return OfflineTrainer(env, actor, critic, cfg).run()


def train_online(env: Environment, actor: Actor, critic: Critic, cfg: TrainConfig) -> TrainReport:
    return OnlineTrainer(env, actor, critic, cfg).run()
