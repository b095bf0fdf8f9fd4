"""Critic increments and policy-gradient estimates built from simulated episodes."""

from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from mfc_engine.core.errors import InvalidArgumentError
from mfc_engine.engine.rollout import EpisodeTrace
from mfc_engine.models.base import Actor, Critic, h_theta


@dataclass(frozen=True, eq=False)
class StepRecord:
    """State of one agent (or a batch of agents) at a grid node."""

    state: np.ndarray
    mean: np.ndarray
    action: Optional[np.ndarray] = None
    cost: Optional[np.ndarray] = None
    terminal_cost: Optional[np.ndarray] = None


def _log_densities(trace: EpisodeTrace, actor: Actor, lam: float) -> np.ndarray:
    if lam == 0.0:
        return np.zeros(len(trace))
    n = len(trace)
    return actor.log_density(trace.times[:n], trace.states[:n], trace.means[:n], trace.actions, lam)


def returns_to_go(trace: EpisodeTrace, actor: Actor, lam: float, beta: float = 0.0) -> np.ndarray:
    """
    Discounted regularised cost-to-go from each node t_0 .. t_{n-1}.

    G_n = g and G_k = (f_k + lam log p_k) dt + exp(-beta dt) G_{k+1}.
    """

    dt = trace.dt
    running = (trace.costs + lam * _log_densities(trace, actor, lam)) * dt
    decay = np.exp(-beta * dt)

    G = np.empty(len(trace))
    acc = trace.terminal_cost
    for k in range(len(trace) - 1, -1, -1):
        acc = running[k] + decay * acc
        G[k] = acc
    return G


def offline_critic_delta(
        trace: EpisodeTrace,
        critic: Critic,
        actor: Actor,
        lam: float,
        beta: float = 0.0
    ) -> np.ndarray:
    """
    Monte Carlo regression direction for the critic:

        sum_k (G_k - J(t_k, X_k, mu_bar_k)) grad_eta J(t_k, X_k, mu_bar_k) dt

    Returns:
        np.ndarray: Shape (critic.n_params,).
    """

    n = len(trace)
    G = returns_to_go(trace, actor, lam, beta)
    args = (trace.times[:n], trace.states[:n], trace.means[:n], lam)
    J = critic.value(*args)
    grad = critic.grad_eta(*args)
    return ((G - J) * trace.dt) @ grad


def offline_policy_gradient(
        trace: EpisodeTrace,
        critic: Critic,
        actor: Actor,
        lam: float,
        beta: float = 0.0,
        control_matrix=None,
        terminal_critic: Literal["observed", "learned"] = "observed"
    ) -> np.ndarray:
    """
    Policy-gradient estimate from one episode:

        sum_k exp(-beta t_k) [ score_k (J_{k+1} - J_k + (f_k + lam log p_k - beta J_k) dt) + H_k dt ]

    The terminal value J_n is the observed terminal cost unless ``terminal_critic``
    is "learned". H is the mean-field correction; it is omitted when no
    control matrix is given.

    Raises:
        InvalidArgumentError: If lam <= 0 (the score needs a randomised policy)
            or ``terminal_critic`` is unknown.
    """

    if lam <= 0.0:
        raise InvalidArgumentError(f"policy gradient needs lam > 0, got {lam}")
    if terminal_critic not in ("observed", "learned"):
        raise InvalidArgumentError(f"unknown terminal_critic {terminal_critic!r}")

    n = len(trace)
    dt = trace.dt
    t, x, mu = trace.times[:n], trace.states[:n], trace.means[:n]

    J = critic.value(trace.times, trace.states, trace.means, lam)
    if terminal_critic == "observed":
        J = J.copy()
        J[n] = trace.terminal_cost

    log_p = actor.log_density(t, x, mu, trace.actions, lam)
    score = actor.grad_log_density(t, x, mu, trace.actions, lam)
    increment = J[1:] - J[:-1] + (trace.costs + lam * log_p - beta * J[:-1]) * dt

    terms = score * increment[:, None]
    if control_matrix is not None:
        terms = terms + h_theta(actor, critic, t, x, mu, control_matrix) * dt

    discount = np.exp(-beta * t)
    return discount @ terms


def online_deltas(
        k: int,
        record: StepRecord,
        next_record: StepRecord,
        critic: Critic,
        actor: Actor,
        lam: float,
        beta: float,
        dt: float,
        control_matrix=None
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    One-step temporal-difference quantities at node t_k = k dt.

        delta = J_{k+1} - J_k + (f_k + lam log p_k - beta J_k) dt

    where J_{k+1} is the terminal cost when ``next_record`` carries one.
    Records may hold a batch of agents along the leading axis. At lam = 0 the
    policy is deterministic: the log-density term and the score drop out.

    Returns:
        tuple: (delta (...,), critic direction delta grad_eta J_k (..., p),
            actor gradient delta score_k + H_k dt (..., q)).
    """

    if record.action is None or record.cost is None:
        raise InvalidArgumentError("record at t_k must carry the action and the running cost")

    t = k * dt
    J = critic.value(t, record.state, record.mean, lam)
    if next_record.terminal_cost is not None:
        J_next = np.asarray(next_record.terminal_cost, dtype=float)
    else:
        J_next = critic.value(t + dt, next_record.state, next_record.mean, lam)

    running = np.asarray(record.cost, dtype=float) - beta * J
    if lam > 0.0:
        running = running + lam * actor.log_density(t, record.state, record.mean, record.action, lam)
    delta = np.asarray(J_next - J + running * dt)

    d_eta = delta[..., None] * critic.grad_eta(t, record.state, record.mean, lam)
    if lam > 0.0:
        d_theta = delta[..., None] * actor.grad_log_density(t, record.state, record.mean, record.action, lam)
    else:
        d_theta = np.zeros(np.shape(delta) + (actor.n_params,))
    if control_matrix is not None:
        d_theta = d_theta + h_theta(actor, critic, t, record.state, record.mean, control_matrix) * dt
    return delta, d_eta, d_theta
