import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from mfc_engine.utils.csv_writer import write_csv


def _flatten(value, size: int) -> list[float]:
    return [float(v) for v in np.broadcast_to(np.asarray(value, dtype=float), (size,))]


@dataclass
class EpisodeRecord:
    episode: int
    lam: float
    rho_s: float
    rho_e: list[float]
    rho_g: list[float]
    minibatch: int
    cost: float
    regularised_cost: float
    eta: np.ndarray
    theta: np.ndarray


@dataclass
class TrainReport:
    """
    Parameter and cost history of a training run.

    ``final_eta`` and ``final_theta`` are the last parameters that were finite;
    after an abort they are the snapshot the run stopped on.
    """

    mode: str
    n_eta: int
    n_theta: int
    records: list[EpisodeRecord] = field(default_factory=list)
    final_eta: Optional[np.ndarray] = None
    final_theta: Optional[np.ndarray] = None
    aborted: bool = False
    abort_reason: Optional[str] = None
    abort_episode: Optional[int] = None
    wall_clock: float = 0.0


    def record(self, episode: int, schedules: dict, cost: float, regularised_cost: float, eta, theta) -> None:
        self.records.append(EpisodeRecord(
            episode=episode,
            lam=float(schedules["lam"]),
            rho_s=float(schedules["rho_s"]),
            rho_e=_flatten(schedules["rho_e"], self.n_eta),
            rho_g=_flatten(schedules["rho_g"], self.n_theta),
            minibatch=int(schedules["minibatch"]),
            cost=float(cost),
            regularised_cost=float(regularised_cost),
            eta=np.array(eta, dtype=float),
            theta=np.array(theta, dtype=float),
        ))


    def abort(self, episode: int, reason: str) -> None:
        self.aborted = True
        self.abort_episode = episode
        self.abort_reason = reason


    @property
    def episodes(self) -> np.ndarray:
        return np.array([r.episode for r in self.records], dtype=int)


    @property
    def eta_history(self) -> np.ndarray:
        return np.array([r.eta for r in self.records]).reshape(len(self.records), self.n_eta)


    @property
    def theta_history(self) -> np.ndarray:
        return np.array([r.theta for r in self.records]).reshape(len(self.records), self.n_theta)


    @property
    def costs(self) -> np.ndarray:
        return np.array([r.cost for r in self.records])


    def write_csv(self, out_dir: str) -> tuple[str, str]:
        """
        Write ``params.csv`` (episode, eta_*, theta_*) and ``costs.csv``
        (episode, schedule values, cost, regularised_cost) into ``out_dir``.

        Returns:
            tuple[str, str]: Paths of the two files.
        """

        eta_cols = [f"eta_{i + 1}" for i in range(self.n_eta)]
        theta_cols = [f"theta_{i + 1}" for i in range(self.n_theta)]
        params_rows = (
            {"episode": r.episode, **dict(zip(eta_cols, r.eta)), **dict(zip(theta_cols, r.theta))}
            for r in self.records
        )
        params_path = write_csv(os.path.join(out_dir, "params.csv"), ["episode", *eta_cols, *theta_cols], params_rows)

        rho_e_cols = [f"rho_e_{i + 1}" for i in range(self.n_eta)]
        rho_g_cols = [f"rho_g_{i + 1}" for i in range(self.n_theta)]
        cost_cols = ["episode", "lam", "rho_s", *rho_e_cols, *rho_g_cols, "minibatch", "cost", "regularised_cost"]
        cost_rows = (
            {
                "episode": r.episode, "lam": r.lam, "rho_s": r.rho_s,
                **dict(zip(rho_e_cols, r.rho_e)), **dict(zip(rho_g_cols, r.rho_g)),
                "minibatch": r.minibatch, "cost": r.cost, "regularised_cost": r.regularised_cost,
            }
            for r in self.records
        )
        costs_path = write_csv(os.path.join(out_dir, "costs.csv"), cost_cols, cost_rows)
        return params_path, costs_path


    def snapshot(self) -> dict:
        """Final parameters and abort state, JSON-serialisable."""

        return {
            "mode": self.mode,
            "eta": [float(v) for v in self.final_eta],
            "theta": [float(v) for v in self.final_theta],
            "aborted": self.aborted,
            "abort_reason": self.abort_reason,
            "abort_episode": self.abort_episode,
            "episodes_completed": int(self.records[-1].episode) if self.records else 0,
        }
