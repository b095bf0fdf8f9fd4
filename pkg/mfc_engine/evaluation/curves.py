from dataclasses import dataclass
from itertools import product
from typing import Optional

import numpy as np

from mfc_engine.benchmark.riccati import RiccatiSolution
from mfc_engine.core.errors import UnsupportedCombinationError
from mfc_engine.core.time_grid import TimeGrid
from mfc_engine.models.base import Actor, Critic, LqActor, LqCritic
from mfc_engine.utils.csv_writer import write_csv


def _components(name: str, learnt: np.ndarray, exact: np.ndarray) -> dict:
    """Split (n + 1, ...) curves into one (learnt, exact) pair per entry."""

    tail = learnt.shape[1:]
    if all(size == 1 for size in tail):
        return {name: (learnt.reshape(-1), exact.reshape(-1))}
    curves = {}
    for index in product(*(range(size) for size in tail)):
        label = "_".join(str(i + 1) for i in index)
        curves[f"{name}_{label}"] = (learnt[(slice(None),) + index], exact[(slice(None),) + index])
    return curves


@dataclass
class CurveTable:
    """Learnt and benchmark coefficient curves on a grid."""

    times: np.ndarray
    curves: dict


    def gap(self, name: str) -> np.ndarray:
        learnt, exact = self.curves[name]
        return np.abs(learnt - exact)


    def sup_gap(self, name: str, until: Optional[float] = None) -> float:
        mask = np.ones(self.times.shape, dtype=bool) if until is None else self.times <= until
        return float(np.max(self.gap(name)[mask]))


    def field_names(self) -> list[str]:
        names = ["t"]
        for name in self.curves:
            names += [f"{name}_learnt", f"{name}_exact", f"{name}_gap"]
        return names


    def rows(self) -> list[dict]:
        rows = []
        for k, t in enumerate(self.times):
            row = {"t": t}
            for name, (learnt, exact) in self.curves.items():
                row[f"{name}_learnt"] = learnt[k]
                row[f"{name}_exact"] = exact[k]
                row[f"{name}_gap"] = abs(learnt[k] - exact[k])
            rows.append(row)
        return rows


    def write_csv(self, path: str) -> str:
        return write_csv(path, self.field_names(), self.rows())


def curve_export(
        sol: RiccatiSolution,
        critic: Critic,
        actor: Actor,
        grid: TimeGrid,
        path: Optional[str] = None
    ) -> CurveTable:
    """
    Tabulate the learnt K, Lam, Y, R and policy coefficients against the
    benchmark on ``grid``. The critic is read at the benchmark temperature.

    Raises:
        UnsupportedCombinationError: If the critic or actor has no LQ coefficients.
    """

    if not isinstance(critic, LqCritic) or not isinstance(actor, LqActor):
        raise UnsupportedCombinationError(
            f"curve export needs LQ actor and critic, got {type(actor).__name__} and {type(critic).__name__}"
        )

    times = np.asarray(grid.times)
    d, m = sol.coeffs.d, sol.coeffs.m

    learnt_value = critic.terms(times, sol.lam)
    exact_value = sol.at(times)
    learnt_policy = actor.policy_terms(times)
    exact_policy = sol.feedback(times)

    shapes = {"K": (d, d), "Lam": (d, d), "Y": (d,), "R": (), "phi1": (m, d), "phi2": (m, d), "phi3": (m,)}
    curves = {}
    for name, learnt, exact in zip(shapes, (*learnt_value, *learnt_policy), (*exact_value, *exact_policy)):
        shape = (times.shape[0],) + shapes[name]
        learnt = np.broadcast_to(learnt, shape)
        exact = np.broadcast_to(exact, shape)
        curves.update(_components(name, learnt, exact))

    table = CurveTable(times, curves)
    if path is not None:
        table.write_csv(path)
    return table
