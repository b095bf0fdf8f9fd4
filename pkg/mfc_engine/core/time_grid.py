import numpy as np
import QuantLib as ql

from mfc_engine.core.errors import InvalidArgumentError


class TimeGrid:
    """
    Uniform discretisation t_k = k * dt of the horizon [0, T].

    Node positions come from a QuantLib ``TimeGrid``, which builds node k as
    ``k * dt`` so the last node sits within one ulp of the horizon.

    Attributes:
        horizon (float): Terminal time T.
        n_steps (int): Number of steps n; the grid has n + 1 nodes.
        times (np.ndarray): Node times, shape (n + 1,).
    """


    def __init__(self, horizon: float, n_steps: int):
        """
        Args:
            horizon (float): Terminal time T, strictly positive.
            n_steps (int): Number of steps, at least 1.

        Raises:
            InvalidArgumentError: If either argument is out of range.
        """

        if not np.isfinite(horizon) or horizon <= 0.0:
            raise InvalidArgumentError(f"horizon must be positive, got {horizon}")
        if int(n_steps) != n_steps or n_steps < 1:
            raise InvalidArgumentError(f"n_steps must be a positive integer, got {n_steps}")

        self.horizon: float = float(horizon)
        self.n_steps: int = int(n_steps)
        self._ql_grid = ql.TimeGrid(self.horizon, self.n_steps)
        self.times: np.ndarray = np.array([self._ql_grid[i] for i in range(len(self._ql_grid))])
        self.times.setflags(write=False)


    @property
    def dt(self) -> float:
        return self.horizon / self.n_steps


    def __len__(self) -> int:
        return len(self.times)


    def __getitem__(self, k: int) -> float:
        return float(self.times[k])


    def __eq__(self, other) -> bool:
        if not isinstance(other, TimeGrid):
            return NotImplemented
        return self.horizon == other.horizon and self.n_steps == other.n_steps


    def __hash__(self) -> int:
        return hash((self.horizon, self.n_steps))


    def __repr__(self) -> str:
        return f"TimeGrid(horizon={self.horizon}, n_steps={self.n_steps}, dt={self.dt:.6g})"


    def step_dt(self, k: int) -> float:
        """Length of step k as reported by QuantLib."""

        return float(self._ql_grid.dt(k))


    def time_to_go(self, t):
        """T - t, clipped at zero so evaluations at the last node are exact."""

        return np.maximum(self.horizon - np.asarray(t, dtype=float), 0.0)


    def refine(self, n_steps: int) -> "TimeGrid":
        """Grid over the same horizon with a different number of steps."""

        return TimeGrid(self.horizon, n_steps)


    @staticmethod
    def from_config(cfg) -> "TimeGrid":
        """
        Create a grid from a configuration block with ``horizon`` and ``n_steps``.

        Args:
            cfg: Pydantic model or dict.

        Returns:
            TimeGrid: The configured grid.
        """

        if isinstance(cfg, dict):
            return TimeGrid(cfg["horizon"], cfg["n_steps"])
        return TimeGrid(cfg.horizon, cfg.n_steps)
