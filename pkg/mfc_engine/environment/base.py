from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from mfc_engine.core.errors import InvalidArgumentError, NumericError
from mfc_engine.core.rng import RngStream
from mfc_engine.core.time_grid import TimeGrid


@dataclass(frozen=True, eq=False)
class EnvStep:
    """
    Outcome of one simulator step.

    Attributes:
        next_state (np.ndarray): X_{t_{k+1}}, shape (..., d).
        running_cost (np.ndarray): f(X_{t_k}, mu_{t_k}, a_{t_k}), shape (...).
    """

    next_state: np.ndarray
    running_cost: np.ndarray


class Environment(ABC):
    """
    Black-box mean-field simulator.

    The learner only sees states and costs. All methods are vectorised over
    leading axes: ``x`` has shape (..., d), ``a`` shape (..., m), and
    ``mu_bar`` is either (d,) or broadcastable to ``x``. The model is driven by
    a single scalar Brownian motion per agent.

    Attributes:
        grid (TimeGrid): Simulation grid.
        state_dim (int): d.
        action_dim (int): m.
        initial_mean (np.ndarray): Mean of the initial law.
        initial_covariance (np.ndarray): Covariance of the initial law (zero for a Dirac).
    """

    kind: str = "abstract"


    def __init__(
            self,
            grid: TimeGrid,
            state_dim: int,
            action_dim: int,
            initial_mean,
            initial_covariance
        ):
        self.grid = grid
        self.state_dim = int(state_dim)
        self.action_dim = int(action_dim)
        self.initial_mean = np.reshape(np.asarray(initial_mean, dtype=float), (self.state_dim,))
        self.initial_covariance = np.reshape(
            np.asarray(initial_covariance, dtype=float), (self.state_dim, self.state_dim)
        )

        eigvals, eigvecs = np.linalg.eigh(0.5 * (self.initial_covariance + self.initial_covariance.T))
        if eigvals.min() < -1e-12:
            raise InvalidArgumentError("initial covariance must be positive semidefinite")
        self._initial_root = eigvecs @ np.diag(np.sqrt(np.clip(eigvals, 0.0, None))) @ eigvecs.T


    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(d={self.state_dim}, m={self.action_dim}, {self.grid!r}, "
            f"X0 ~ N({self.initial_mean.tolist()}, {self.initial_covariance.tolist()}))"
        )


    def sample_initial(self, rng: RngStream, size: int | None = None) -> np.ndarray:
        """
        Draw from the initial law.

        Args:
            rng (RngStream): Stream to draw from.
            size (int | None): Number of agents; None for a single state of shape (d,).

        Returns:
            np.ndarray: Initial state(s).
        """

        shape = (self.state_dim,) if size is None else (size, self.state_dim)
        z = rng.standard_normal(shape)
        return self.initial_mean + z @ self._initial_root.T


    def draw_noise(self, rng: RngStream, batch_shape: tuple = ()) -> np.ndarray:
        """Brownian increments over one step, N(0, dt) per agent."""

        return np.sqrt(self.grid.dt) * rng.standard_normal(batch_shape)


    def step(self, k: int, x, a, mu_bar, rng: RngStream) -> EnvStep:
        """
        Advance the state by one grid step.

        Args:
            k (int): Time index, 0 <= k < n_steps.
            x: Current state(s), shape (..., d).
            a: Action(s), shape (..., m).
            mu_bar: Population mean supplied by the caller.
            rng (RngStream): Source of the Brownian increment.

        Returns:
            EnvStep: Next state and running cost.

        Raises:
            InvalidArgumentError: If k is outside the grid.
            NumericError: If inputs or outputs are non-finite.
        """

        if not 0 <= k < self.grid.n_steps:
            raise InvalidArgumentError(f"time index {k} outside [0, {self.grid.n_steps})")

        x = np.asarray(x, dtype=float)
        a = np.asarray(a, dtype=float)
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(a))):
            raise NumericError("non-finite state or action reached the simulator", step=k)

        dw = self.draw_noise(rng, x.shape[:-1])
        result = self.transition(k, x, a, np.asarray(mu_bar, dtype=float), dw)

        if not (np.all(np.isfinite(result.next_state)) and np.all(np.isfinite(result.running_cost))):
            raise NumericError("simulator produced a non-finite state or cost", step=k)
        return result


    @abstractmethod
    def transition(self, k: int, x: np.ndarray, a: np.ndarray, mu_bar: np.ndarray, dw: np.ndarray) -> EnvStep:
        """Deterministic map from (state, action, mean, Brownian increment) to the next step."""
        pass


    @abstractmethod
    def terminal_cost(self, x_T, mu_bar) -> np.ndarray:
        """Terminal cost g(X_T, mu_T)."""
        pass
