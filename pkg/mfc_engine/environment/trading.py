import numpy as np

from mfc_engine.core.errors import InvalidArgumentError
from mfc_engine.core.time_grid import TimeGrid
from mfc_engine.environment.base import Environment, EnvStep
from mfc_engine.environment.coefficients import LqCoefficients


class TradingEnvironment(Environment):
    """
    Optimal trading with a penalty on the terminal variance of the inventory.

    Euler-Maruyama for dX = C a dt + gamma dW; running cost N a^2 + 2 H a and
    terminal cost P (X_T - mu_bar_T)^2, the particle form of P Var(X_T).
    """

    kind = "trading"


    def __init__(
            self,
            grid: TimeGrid,
            p: float = 3.0,
            h: float = 2.0,
            gamma: float = 1.0,
            n: float = 1.0,
            c: float = 1.0,
            initial_mean=1.0,
            initial_variance=1.0
        ):
        super().__init__(grid, 1, 1, initial_mean, initial_variance)
        self.p = float(p)
        self.h = float(h)
        self.gamma = float(gamma)
        self.n = float(n)
        self.c = float(c)


    def transition(self, k, x, a, mu_bar, dw) -> EnvStep:
        next_state = x + self.c * a * self.grid.dt + self.gamma * dw[..., None]
        a0 = a[..., 0]
        running_cost = self.n * a0 ** 2 + 2.0 * self.h * a0
        return EnvStep(next_state, running_cost)


    def terminal_cost(self, x_T, mu_bar) -> np.ndarray:
        y = np.asarray(x_T, dtype=float) - np.asarray(mu_bar, dtype=float)
        return self.p * y[..., 0] ** 2


    @classmethod
    def from_coefficients(
            cls,
            grid: TimeGrid,
            coeffs: LqCoefficients,
            initial_mean=1.0,
            initial_variance=1.0
        ) -> "TradingEnvironment":
        """Read P, H, gamma, N and C from a scalar coefficient block."""

        if coeffs.d != 1 or coeffs.m != 1:
            raise InvalidArgumentError("the trading simulator is one-dimensional")
        return cls(
            grid,
            p=coeffs.P[0, 0],
            h=coeffs.H[0],
            gamma=coeffs.gamma[0],
            n=coeffs.N[0, 0],
            c=coeffs.C[0, 0],
            initial_mean=initial_mean,
            initial_variance=initial_variance,
        )
