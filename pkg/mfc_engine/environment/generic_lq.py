import numpy as np

from mfc_engine.core.time_grid import TimeGrid
from mfc_engine.environment.base import Environment, EnvStep
from mfc_engine.environment.coefficients import LqCoefficients


def _quad(v: np.ndarray, matrix: np.ndarray, w: np.ndarray) -> np.ndarray:
    return np.einsum("...i,ij,...j->...", v, matrix, w)


class GenericLqEnvironment(Environment):
    """Euler-Maruyama simulator of an arbitrary LQ mean-field model."""

    kind = "generic_lq"


    def __init__(self, grid: TimeGrid, coeffs: LqCoefficients, initial_mean, initial_covariance):
        super().__init__(grid, coeffs.d, coeffs.m, initial_mean, initial_covariance)
        self._coeffs = coeffs


    def transition(self, k, x, a, mu_bar, dw) -> EnvStep:
        c = self._coeffs
        mu_bar = np.broadcast_to(mu_bar, x.shape)

        drift = x @ c.B.T + mu_bar @ c.B_bar.T + a @ c.C.T
        diffusion = c.gamma + x @ c.D.T + mu_bar @ c.D_bar.T + a @ c.F.T
        next_state = x + drift * self.grid.dt + diffusion * dw[..., None]

        running_cost = (
            _quad(x, c.Q, x)
            + _quad(mu_bar, c.Q_bar, mu_bar)
            + _quad(a, c.N, a)
            + 2.0 * _quad(a, c.I, x)
            + 2.0 * _quad(a, c.I_bar, mu_bar)
            + 2.0 * x @ c.M
            + 2.0 * a @ c.H
        )
        return EnvStep(next_state, running_cost)


    def terminal_cost(self, x_T, mu_bar) -> np.ndarray:
        c = self._coeffs
        x_T = np.asarray(x_T, dtype=float)
        mu_bar = np.broadcast_to(np.asarray(mu_bar, dtype=float), x_T.shape)
        return _quad(x_T, c.P, x_T) + _quad(mu_bar, c.P_bar, mu_bar) + 2.0 * x_T @ c.L
