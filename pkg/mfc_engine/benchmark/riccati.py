import logging
from dataclasses import dataclass

import numpy as np

from mfc_engine.core.errors import AssumptionViolationError, InvalidArgumentError
from mfc_engine.core.time_grid import TimeGrid
from mfc_engine.environment.coefficients import LqCoefficients

logger = logging.getLogger(__name__)

DEFAULT_NODES = 2000


def _sym(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.T)


def entropy_source(lam: float, action_dim: int, S: np.ndarray) -> float:
    """
    Constant term left by minimising a'Sa + 2b.a + lam log p over Gaussian
    densities p: (lam m / 2) log(pi lam) - (lam / 2) log det S, and 0 at lam = 0.
    """

    if lam == 0.0:
        return 0.0
    _, logdet = np.linalg.slogdet(S)
    return 0.5 * lam * action_dim * np.log(np.pi * lam) - 0.5 * lam * logdet


@dataclass(frozen=True, eq=False)
class RiccatiSolution:
    """
    Grid solution of the LQ benchmark system.

    The optimal value is (x - mu_bar)'K(t)(x - mu_bar) + mu_bar'Lam(t)mu_bar + 2 Y(t).x + R(t).

    Attributes:
        grid (TimeGrid): Integration grid.
        K (np.ndarray): Shape (n + 1, d, d).
        Lam (np.ndarray): Shape (n + 1, d, d).
        Y (np.ndarray): Shape (n + 1, d).
        R (np.ndarray): Shape (n + 1,).
        lam (float): Temperature used in the R equation.
        coeffs (LqCoefficients): Model the system was solved for.
    """

    grid: TimeGrid
    K: np.ndarray
    Lam: np.ndarray
    Y: np.ndarray
    R: np.ndarray
    lam: float
    coeffs: LqCoefficients


    def _interp(self, t, values: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        flat = values.reshape(values.shape[0], -1)
        columns = [np.interp(t, self.grid.times, flat[:, j]) for j in range(flat.shape[1])]
        return np.stack(columns, axis=-1).reshape(t.shape + values.shape[1:])


    def at(self, t) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(K, Lam, Y, R) at time(s) t, linearly interpolated between nodes."""

        return self._interp(t, self.K), self._interp(t, self.Lam), self._interp(t, self.Y), self._interp(t, self.R)


    def feedback(self, t) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Coefficients of the optimal policy mean phi1 x + phi2 mu_bar + phi3.

        Returns:
            tuple: phi1 (..., m, d), phi2 (..., m, d), phi3 (..., m).
        """

        c = self.coeffs
        K, Lam, Y, _ = self.at(t)
        S = c.N + c.F.T @ K @ c.F
        U = c.I + c.C.T @ K + c.F.T @ K @ c.D
        U_hat = c.I_hat + c.C.T @ Lam + c.F.T @ K @ c.D_hat
        O = c.H + np.einsum("ji,...jk,k->...i", c.F, K, c.gamma) + Y @ c.C

        phi1 = -np.linalg.solve(S, U)
        phi2 = -np.linalg.solve(S, U_hat - U)
        phi3 = -np.linalg.solve(S, O[..., None])[..., 0]
        return phi1, phi2, phi3


    def covariance(self, t) -> np.ndarray:
        """Optimal policy covariance (lam / 2) S(t)^-1, shape (..., m, m)."""

        c = self.coeffs
        K = self._interp(t, self.K)
        S = c.N + c.F.T @ K @ c.F
        return 0.5 * self.lam * np.linalg.inv(S)


def _derivative(t: float, state: tuple, coeffs: LqCoefficients, lam: float) -> tuple:
    c = coeffs
    K, Lam, Y, R = state

    S = c.N + c.F.T @ K @ c.F
    try:
        np.linalg.cholesky(S)
    except np.linalg.LinAlgError:
        raise AssumptionViolationError(f"S(t) = N + F'K(t)F lost positive definiteness at t={t:.6g}")

    U = c.I + c.C.T @ K + c.F.T @ K @ c.D
    U_hat = c.I_hat + c.C.T @ Lam + c.F.T @ K @ c.D_hat
    O = c.H + c.C.T @ Y + c.F.T @ K @ c.gamma

    S_inv_U = np.linalg.solve(S, U)
    S_inv_U_hat = np.linalg.solve(S, U_hat)
    S_inv_O = np.linalg.solve(S, O)

    dK = c.beta * K - (c.Q + K @ c.B + c.B.T @ K + c.D.T @ K @ c.D - U.T @ S_inv_U)
    dLam = c.beta * Lam - (
        c.Q_hat + Lam @ c.B_hat + c.B_hat.T @ Lam + c.D_hat.T @ K @ c.D_hat - U_hat.T @ S_inv_U_hat
    )
    dY = c.beta * Y - (c.M + c.B_hat.T @ Y + c.D_hat.T @ K @ c.gamma - U_hat.T @ S_inv_O)
    dR = c.beta * R - (c.gamma @ K @ c.gamma - O @ S_inv_O) + entropy_source(lam, c.m, S)
    return dK, dLam, dY, dR


def _shift(state: tuple, h: float, slope: tuple) -> tuple:
    K, Lam, Y, R = (s + h * k for s, k in zip(state, slope))
    return _sym(K), _sym(Lam), Y, R


def solve_riccati(coeffs: LqCoefficients, lam: float, grid: TimeGrid) -> RiccatiSolution:
    """
    Integrate the Riccati system backward from T with classical RK4.

    Terminal values are (P, P + P_bar, L, 0). K and Lam are symmetrised after
    every stage.

    Args:
        coeffs (LqCoefficients): Model coefficients.
        lam (float): Temperature; 0 drops the entropy source from R.
        grid (TimeGrid): Integration grid.

    Returns:
        RiccatiSolution: Values at every grid node.

    Raises:
        InvalidArgumentError: If lam is negative.
        AssumptionViolationError: If S(t) stops being positive definite.
    """

    if not np.isfinite(lam) or lam < 0.0:
        raise InvalidArgumentError(f"temperature must be nonnegative, got {lam}")

    n, d = grid.n_steps, coeffs.d
    K = np.empty((n + 1, d, d))
    Lam = np.empty((n + 1, d, d))
    Y = np.empty((n + 1, d))
    R = np.empty(n + 1)

    state = (coeffs.P.copy(), _sym(coeffs.P_hat), coeffs.L.copy(), 0.0)
    K[n], Lam[n], Y[n], R[n] = state
    times = grid.times

    for k in range(n - 1, -1, -1):
        t = times[k + 1]
        h = times[k] - t
        k1 = _derivative(t, state, coeffs, lam)
        k2 = _derivative(t + 0.5 * h, _shift(state, 0.5 * h, k1), coeffs, lam)
        k3 = _derivative(t + 0.5 * h, _shift(state, 0.5 * h, k2), coeffs, lam)
        k4 = _derivative(t + h, _shift(state, h, k3), coeffs, lam)
        slope = tuple((a + 2.0 * b + 2.0 * c + e) / 6.0 for a, b, c, e in zip(k1, k2, k3, k4))
        state = _shift(state, h, slope)
        K[k], Lam[k], Y[k], R[k] = state

    # S at t = 0 has not been checked by any stage
    _derivative(times[0], state, coeffs, lam)

    logger.debug("Riccati system solved on %r with lam=%g: K(0)=%s, R(0)=%.10g", grid, lam, K[0].tolist(), R[0])
    for array in (K, Lam, Y, R):
        array.setflags(write=False)
    return RiccatiSolution(grid, K, Lam, Y, R, float(lam), coeffs)
