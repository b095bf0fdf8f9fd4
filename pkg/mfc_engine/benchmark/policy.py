from typing import Callable

import numpy as np

from mfc_engine.benchmark.riccati import RiccatiSolution
from mfc_engine.core.errors import AssumptionViolationError, InvalidArgumentError
from mfc_engine.core.measure import EmpiricalMeasure
from mfc_engine.core.rng import RngStream


class GaussianPolicy:
    """
    Randomised feedback policy N(mean_map(t, x, mu_bar), covariance_map(t)).

    Calling the policy returns its mean, so it can be handed to the evaluation
    harness as a deterministic policy-mean map.
    """


    def __init__(
            self,
            mean_map: Callable,
            covariance_map: Callable,
            action_dim: int
        ):
        self.mean_map = mean_map
        self.covariance_map = covariance_map
        self.action_dim = int(action_dim)


    def __call__(self, t, x, mu_bar) -> np.ndarray:
        return self.mean_map(t, x, mu_bar)


    def mean(self, t, x, mu_bar) -> np.ndarray:
        return self.mean_map(t, x, mu_bar)


    def covariance(self, t) -> np.ndarray:
        return self.covariance_map(t)


    def sample(self, t, x, mu_bar, rng: RngStream) -> np.ndarray:
        mean = self.mean(t, x, mu_bar)
        cov = self.covariance(t)
        if not np.any(cov):
            return mean
        z = rng.standard_normal(mean.shape)
        return mean + z @ np.linalg.cholesky(cov).T


    def log_density(self, t, x, mu_bar, a) -> np.ndarray:
        """Gaussian log density at ``a``; the covariance must be nonsingular."""

        residual = np.asarray(a, dtype=float) - self.mean(t, x, mu_bar)
        cov = self.covariance(t)
        sign, logdet = np.linalg.slogdet(cov)
        if sign <= 0:
            raise InvalidArgumentError("log density of a degenerate policy")
        mahalanobis = np.einsum("...i,ij,...j->...", residual, np.linalg.inv(cov), residual)
        return -0.5 * (self.action_dim * np.log(2.0 * np.pi) + logdet + mahalanobis)


    def entropy(self, t) -> float:
        """Differential entropy (m/2) log(2 pi e) + (1/2) log det Sigma(t)."""

        sign, logdet = np.linalg.slogdet(self.covariance(t))
        if sign <= 0:
            return -np.inf
        return 0.5 * self.action_dim * np.log(2.0 * np.pi * np.e) + 0.5 * logdet


def optimal_policy(sol: RiccatiSolution, coeffs=None, lam: float | None = None) -> GaussianPolicy:
    """
    Optimal Gaussian policy of the LQ benchmark.

    Mean -S^-1 (U x + (U_hat - U) mu_bar + O), covariance (lam / 2) S^-1.

    Args:
        sol (RiccatiSolution): Solved Riccati system.
        coeffs (LqCoefficients | None): Must be the coefficients ``sol`` was solved for; defaults to them.
        lam (float | None): Temperature of the covariance; defaults to ``sol.lam``.

    Returns:
        GaussianPolicy: The optimal policy.

    Raises:
        AssumptionViolationError: If S(t) is singular on the grid.
    """

    if coeffs is not None and coeffs is not sol.coeffs:
        raise InvalidArgumentError("coefficients differ from the ones the Riccati system was solved for")
    lam = sol.lam if lam is None else float(lam)
    if lam < 0.0:
        raise InvalidArgumentError(f"temperature must be nonnegative, got {lam}")

    c = sol.coeffs
    S_nodes = c.N + c.F.T @ sol.K @ c.F
    if np.any(np.linalg.eigvalsh(S_nodes).min(axis=-1) <= 0.0):
        raise AssumptionViolationError("S(t) = N + F'K(t)F is singular on the grid")

    def mean_map(t, x, mu_bar):
        phi1, phi2, phi3 = sol.feedback(t)
        x = np.asarray(x, dtype=float)
        mu_bar = np.asarray(mu_bar, dtype=float)
        return (
            np.einsum("...ij,...j->...i", phi1, x)
            + np.einsum("...ij,...j->...i", phi2, mu_bar)
            + phi3
        )

    def covariance_map(t):
        K = sol.at(t)[0]
        return 0.5 * lam * np.linalg.inv(c.N + c.F.T @ K @ c.F)

    return GaussianPolicy(mean_map, covariance_map, c.m)


def optimal_value(sol: RiccatiSolution, t, x, mu) -> float:
    """
    Value (x - mu_bar)'K(t)(x - mu_bar) + mu_bar'Lam(t)mu_bar + 2Y(t).x + R(t).

    Args:
        mu: EmpiricalMeasure or its mean vector.
    """

    mu_bar = mu.mean if isinstance(mu, EmpiricalMeasure) else np.asarray(mu, dtype=float)
    x = np.asarray(x, dtype=float)
    K, Lam, Y, R = sol.at(t)
    y = x - mu_bar
    return float(y @ K @ y + mu_bar @ Lam @ mu_bar + 2.0 * Y @ x + R)


def initial_value(sol: RiccatiSolution, mean, covariance) -> float:
    """
    Expected optimal value at t = 0 when X_0 has the given mean and covariance
    (and the population mean equals that mean): tr(K Cov) + m'Lam m + 2Y.m + R.
    """

    mean = np.atleast_1d(np.asarray(mean, dtype=float))
    covariance = np.atleast_2d(np.asarray(covariance, dtype=float))
    K, Lam, Y, R = sol.K[0], sol.Lam[0], sol.Y[0], sol.R[0]
    return float(np.trace(K @ covariance) + mean @ Lam @ mean + 2.0 * Y @ mean + R)
