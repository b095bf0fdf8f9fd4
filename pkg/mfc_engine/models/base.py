from abc import ABC, abstractmethod

import numpy as np

from mfc_engine.core.errors import InvalidArgumentError, UnsupportedCombinationError
from mfc_engine.core.gaussian import isotropic_log_density
from mfc_engine.core.rng import RngStream

POSITIVE_FLOOR = 1e-6


class Parametrised(ABC):
    """
    Holder of a flat parameter vector.

    Subclasses document their layout; optimiser code only sees the vector.
    ``positive`` marks components projected onto [POSITIVE_FLOOR, inf) after
    every update.
    """

    kind: str = "abstract"


    def __init__(self, params, horizon: float, positive: np.ndarray | None = None, n_params: int | None = None):
        self.params = np.array(params, dtype=float)
        if self.params.ndim != 1:
            raise InvalidArgumentError("parameters must be a flat vector")
        expected = n_params if n_params is not None else (None if positive is None else positive.shape[0])
        if expected is not None and self.params.shape[0] != expected:
            raise InvalidArgumentError(f"{self.kind} expects {expected} parameters, got {self.params.shape[0]}")
        self.horizon = float(horizon)
        self._positive = np.zeros(self.params.shape, dtype=bool) if positive is None else positive


    @property
    def n_params(self) -> int:
        return self.params.shape[0]


    def set_params(self, params) -> None:
        params = np.asarray(params, dtype=float)
        if params.shape != self.params.shape:
            raise InvalidArgumentError(
                f"{self.kind} expects {self.n_params} parameters, got {params.shape[0] if params.ndim else 0}"
            )
        self.params = params.copy()


    def project(self) -> None:
        """Clamp positively constrained components."""

        if self._positive.any():
            self.params[self._positive] = np.maximum(self.params[self._positive], POSITIVE_FLOOR)


    def time_to_go(self, t) -> np.ndarray:
        return np.maximum(self.horizon - np.asarray(t, dtype=float), 0.0)


    def __repr__(self) -> str:
        return f"{type(self).__name__}(params={np.array2string(self.params, precision=6)})"


class Critic(Parametrised):
    """Parametric value function J^eta(t, x, mu_bar)."""


    @abstractmethod
    def value(self, t, x, mu_bar, lam: float = 0.0) -> np.ndarray:
        """J at (t, x, mu_bar); vectorised over leading axes."""
        pass


    @abstractmethod
    def grad_eta(self, t, x, mu_bar, lam: float = 0.0) -> np.ndarray:
        """Gradient of ``value`` in eta, shape (..., n_params)."""
        pass


class LqCritic(Critic):
    """
    Critic with the quadratic shell

        J = (x - mu_bar)'K(t)(x - mu_bar) + mu_bar'Lam(t)mu_bar + 2Y(t).x + R(t).

    Subclasses provide the time functions and their parameter derivatives;
    ``lam`` is the temperature currently used for training (only R may use it).
    """


    @abstractmethod
    def terms(self, t, lam: float = 0.0) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """K (..., d, d), Lam (..., d, d), Y (..., d), R (...)."""
        pass


    @abstractmethod
    def term_grads(self, t, lam: float = 0.0) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """dK (..., p, d, d), dLam (..., p, d, d), dY (..., p, d), dR (..., p)."""
        pass


    def value(self, t, x, mu_bar, lam: float = 0.0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        mu_bar = np.asarray(mu_bar, dtype=float)
        K, Lam, Y, R = self.terms(t, lam)
        y = x - mu_bar
        return (
            np.einsum("...i,...ij,...j->...", y, K, y)
            + np.einsum("...i,...ij,...j->...", mu_bar, Lam, mu_bar)
            + 2.0 * np.einsum("...i,...i->...", Y, x)
            + R
        )


    def grad_eta(self, t, x, mu_bar, lam: float = 0.0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        mu_bar = np.asarray(mu_bar, dtype=float)
        dK, dLam, dY, dR = self.term_grads(t, lam)
        y = x - mu_bar
        return (
            np.einsum("...i,...pij,...j->...p", y, dK, y)
            + np.einsum("...i,...pij,...j->...p", mu_bar, dLam, mu_bar)
            + 2.0 * np.einsum("...pi,...i->...p", dY, x)
            + dR
        )


class Actor(Parametrised):
    """
    Gaussian randomised policy N(mean_theta(t, x, mu_bar), variance_scale * lam * Id).

    The variance is parameter-free, so the score only involves the mean.
    """

    variance_scale: float = 1.0


    def __init__(self, params, horizon: float, action_dim: int, positive=None, n_params: int | None = None):
        super().__init__(params, horizon, positive, n_params)
        self.action_dim = int(action_dim)


    @abstractmethod
    def mean(self, t, x, mu_bar) -> np.ndarray:
        """Policy mean, shape (..., m)."""
        pass


    @abstractmethod
    def grad_mean(self, t, x, mu_bar) -> np.ndarray:
        """Derivative of the mean in theta, shape (..., n_params, m)."""
        pass


    def variance(self, lam: float) -> float:
        if lam <= 0.0:
            raise InvalidArgumentError(f"a randomised policy needs lam > 0, got {lam}")
        return self.variance_scale * lam


    def sample(self, t, x, mu_bar, lam: float, rng: RngStream) -> np.ndarray:
        variance = self.variance(lam)
        mean = self.mean(t, x, mu_bar)
        return mean + np.sqrt(variance) * rng.standard_normal(mean.shape)


    def log_density(self, t, x, mu_bar, a, lam: float) -> np.ndarray:
        residual = np.asarray(a, dtype=float) - self.mean(t, x, mu_bar)
        return isotropic_log_density(residual, self.variance(lam))


    def grad_log_density(self, t, x, mu_bar, a, lam: float) -> np.ndarray:
        variance = self.variance(lam)
        residual = np.asarray(a, dtype=float) - self.mean(t, x, mu_bar)
        return np.einsum("...m,...pm->...p", residual, self.grad_mean(t, x, mu_bar)) / variance


class LqActor(Actor):
    """Actor whose mean is phi1(t) x + phi2(t) mu_bar + phi3(t)."""


    @abstractmethod
    def policy_terms(self, t) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """phi1 (..., m, d), phi2 (..., m, d), phi3 (..., m)."""
        pass


    @abstractmethod
    def policy_term_grads(self, t) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """dphi1 (..., p, m, d), dphi2 (..., p, m, d), dphi3 (..., p, m)."""
        pass


    def mean(self, t, x, mu_bar) -> np.ndarray:
        phi1, phi2, phi3 = self.policy_terms(t)
        return (
            np.einsum("...ij,...j->...i", phi1, np.asarray(x, dtype=float))
            + np.einsum("...ij,...j->...i", phi2, np.asarray(mu_bar, dtype=float))
            + phi3
        )


    def grad_mean(self, t, x, mu_bar) -> np.ndarray:
        dphi1, dphi2, dphi3 = self.policy_term_grads(t)
        return (
            np.einsum("...pij,...j->...pi", dphi1, np.asarray(x, dtype=float))
            + np.einsum("...pij,...j->...pi", dphi2, np.asarray(mu_bar, dtype=float))
            + dphi3
        )


def h_theta(actor: Actor, critic: Critic, t, x, mu_bar, control_matrix) -> np.ndarray:
    """
    Mean-field correction of the policy gradient for LQ parametrisations:

        2 [(dphi1 + dphi2) . mu_bar + dphi3]' C' (-K(t)(x - mu_bar) + Lam(t) mu_bar)

    Only the control matrix C of the model enters.

    Args:
        control_matrix: C, shape (d, m).

    Returns:
        np.ndarray: Shape (..., actor.n_params).

    Raises:
        UnsupportedCombinationError: If either side lacks the LQ structure.
    """

    if not isinstance(actor, LqActor) or not isinstance(critic, LqCritic):
        raise UnsupportedCombinationError(
            f"H-operator needs LQ actor and critic, got {type(actor).__name__} and {type(critic).__name__}"
        )

    C = np.atleast_2d(np.asarray(control_matrix, dtype=float))
    x = np.asarray(x, dtype=float)
    mu_bar = np.asarray(mu_bar, dtype=float)

    K, Lam, _, _ = critic.terms(t)
    dphi1, dphi2, dphi3 = actor.policy_term_grads(t)

    direction = np.einsum("...pmd,...d->...pm", dphi1 + dphi2, mu_bar) + dphi3
    pull = -np.einsum("...ij,...j->...i", K, x - mu_bar) + np.einsum("...ij,...j->...i", Lam, mu_bar)
    return 2.0 * np.einsum("...pm,im,...i->...p", direction, C, pull)
