import numpy as np

from mfc_engine.core.gaussian import entropy_rate
from mfc_engine.models.base import LqActor, LqCritic


class ExactTradingCritic(LqCritic):
    """
    Critic with the functional form of the trading value (d = 1).

    Layout eta = (eta1, eta2, eta3), all constrained positive; optimum (P, gamma^2, H^2).

        K(t) = eta1 / (1 + eta1 (T - t))
        R(t) = eta2 log(1 + eta1 (T - t)) - (eta3 + (lam / 2) log(pi lam)) (T - t)
    """

    kind = "exact_trading"


    def __init__(self, params=(1.0, 1.0, 1.0), horizon: float = 1.0):
        super().__init__(params, horizon, positive=np.ones(3, dtype=bool))


    def terms(self, t, lam: float = 0.0):
        e1, e2, e3 = self.params
        tau = self.time_to_go(t)
        growth = 1.0 + e1 * tau

        K = e1 / growth
        R = e2 * np.log(growth) - (e3 + entropy_rate(lam, np.pi)) * tau
        zeros = np.zeros(tau.shape + (1,))
        return K[..., None, None], zeros[..., None], zeros, R


    def term_grads(self, t, lam: float = 0.0):
        e1, e2, _ = self.params
        tau = self.time_to_go(t)
        growth = 1.0 + e1 * tau
        zero = np.zeros(tau.shape)

        dK = np.stack([1.0 / growth ** 2, zero, zero], axis=-1)
        dR = np.stack([e2 * tau / growth, np.log(growth), -tau], axis=-1)
        zeros = np.zeros(tau.shape + (3, 1))
        return dK[..., None, None], zeros[..., None], zeros, dR


class ExactTradingActor(LqActor):
    """
    Actor N(phi(t)(x - mu_bar) + phi3, lam / 2) with

        phi(t) = -theta1 / (1 + theta1 (T - t)),   phi3 = -theta2.

    Layout theta = (theta1, theta2), constrained positive; optimum (P, H).
    """

    kind = "exact_trading"
    variance_scale = 0.5


    def __init__(self, params=(1.0, 1.0), horizon: float = 1.0):
        super().__init__(params, horizon, action_dim=1, positive=np.ones(2, dtype=bool))


    def policy_terms(self, t):
        th1, th2 = self.params
        tau = self.time_to_go(t)
        phi = (-th1 / (1.0 + th1 * tau))[..., None, None]
        return phi, -phi, np.full(tau.shape + (1,), -th2)


    def policy_term_grads(self, t):
        th1, _ = self.params
        tau = self.time_to_go(t)
        zero = np.zeros(tau.shape)

        dphi = np.stack([-1.0 / (1.0 + th1 * tau) ** 2, zero], axis=-1)[..., None, None]
        dphi3 = np.stack([zero, np.full(tau.shape, -1.0)], axis=-1)[..., None]
        return dphi, -dphi, dphi3
