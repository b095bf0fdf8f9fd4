import numpy as np

from mfc_engine.core.gaussian import entropy_rate
from mfc_engine.models.base import LqActor, LqCritic

# Optimal values are (sqrt(Delta), (B_bar + 2I + 2P) / sqrt(Delta), B_bar + 2I, gamma^2 / 2)
# for the critic and (sqrt(Delta), (B_bar + 2I + 2P) / sqrt(Delta), B_bar) for the actor.


def _hyperbolic_ratio(rate: np.ndarray, shape: np.ndarray, tau: np.ndarray):
    """
    rho = (sinh(r tau) + s cosh(r tau)) / (cosh(r tau) + s sinh(r tau)) and the pieces
    needed for its derivatives: d rho / d r = tau (1 - rho^2), d rho / d s = 1 / den^2.
    """

    cosh, sinh = np.cosh(rate * tau), np.sinh(rate * tau)
    den = cosh + shape * sinh
    rho = (sinh + shape * cosh) / den
    return rho, den, sinh


class ExactSysRiskCritic(LqCritic):
    """
    Critic with the functional form of the systemic-risk value (d = 1).

    Layout eta = (eta1, eta2, eta3, eta4), all constrained positive; with tau = T - t,

        K(t) = -1/2 [eta3 - eta1 rho(eta1, eta2, tau)]
        R(t) = eta4 log(cosh(eta1 tau) + eta2 sinh(eta1 tau)) - eta3 eta4 tau - (lam tau / 2) log(2 pi lam)
    """

    kind = "exact_sysrisk"


    def __init__(self, params=(1.0, 1.0, 1.0, 1.0), horizon: float = 1.0):
        super().__init__(params, horizon, positive=np.ones(4, dtype=bool))


    def terms(self, t, lam: float = 0.0):
        e1, e2, e3, e4 = self.params
        tau = self.time_to_go(t)
        rho, den, _ = _hyperbolic_ratio(e1, e2, tau)

        K = -0.5 * (e3 - e1 * rho)
        R = e4 * np.log(den) - e3 * e4 * tau - entropy_rate(lam, 2.0 * np.pi) * tau
        zeros = np.zeros(tau.shape + (1,))
        return K[..., None, None], zeros[..., None], zeros, R


    def term_grads(self, t, lam: float = 0.0):
        e1, e2, e3, e4 = self.params
        tau = self.time_to_go(t)
        rho, den, sinh = _hyperbolic_ratio(e1, e2, tau)

        dK = np.stack([
            0.5 * (rho + e1 * tau * (1.0 - rho ** 2)),
            0.5 * e1 / den ** 2,
            np.full(tau.shape, -0.5),
            np.zeros(tau.shape),
        ], axis=-1)
        dR = np.stack([
            e4 * tau * rho,
            e4 * sinh / den,
            -e4 * tau,
            np.log(den) - e3 * tau,
        ], axis=-1)
        zeros = np.zeros(tau.shape + (4, 1))
        return dK[..., None, None], zeros[..., None], zeros, dR


class ExactSysRiskActor(LqActor):
    """
    Centred actor N(phi(t)(x - mu_bar), lam) with

        phi(t) = theta3 - theta1 rho(theta1, theta2, T - t).

    Layout theta = (theta1, theta2, theta3), all constrained positive. phi1 = -phi2
    and phi3 = 0, so the mean-field correction of the gradient vanishes.
    """

    kind = "exact_sysrisk"
    variance_scale = 1.0


    def __init__(self, params=(1.0, 1.0, 1.0), horizon: float = 1.0):
        super().__init__(params, horizon, action_dim=1, positive=np.ones(3, dtype=bool))


    def feedback(self, t) -> np.ndarray:
        th1, th2, th3 = self.params
        rho, _, _ = _hyperbolic_ratio(th1, th2, self.time_to_go(t))
        return th3 - th1 * rho


    def policy_terms(self, t):
        phi = self.feedback(t)[..., None, None]
        return phi, -phi, np.zeros(phi.shape[:-1])


    def policy_term_grads(self, t):
        th1, th2, _ = self.params
        tau = self.time_to_go(t)
        rho, den, _ = _hyperbolic_ratio(th1, th2, tau)

        dphi = np.stack([
            -(rho + th1 * tau * (1.0 - rho ** 2)),
            -th1 / den ** 2,
            np.ones(tau.shape),
        ], axis=-1)[..., None, None]
        return dphi, -dphi, np.zeros(dphi.shape[:-1])
