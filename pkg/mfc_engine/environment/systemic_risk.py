import numpy as np

from mfc_engine.core.errors import InvalidArgumentError
from mfc_engine.core.time_grid import TimeGrid
from mfc_engine.environment.base import Environment, EnvStep
from mfc_engine.environment.coefficients import LqCoefficients


class SystemicRiskEnvironment(Environment):
    """
    Interbank lending model: log-monetary reserves revert to the population
    mean at rate B_bar, banks borrow or lend at rate ``a``.

    The state relative to the mean is advanced with the exact exponential
    step of the mean-reverting part, holding the control over the step:

        X' - m = e^{-B_bar dt} (X - m) + a (1 - e^{-B_bar dt}) / B_bar + gamma e^{-B_bar dt} dW

    Costs are Q (X - m)^2 + N a^2 + 2 a I (X - m) and P (X_T - m)^2, where m
    is the caller's mean estimate, or the initial mean when ``oracle_mean``
    is set (the true mean of this model is constant in time).
    """

    kind = "systemic_risk"


    def __init__(
            self,
            grid: TimeGrid,
            b_bar: float = 0.6,
            i: float = 0.4,
            q: float = 1.0,
            p: float = 1.0,
            n: float = 0.5,
            gamma: float = 1.0,
            initial_mean=0.0,
            initial_variance=1.0,
            oracle_mean: bool = False
        ):
        super().__init__(grid, 1, 1, initial_mean, initial_variance)
        if b_bar < 0.0:
            raise InvalidArgumentError(f"mean-reversion rate must be nonnegative, got {b_bar}")

        self.b_bar = float(b_bar)
        self.i = float(i)
        self.q = float(q)
        self.p = float(p)
        self.n = float(n)
        self.gamma = float(gamma)
        self.oracle_mean = bool(oracle_mean)

        dt = grid.dt
        self.decay = float(np.exp(-self.b_bar * dt))
        # (1 - e^{-b dt}) / b, tending to dt as b -> 0
        self.control_gain = float(-np.expm1(-self.b_bar * dt) / self.b_bar) if self.b_bar > 0.0 else dt


    def _reference_mean(self, mu_bar: np.ndarray) -> np.ndarray:
        return self.initial_mean if self.oracle_mean else mu_bar


    def transition(self, k, x, a, mu_bar, dw) -> EnvStep:
        m = self._reference_mean(mu_bar)
        y = x - m
        next_state = m + self.decay * y + self.control_gain * a + self.gamma * self.decay * dw[..., None]

        y0, a0 = y[..., 0], a[..., 0]
        running_cost = self.q * y0 ** 2 + self.n * a0 ** 2 + 2.0 * self.i * a0 * y0
        return EnvStep(next_state, running_cost)


    def terminal_cost(self, x_T, mu_bar) -> np.ndarray:
        y = np.asarray(x_T, dtype=float) - self._reference_mean(np.asarray(mu_bar, dtype=float))
        return self.p * y[..., 0] ** 2


    @classmethod
    def from_coefficients(
            cls,
            grid: TimeGrid,
            coeffs: LqCoefficients,
            initial_mean=0.0,
            initial_variance=1.0,
            oracle_mean: bool = False
        ) -> "SystemicRiskEnvironment":
        """Read B_bar, I, Q, P, N and gamma from a scalar coefficient block."""

        if coeffs.d != 1 or coeffs.m != 1:
            raise InvalidArgumentError("the systemic-risk simulator is one-dimensional")
        return cls(
            grid,
            b_bar=coeffs.B_bar[0, 0],
            i=coeffs.I[0, 0],
            q=coeffs.Q[0, 0],
            p=coeffs.P[0, 0],
            n=coeffs.N[0, 0],
            gamma=coeffs.gamma[0],
            initial_mean=initial_mean,
            initial_variance=initial_variance,
            oracle_mean=oracle_mean,
        )
