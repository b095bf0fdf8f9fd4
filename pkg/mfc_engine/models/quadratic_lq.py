import numpy as np

from mfc_engine.models.base import LqActor, LqCritic


def symmetric_units(d: int) -> np.ndarray:
    """Basis of symmetric d x d matrices indexed by the upper triangle, shape (d(d+1)/2, d, d)."""

    rows, cols = np.triu_indices(d)
    units = np.zeros((rows.size, d, d))
    units[np.arange(rows.size), rows, cols] = 1.0
    units[np.arange(rows.size), cols, rows] = 1.0
    return units


def polynomial_jacobians(tau: np.ndarray, horizon: float, degree: int, units: list[np.ndarray]) -> list[np.ndarray]:
    """
    Parameter derivatives of coefficient functions sum_j (tau / T)^j A_j, where
    function c spends (degree + 1) * len(units[c]) consecutive parameters and
    A_j is spanned by ``units[c]``.

    Returns:
        list[np.ndarray]: For each function, shape (..., n_params, *units[c].shape[1:]).
    """

    basis = (tau / horizon)[..., None] ** np.arange(degree + 1)
    n_params = sum((degree + 1) * unit.shape[0] for unit in units)
    axis = tau.ndim

    jacobians = []
    offset = 0
    for unit in units:
        tail = unit.shape[1:]
        width = (degree + 1) * unit.shape[0]
        local = basis.reshape(basis.shape + (1,) * (1 + len(tail))) * unit
        full = np.zeros(tau.shape + (n_params,) + tail)
        full[(slice(None),) * axis + (slice(offset, offset + width),)] = local.reshape(tau.shape + (width,) + tail)
        jacobians.append(full)
        offset += width
    return jacobians


def _contract(jacobian: np.ndarray, params: np.ndarray, axis: int) -> np.ndarray:
    return np.tensordot(np.moveaxis(jacobian, axis, -1), params, axes=([-1], [0]))


class QuadraticLqCritic(LqCritic):
    """
    Generic LQ critic whose K, Lam, Y, R are polynomials of degree ``degree`` in
    the normalised time-to-go (T - t) / T.

    Layout: K coefficients (degree + 1) x d(d+1)/2 (upper triangle, power-major),
    then Lam likewise, then Y (degree + 1) x d, then R (degree + 1).
    """

    kind = "quadratic_lq"


    def __init__(self, state_dim: int, degree: int = 2, params=None, horizon: float = 1.0):
        self.state_dim = int(state_dim)
        self.degree = int(degree)
        self._units = [
            symmetric_units(self.state_dim),
            symmetric_units(self.state_dim),
            np.eye(self.state_dim),
            np.ones(1),
        ]
        n_params = (self.degree + 1) * sum(unit.shape[0] for unit in self._units)
        super().__init__(np.zeros(n_params) if params is None else params, horizon, n_params=n_params)


    def term_grads(self, t, lam: float = 0.0):
        tau = self.time_to_go(t)
        dK, dLam, dY, dR = polynomial_jacobians(tau, self.horizon, self.degree, self._units)
        return dK, dLam, dY, dR


    def terms(self, t, lam: float = 0.0):
        axis = np.ndim(t)
        return tuple(_contract(jac, self.params, axis) for jac in self.term_grads(t, lam))


class QuadraticLqActor(LqActor):
    """
    Generic LQ actor N(phi1(t) x + phi2(t) mu_bar + phi3(t), variance_scale * lam * Id)
    with polynomial coefficients in (T - t) / T.

    Layout: phi1 (degree + 1) x m x d (row-major), phi2 likewise, phi3 (degree + 1) x m.
    """

    kind = "quadratic_lq"


    def __init__(
            self,
            state_dim: int,
            action_dim: int,
            degree: int = 2,
            params=None,
            horizon: float = 1.0,
            variance_scale: float = 0.5
        ):
        self.state_dim = int(state_dim)
        self.degree = int(degree)
        self.variance_scale = float(variance_scale)
        matrix_units = np.eye(action_dim * self.state_dim).reshape(-1, action_dim, self.state_dim)
        self._units = [matrix_units, matrix_units, np.eye(action_dim)]
        n_params = (self.degree + 1) * sum(unit.shape[0] for unit in self._units)
        super().__init__(np.zeros(n_params) if params is None else params, horizon, action_dim, n_params=n_params)


    def policy_term_grads(self, t):
        tau = self.time_to_go(t)
        dphi1, dphi2, dphi3 = polynomial_jacobians(tau, self.horizon, self.degree, self._units)
        return dphi1, dphi2, dphi3


    def policy_terms(self, t):
        axis = np.ndim(t)
        return tuple(_contract(jac, self.params, axis) for jac in self.policy_term_grads(t))
