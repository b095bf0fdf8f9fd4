from dataclasses import dataclass

import numpy as np

from mfc_engine.core.errors import InvalidArgumentError
from mfc_engine.core.gaussian import entropy_rate


@dataclass(frozen=True)
class ClosedFormPoint:
    """Scalar benchmark functions at one time (or arrays over several times)."""

    K: float
    R: float
    phi: float
    phi3: float = 0.0


def sqrt_delta(b_bar: float, i: float, q: float) -> float:
    """Square root of (B_bar + 2I)^2 + 2Q - 4I^2."""

    return float(np.sqrt((b_bar + 2.0 * i) ** 2 + 2.0 * q - 4.0 * i ** 2))


def closed_form_example1(
        t,
        b_bar: float = 0.6,
        i: float = 0.4,
        q: float = 1.0,
        p: float = 1.0,
        gamma: float = 1.0,
        lam: float = 0.0,
        horizon: float = 1.0
    ) -> ClosedFormPoint:
    """
    Systemic-risk benchmark (N = 1/2) on the centred coordinate.

    Args:
        t: Time or array of times in [0, horizon].
        lam (float): Temperature entering R; 0 gives the entropy-free value.

    Returns:
        ClosedFormPoint: K(t), R(t) and the feedback phi(t) = -2(K(t) + I).

    Raises:
        InvalidArgumentError: If Q < 2 I^2.
    """

    if q < 2.0 * i ** 2:
        raise InvalidArgumentError(f"closed form needs Q >= 2 I^2, got Q={q}, I={i}")

    tau = np.maximum(horizon - np.asarray(t, dtype=float), 0.0)
    root = sqrt_delta(b_bar, i, q)
    c = b_bar + 2.0 * i + 2.0 * p
    cosh, sinh = np.cosh(root * tau), np.sinh(root * tau)

    K = -0.5 * (b_bar + 2.0 * i - root * (root * sinh + c * cosh) / (root * cosh + c * sinh))
    R = (
        0.5 * gamma ** 2 * np.log(cosh + (c / root) * sinh)
        - 0.5 * gamma ** 2 * (b_bar + 2.0 * i) * tau
        - entropy_rate(lam, 2.0 * np.pi) * tau
    )
    return ClosedFormPoint(K=K, R=R, phi=-2.0 * (K + i))


def closed_form_example2(
        t,
        p: float = 3.0,
        h: float = 2.0,
        gamma: float = 1.0,
        lam: float = 0.0,
        horizon: float = 1.0
    ) -> ClosedFormPoint:
    """
    Optimal-trading benchmark (N = C = 1): K = P / (1 + P(T - t)),
    R = gamma^2 log(1 + P(T - t)) - (H^2 + (lam/2) log(pi lam))(T - t),
    optimal mean -K(t)(x - mu_bar) - H with variance lam / 2.

    Raises:
        InvalidArgumentError: If P <= 0 or lam < 0.
    """

    if p <= 0.0:
        raise InvalidArgumentError(f"terminal penalty must be positive, got {p}")

    tau = np.maximum(horizon - np.asarray(t, dtype=float), 0.0)
    K = p / (1.0 + p * tau)
    R = gamma ** 2 * np.log1p(p * tau) - (h ** 2 + entropy_rate(lam, np.pi)) * tau
    return ClosedFormPoint(K=K, R=R, phi=-K, phi3=-h)


def optimal_parameters_example1(
        b_bar: float = 0.6,
        i: float = 0.4,
        q: float = 1.0,
        p: float = 1.0,
        gamma: float = 1.0
    ) -> tuple[np.ndarray, np.ndarray]:
    """
    (eta*, theta*) at which the exact systemic-risk parametrisation reproduces the benchmark:
    eta* = (sqrt(Delta), c / sqrt(Delta), B_bar + 2I, gamma^2 / 2) and
    theta* = (sqrt(Delta), c / sqrt(Delta), B_bar) with c = B_bar + 2I + 2P.
    """

    root = sqrt_delta(b_bar, i, q)
    c = b_bar + 2.0 * i + 2.0 * p
    eta = np.array([root, c / root, b_bar + 2.0 * i, 0.5 * gamma ** 2])
    theta = np.array([root, c / root, b_bar])
    return eta, theta


def optimal_parameters_example2(p: float = 3.0, h: float = 2.0, gamma: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """eta* = (P, gamma^2, H^2) and theta* = (P, H) for the exact trading parametrisation."""

    return np.array([p, gamma ** 2, h ** 2]), np.array([p, h])
