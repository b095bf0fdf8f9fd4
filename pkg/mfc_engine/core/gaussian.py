import numpy as np

from mfc_engine.core.errors import InvalidArgumentError


def entropy_rate(lam: float, scale: float) -> float:
    """(lam / 2) log(scale * lam), extended by 0 at lam = 0."""

    if lam < 0.0:
        raise InvalidArgumentError(f"temperature must be nonnegative, got {lam}")
    if lam == 0.0:
        return 0.0
    return 0.5 * lam * float(np.log(scale * lam))


def isotropic_log_density(residual: np.ndarray, variance: float) -> np.ndarray:
    """Log density of N(0, variance * Id) at ``residual`` (last axis is the action)."""

    m = residual.shape[-1]
    return -0.5 * m * np.log(2.0 * np.pi * variance) - np.sum(residual ** 2, axis=-1) / (2.0 * variance)
