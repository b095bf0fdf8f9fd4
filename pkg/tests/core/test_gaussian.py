import numpy as np
import pytest

from mfc_engine.core.errors import InvalidArgumentError
from mfc_engine.core.gaussian import entropy_rate, isotropic_log_density


def test_entropy_rate_values():
    assert entropy_rate(0.0, np.pi) == 0.0
    assert entropy_rate(0.1, np.pi) == pytest.approx(0.05 * np.log(0.1 * np.pi), rel=1e-15)
    with pytest.raises(InvalidArgumentError):
        entropy_rate(-1e-3, np.pi)


def test_log_density_matches_normal_pdf():
    residual = np.array([[0.3, -1.2]])
    variance = 0.4
    expected = np.log(
        np.exp(-np.sum(residual ** 2) / (2 * variance)) / (2 * np.pi * variance)
    )

    assert isotropic_log_density(residual, variance)[0] == pytest.approx(expected, rel=1e-12)


def test_expected_log_density_is_minus_entropy():
    # Gauss-Hermite nodes integrate polynomials up to degree 39 exactly
    nodes, weights = np.polynomial.hermite_e.hermegauss(20)
    variance = 0.05
    residual = np.sqrt(variance) * nodes[:, None]

    expected_log_p = weights @ isotropic_log_density(residual, variance) / np.sqrt(2 * np.pi)

    assert expected_log_p == pytest.approx(-0.5 * np.log(2 * np.pi * np.e * variance), rel=1e-12)
