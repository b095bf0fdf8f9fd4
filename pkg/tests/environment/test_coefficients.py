import numpy as np
import pytest

from mfc_engine.core.errors import AssumptionViolationError, InvalidArgumentError
from mfc_engine.environment.coefficients import LqCoefficients


def test_bundled_examples_satisfy_the_convex_branches(trading_coeffs, sysrisk_coeffs):
    assert trading_coeffs.check_assumptions() == ("H1(i)", "H2(i)")
    assert sysrisk_coeffs.check_assumptions() == ("H1(i)", "H2(i)")


def test_hatted_blocks(sysrisk_coeffs):
    assert sysrisk_coeffs.B_hat[0, 0] == 0.0
    assert sysrisk_coeffs.Q_hat[0, 0] == 0.0
    assert sysrisk_coeffs.I_hat[0, 0] == 0.0
    assert sysrisk_coeffs.P_hat[0, 0] == 0.0


def test_negative_terminal_weight_violates_h1():
    with pytest.raises(AssumptionViolationError, match=r"\(H1\)"):
        LqCoefficients.trading(p=-1.0)


def test_validation_can_be_deferred():
    coeffs = LqCoefficients.trading(p=-1.0, validate=False)

    assert coeffs.P[0, 0] == -1.0
    with pytest.raises(AssumptionViolationError):
        coeffs.check_assumptions()


def test_rejects_asymmetric_cost_matrix():
    with pytest.raises(InvalidArgumentError, match="symmetric"):
        LqCoefficients.zeros(2, 1, Q=[[1.0, 2.0], [0.0, 1.0]], N=1.0, P=np.eye(2))


def test_rejects_wrong_shapes():
    with pytest.raises(InvalidArgumentError, match="shape"):
        LqCoefficients.trading().replace(H=np.array([1.0, 2.0]))


def test_rejects_negative_discount():
    with pytest.raises(InvalidArgumentError):
        LqCoefficients.trading(beta=-0.1)


def test_from_config_matches_named_constructor(trading_config, trading_coeffs):
    coeffs = LqCoefficients.from_config(trading_config.environment.coefficients, 1, 1)

    for name in ("C", "gamma", "N", "H", "P", "P_bar", "B", "Q"):
        np.testing.assert_array_equal(getattr(coeffs, name), getattr(trading_coeffs, name))
    assert coeffs.beta == 0.0


def test_replace_revalidates(trading_coeffs):
    assert trading_coeffs.replace(gamma=np.array([0.5])).gamma[0] == 0.5
    with pytest.raises(AssumptionViolationError):
        trading_coeffs.replace(N=np.array([[-1.0]]))
