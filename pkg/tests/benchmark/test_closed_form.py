import numpy as np
import pytest

from mfc_engine.benchmark import (
    closed_form_example1,
    closed_form_example2,
    optimal_parameters_example1,
    optimal_parameters_example2,
)
from mfc_engine.core.errors import InvalidArgumentError
from mfc_engine.models import ExactSysRiskActor, ExactSysRiskCritic, ExactTradingActor, ExactTradingCritic

TIMES = np.linspace(0.0, 1.0, 11)


def test_trading_formulas_at_maturity_and_start():
    end = closed_form_example2(1.0)
    start = closed_form_example2(0.0)

    assert end.K == pytest.approx(3.0)
    assert end.R == pytest.approx(0.0)
    assert start.K == pytest.approx(0.75)
    assert start.R == pytest.approx(np.log(4.0) - 4.0)
    assert start.phi3 == -2.0


def test_systemic_risk_terminal_values():
    end = closed_form_example1(1.0)

    assert end.K == pytest.approx(1.0, abs=1e-14)
    assert end.R == pytest.approx(0.0, abs=1e-14)
    assert end.phi == pytest.approx(-2.8, abs=1e-14)


def test_invalid_closed_form_inputs():
    with pytest.raises(InvalidArgumentError):
        closed_form_example1(0.0, i=1.0, q=1.0)
    with pytest.raises(InvalidArgumentError):
        closed_form_example2(0.0, p=0.0)
    with pytest.raises(InvalidArgumentError):
        closed_form_example2(0.0, lam=-1.0)


@pytest.mark.parametrize("lam", [0.0, 0.01])
def test_exact_trading_models_at_optimum(lam):
    eta, theta = optimal_parameters_example2()
    critic, actor = ExactTradingCritic(eta), ExactTradingActor(theta)
    exact = closed_form_example2(TIMES, lam=lam)

    K, _, _, R = critic.terms(TIMES, lam)
    phi1, phi2, phi3 = actor.policy_terms(TIMES)
    np.testing.assert_allclose(K[:, 0, 0], exact.K, rtol=1e-13)
    np.testing.assert_allclose(R, exact.R, rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(phi1[:, 0, 0], exact.phi, rtol=1e-13)
    np.testing.assert_allclose(phi2[:, 0, 0], -exact.phi, rtol=1e-13)
    np.testing.assert_allclose(phi3[:, 0], exact.phi3)


@pytest.mark.parametrize("lam", [0.0, 0.01])
def test_exact_sysrisk_models_at_optimum(lam):
    eta, theta = optimal_parameters_example1()
    critic, actor = ExactSysRiskCritic(eta), ExactSysRiskActor(theta)
    exact = closed_form_example1(TIMES, lam=lam)

    K, _, _, R = critic.terms(TIMES, lam)
    np.testing.assert_allclose(K[:, 0, 0], exact.K, rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(R, exact.R, rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(actor.feedback(TIMES), exact.phi, rtol=1e-12, atol=1e-14)
