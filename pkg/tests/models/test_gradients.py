import numpy as np
import pytest

from mfc_engine.core.rng import INIT_WEIGHTS_STREAM, RngStream
from mfc_engine.models import (
    ExactSysRiskActor,
    ExactSysRiskCritic,
    ExactTradingActor,
    ExactTradingCritic,
    MlpActor,
    MlpCritic,
    QuadraticLqActor,
    QuadraticLqCritic,
)
from tests.helpers import central_difference, with_params

TIMES = np.array([0.0, 0.13, 0.5, 0.87, 1.0])


def _points(d: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    return rng.normal(size=(TIMES.size, d)), rng.normal(size=(TIMES.size, d))


def _critics():
    rng = RngStream(3, INIT_WEIGHTS_STREAM)
    quadratic = QuadraticLqCritic(2, degree=2, params=np.random.default_rng(1).normal(size=27))
    return [
        ExactSysRiskCritic((1.8, 1.9, 1.4, 0.5)),
        ExactTradingCritic((3.0, 1.0, 4.0)),
        quadratic,
        MlpCritic(1, [6, 6], rng=rng),
    ]


def _actors():
    rng = RngStream(3, INIT_WEIGHTS_STREAM)
    quadratic = QuadraticLqActor(2, 1, degree=1, params=np.random.default_rng(2).normal(size=10))
    return [
        ExactSysRiskActor((1.8, 1.9, 0.6)),
        ExactTradingActor((3.0, 2.0)),
        quadratic,
        MlpActor(1, 1, [6, 6], with_offset=True, rng=rng),
    ]


@pytest.mark.parametrize("critic", _critics(), ids=lambda c: f"{c.kind}-critic")
@pytest.mark.parametrize("lam", [0.0, 0.05])
def test_critic_gradient_matches_finite_differences(critic, lam):
    x, mu_bar = _points(critic.terms(0.0)[0].shape[-1])

    analytic = critic.grad_eta(TIMES, x, mu_bar, lam)
    numeric = central_difference(
        lambda p: with_params(critic, p, "value", TIMES, x, mu_bar, lam), critic.params
    )

    assert analytic.shape == (TIMES.size, critic.n_params)
    np.testing.assert_allclose(analytic, numeric, rtol=1e-5, atol=1e-7)


@pytest.mark.parametrize("actor", _actors(), ids=lambda a: f"{a.kind}-actor")
def test_actor_mean_gradient_matches_finite_differences(actor):
    x, mu_bar = _points(actor.policy_terms(0.0)[0].shape[-1], seed=4)

    analytic = actor.grad_mean(TIMES, x, mu_bar)
    numeric = central_difference(lambda p: with_params(actor, p, "mean", TIMES, x, mu_bar), actor.params)

    np.testing.assert_allclose(analytic, np.swapaxes(numeric, -1, -2), rtol=1e-5, atol=1e-7)


@pytest.mark.parametrize("actor", _actors(), ids=lambda a: f"{a.kind}-actor")
def test_score_matches_finite_differences(actor):
    lam = 0.2
    x, mu_bar = _points(actor.policy_terms(0.0)[0].shape[-1], seed=5)
    a = actor.sample(TIMES, x, mu_bar, lam, RngStream(0))

    analytic = actor.grad_log_density(TIMES, x, mu_bar, a, lam)
    numeric = central_difference(
        lambda p: with_params(actor, p, "log_density", TIMES, x, mu_bar, a, lam), actor.params
    )

    np.testing.assert_allclose(analytic, numeric, rtol=1e-5, atol=1e-6)


def test_scalar_time_shapes():
    critic, actor = ExactTradingCritic(), ExactTradingActor()

    assert np.shape(critic.value(0.5, [1.0], [0.0])) == ()
    assert critic.grad_eta(0.5, [1.0], [0.0]).shape == (3,)
    assert actor.mean(0.5, [1.0], [0.0]).shape == (1,)
    assert actor.grad_mean(0.5, [1.0], [0.0]).shape == (2, 1)
