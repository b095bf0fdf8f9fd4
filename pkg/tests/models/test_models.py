import numpy as np
import pytest

from mfc_engine.core.errors import InvalidArgumentError, UnsupportedCombinationError
from mfc_engine.models import (
    ActorFactory,
    Critic,
    CriticFactory,
    ExactSysRiskActor,
    ExactSysRiskCritic,
    ExactTradingActor,
    ExactTradingCritic,
    MlpActor,
    MlpCritic,
    QuadraticLqActor,
    h_theta,
)
from mfc_engine.models.base import POSITIVE_FLOOR
from mfc_engine.utils.config_loader import ModelConfig


class ZeroCritic(Critic):
    kind = "zero"

    def value(self, t, x, mu_bar, lam=0.0):
        return np.zeros(np.shape(x)[:-1])

    def grad_eta(self, t, x, mu_bar, lam=0.0):
        return np.zeros(np.shape(x)[:-1] + (self.n_params,))


def test_h_operator_vanishes_for_centred_actor():
    critic = ExactSysRiskCritic((1.8, 1.9, 1.4, 0.5))
    actor = ExactSysRiskActor((1.8, 1.9, 0.6))

    h = h_theta(actor, critic, np.array([0.1, 0.6]), np.array([[1.0], [-2.0]]), np.array([0.3]), [[1.0]])

    np.testing.assert_array_equal(h, 0.0)


def test_h_operator_trading():
    critic = ExactTradingCritic((2.0, 1.0, 4.0))
    actor = ExactTradingActor((3.0, 2.0))
    K = 2.0 / (1.0 + 2.0 * 0.7)

    h = h_theta(actor, critic, 0.3, np.array([1.5]), np.array([1.0]), [[1.0]])

    # dphi3 = (0, -1) and the pull is -K (x - mu_bar)
    np.testing.assert_allclose(h, [0.0, K], rtol=1e-14)


def test_h_operator_needs_lq_models():
    with pytest.raises(UnsupportedCombinationError):
        h_theta(ExactTradingActor(), ZeroCritic(np.zeros(1), 1.0), 0.0, [1.0], [1.0], [[1.0]])


def test_variance_conventions():
    assert ExactSysRiskActor().variance(0.1) == pytest.approx(0.1)
    assert ExactTradingActor().variance(0.1) == pytest.approx(0.05)
    with pytest.raises(InvalidArgumentError):
        ExactTradingActor().variance(0.0)


def test_project_clamps_positive_components():
    critic = ExactTradingCritic((-1.0, 2.0, 0.0))
    critic.project()

    np.testing.assert_array_equal(critic.params, [POSITIVE_FLOOR, 2.0, POSITIVE_FLOOR])


def test_unconstrained_models_are_not_projected():
    actor = QuadraticLqActor(1, 1, degree=0, params=[-1.0, -2.0, -3.0])
    actor.project()

    np.testing.assert_array_equal(actor.params, [-1.0, -2.0, -3.0])


def test_wrong_parameter_length_raises():
    with pytest.raises(InvalidArgumentError):
        ExactTradingCritic((1.0, 2.0))
    with pytest.raises(InvalidArgumentError):
        ExactSysRiskActor().set_params(np.ones(4))


def test_mlp_actor_is_centred():
    actor = MlpActor(1, 1, [4], params=np.linspace(-1.0, 1.0, 13 + 1), with_offset=True)

    np.testing.assert_allclose(actor.mean(0.4, [2.0], [2.0]), [1.0])
    assert actor.n_params == 14


def test_mlp_critic_has_no_mean_terms():
    critic = MlpCritic(1, [4], params=np.ones(13 + 13))
    K, Lam, Y, R = critic.terms(np.array([0.0, 1.0]))

    assert K.shape == (2, 1, 1)
    np.testing.assert_array_equal(Lam, 0.0)
    np.testing.assert_array_equal(Y, 0.0)
    assert R.shape == (2,)


def test_factories_read_initial_values(trading_config):
    params = trading_config.parametrisation
    critic = CriticFactory.create_critic(params.critic, 1.0, 1, 1)
    actor = ActorFactory.create_actor(params.actor, 1.0, 1, 1)

    assert isinstance(critic, ExactTradingCritic)
    assert isinstance(actor, ExactTradingActor)
    np.testing.assert_array_equal(critic.params, [1.0, 0.5, 1.0])
    np.testing.assert_array_equal(actor.params, [1.0, 1.0])


def test_factories_build_networks_and_polynomials():
    mlp = ModelConfig(kind="mlp", hidden=[5], variance_scale=0.5, with_offset=True)
    quadratic = ModelConfig(kind="quadratic_lq", degree=1)

    actor = ActorFactory.create_actor(mlp, 1.0, 1, 1)
    critic = CriticFactory.create_critic(quadratic, 1.0, 2, 1)

    assert isinstance(actor, MlpActor) and actor.variance(0.2) == pytest.approx(0.1)
    assert actor.n_params == 5 * 2 + 1 * 6 + 1
    assert critic.n_params == 2 * (3 + 3 + 2 + 1)


def test_factory_errors():
    exact = ModelConfig(kind="exact_trading")
    with pytest.raises(UnsupportedCombinationError):
        CriticFactory.create_critic(exact, 1.0, 2, 1)
    with pytest.raises(InvalidArgumentError):
        ActorFactory.create_actor(exact.model_copy(update={"kind": "lstm"}), 1.0, 1, 1)
    with pytest.raises(InvalidArgumentError):
        CriticFactory.create_critic(ModelConfig(kind="exact_trading", initial=[1.0]), 1.0, 1, 1)
