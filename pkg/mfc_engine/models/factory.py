from mfc_engine.core.errors import InvalidArgumentError, UnsupportedCombinationError
from mfc_engine.core.rng import RngStream
from mfc_engine.models.base import Actor, Critic
from mfc_engine.models.exact_sysrisk import ExactSysRiskActor, ExactSysRiskCritic
from mfc_engine.models.exact_trading import ExactTradingActor, ExactTradingCritic
from mfc_engine.models.mlp import MlpActor, MlpCritic
from mfc_engine.models.quadratic_lq import QuadraticLqActor, QuadraticLqCritic

_SCALAR_KINDS = ("exact_sysrisk", "exact_trading")


def _check_scalar(kind: str, state_dim: int, action_dim: int) -> None:
    if kind in _SCALAR_KINDS and (state_dim != 1 or action_dim != 1):
        raise UnsupportedCombinationError(f"{kind} is defined for d = m = 1, got d={state_dim}, m={action_dim}")


class CriticFactory:
    """
    Factory for critics built from a ``ModelConfig`` block.
    """


    @staticmethod
    def create_critic(
        model_cfg,
        horizon: float,
        state_dim: int,
        action_dim: int,
        rng: RngStream | None = None
    ) -> Critic:
        """
        Create a critic of the configured kind.

        Args:
            model_cfg: ``ModelConfig`` (kind, initial, hidden, degree).
            horizon (float): Terminal time T.
            state_dim (int): d.
            action_dim (int): m.
            rng (RngStream | None): Stream for network initialisation.

        Returns:
            Critic: The critic, with ``initial`` parameters when given.

        Raises:
            InvalidArgumentError: If the kind is unknown or ``initial`` has the wrong length.
            UnsupportedCombinationError: If the kind does not fit the dimensions.
        """

        kind = model_cfg.kind
        _check_scalar(kind, state_dim, action_dim)
        initial = model_cfg.initial

        if kind == "exact_sysrisk":
            critic = ExactSysRiskCritic(horizon=horizon) if initial is None else ExactSysRiskCritic(initial, horizon)
        elif kind == "exact_trading":
            critic = ExactTradingCritic(horizon=horizon) if initial is None else ExactTradingCritic(initial, horizon)
        elif kind == "quadratic_lq":
            critic = QuadraticLqCritic(state_dim, model_cfg.degree, initial, horizon)
        elif kind == "mlp":
            critic = MlpCritic(state_dim, model_cfg.hidden, initial, horizon, rng)
        else:
            raise InvalidArgumentError(f"Unknown critic kind: {kind}")

        critic.project()
        return critic


class ActorFactory:
    """
    Factory for actors built from a ``ModelConfig`` block.
    """


    @staticmethod
    def create_actor(
        model_cfg,
        horizon: float,
        state_dim: int,
        action_dim: int,
        rng: RngStream | None = None
    ) -> Actor:
        """
        Create an actor of the configured kind.

        The exact kinds fix their variance convention (lam for systemic risk,
        lam / 2 for trading); the others read ``variance_scale`` (default 1).

        Raises:
            InvalidArgumentError: If the kind is unknown or ``initial`` has the wrong length.
            UnsupportedCombinationError: If the kind does not fit the dimensions.
        """

        kind = model_cfg.kind
        _check_scalar(kind, state_dim, action_dim)
        initial = model_cfg.initial
        scale = model_cfg.variance_scale if model_cfg.variance_scale is not None else 1.0

        if kind == "exact_sysrisk":
            actor = ExactSysRiskActor(horizon=horizon) if initial is None else ExactSysRiskActor(initial, horizon)
        elif kind == "exact_trading":
            actor = ExactTradingActor(horizon=horizon) if initial is None else ExactTradingActor(initial, horizon)
        elif kind == "quadratic_lq":
            actor = QuadraticLqActor(state_dim, action_dim, model_cfg.degree, initial, horizon, scale)
        elif kind == "mlp":
            actor = MlpActor(
                state_dim, action_dim, model_cfg.hidden, initial, horizon,
                variance_scale=scale, with_offset=model_cfg.with_offset, rng=rng
            )
        else:
            raise InvalidArgumentError(f"Unknown actor kind: {kind}")

        actor.project()
        return actor
