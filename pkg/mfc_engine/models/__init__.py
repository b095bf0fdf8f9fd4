from mfc_engine.models.base import Actor, Critic, LqActor, LqCritic, h_theta
from mfc_engine.models.exact_sysrisk import ExactSysRiskActor, ExactSysRiskCritic
from mfc_engine.models.exact_trading import ExactTradingActor, ExactTradingCritic
from mfc_engine.models.factory import ActorFactory, CriticFactory
from mfc_engine.models.mlp import Mlp, MlpActor, MlpCritic
from mfc_engine.models.quadratic_lq import QuadraticLqActor, QuadraticLqCritic
