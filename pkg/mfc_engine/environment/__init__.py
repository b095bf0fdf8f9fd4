from mfc_engine.environment.base import Environment, EnvStep
from mfc_engine.environment.coefficients import LqCoefficients
from mfc_engine.environment.factory import EnvironmentFactory
from mfc_engine.environment.generic_lq import GenericLqEnvironment
from mfc_engine.environment.systemic_risk import SystemicRiskEnvironment
from mfc_engine.environment.trading import TradingEnvironment
