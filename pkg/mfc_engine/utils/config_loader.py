import json
import logging
import os
from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, ValidationError, model_validator

logger = logging.getLogger(__name__)


# === Environment === #

class InitialLawConfig(BaseModel):
    mean: list[float]
    covariance: list[list[float]]


class CoefficientsConfig(BaseModel):
    """Field names mirror LqCoefficients; omitted blocks are zero."""

    B: Optional[list[list[float]]] = None
    B_bar: Optional[list[list[float]]] = None
    C: Optional[list[list[float]]] = None
    D: Optional[list[list[float]]] = None
    D_bar: Optional[list[list[float]]] = None
    F: Optional[list[list[float]]] = None
    gamma: Optional[list[float]] = None
    Q: Optional[list[list[float]]] = None
    Q_bar: Optional[list[list[float]]] = None
    N: Optional[list[list[float]]] = None
    I: Optional[list[list[float]]] = None
    I_bar: Optional[list[list[float]]] = None
    M: Optional[list[float]] = None
    L: Optional[list[float]] = None
    H: Optional[list[float]] = None
    P: Optional[list[list[float]]] = None
    P_bar: Optional[list[list[float]]] = None
    beta: float = Field(default=0.0, ge=0.0)


class EnvironmentConfig(BaseModel):
    kind: Literal["systemic_risk", "trading", "generic_lq"]
    horizon: float = Field(gt=0.0)
    n_steps: int = Field(ge=1)
    state_dim: int = Field(default=1, ge=1)
    action_dim: int = Field(default=1, ge=1)
    initial_law: InitialLawConfig
    coefficients: CoefficientsConfig
    oracle_mean: bool = False


# === Parametrisation === #

class ModelConfig(BaseModel):
    kind: Literal["exact_sysrisk", "exact_trading", "quadratic_lq", "mlp"]
    initial: Optional[list[float]] = None
    hidden: list[int] = [10, 10, 10]
    degree: int = Field(default=2, ge=0)
    variance_scale: Optional[float] = Field(default=None, gt=0.0)
    with_offset: bool = False


class ParametrisationConfig(BaseModel):
    actor: ModelConfig
    critic: ModelConfig
    control_matrix: list[list[float]] = [[1.0]]


# === Training === #

class BreakpointConfig(BaseModel):
    from_episode: int = Field(ge=0)
    value: Union[float, list[float]]


class SchedulesConfig(BaseModel):
    rho_s: list[BreakpointConfig]
    rho_e: list[BreakpointConfig]
    rho_g: list[BreakpointConfig]
    lam: list[BreakpointConfig]
    minibatch: list[BreakpointConfig] = [BreakpointConfig(from_episode=1, value=1)]


class TrainingConfig(BaseModel):
    mode: Literal["offline", "online"] = "offline"
    episodes: int = Field(ge=1)
    beta: float = Field(default=0.0, ge=0.0)
    schedules: SchedulesConfig
    clip_norm: Optional[float] = Field(default=None, gt=0.0)
    terminal_critic: Literal["observed", "learned"] = "observed"
    record_every: int = Field(default=1, ge=1)
    initial_measure: Optional[list[float]] = None


# === Evaluation and benchmark === #

class EvaluationConfig(BaseModel):
    n_agents: int = Field(default=10_000, ge=2)
    n_populations: int = Field(default=10, ge=1)
    lam: float = Field(default=0.0, ge=0.0)
    stochastic_eval: bool = False
    n_steps: Optional[int] = Field(default=None, ge=1)
    trajectory_agents: int = Field(default=10_000, ge=2)


class BenchmarkConfig(BaseModel):
    n_nodes: int = Field(default=2000, ge=1)
    lam: float = Field(default=0.001, ge=0.0)


# === Top-Level Config Model === #

class RunConfig(BaseModel):
    seed: int = 0
    output_dir: str = "runs/default"
    environment: EnvironmentConfig
    parametrisation: ParametrisationConfig
    training: TrainingConfig
    evaluation: EvaluationConfig = EvaluationConfig()
    benchmark: BenchmarkConfig = BenchmarkConfig()


    @model_validator(mode="after")
    def _check_dimensions(self) -> "RunConfig":
        env = self.environment
        if len(env.initial_law.mean) != env.state_dim:
            raise ValueError("initial_law.mean must have state_dim entries")
        if len(env.initial_law.covariance) != env.state_dim:
            raise ValueError("initial_law.covariance must be state_dim x state_dim")
        control = self.parametrisation.control_matrix
        if len(control) != env.state_dim or any(len(row) != env.action_dim for row in control):
            raise ValueError("parametrisation.control_matrix must be state_dim x action_dim")
        if self.training.beta != env.coefficients.beta:
            raise ValueError("training.beta must match environment.coefficients.beta")
        return self


# === Loader Function === #

def load_config(path="config/trading.json") -> RunConfig:
    """
    Load and validate a JSON run configuration.

    Args:
        path (str): Path to the configuration file.

    Raises:
        FileNotFoundError: If the configuration file does not exist.
        ValidationError: If the file contents do not conform to the RunConfig schema.

    Returns:
        RunConfig: A validated configuration object.
    """

    if not os.path.exists(path):
        raise FileNotFoundError(f'Config not found at {path}')

    with open(path, 'r') as file:
        raw_config = json.load(file)

    try:
        config = RunConfig(**raw_config)
    except ValidationError as e:
        for error in e.errors():
            location = ".".join(str(part) for part in error["loc"])
            logger.error("config field %s: %s", location or "<root>", error["msg"])
        raise e

    return config
