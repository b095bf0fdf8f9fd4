from mfc_engine.core.errors import InvalidArgumentError, UnsupportedCombinationError
from mfc_engine.core.time_grid import TimeGrid
from mfc_engine.environment.base import Environment
from mfc_engine.environment.coefficients import LqCoefficients
from mfc_engine.environment.generic_lq import GenericLqEnvironment
from mfc_engine.environment.systemic_risk import SystemicRiskEnvironment
from mfc_engine.environment.trading import TradingEnvironment


class EnvironmentFactory:
    """
    Factory for simulators built from the ``environment`` config block.
    """


    @staticmethod
    def coefficients(env_cfg, validate: bool = True) -> LqCoefficients:
        """
        LQ coefficients described by the block (used by the benchmark and by
        the simulators themselves).
        """

        return LqCoefficients.from_config(
            env_cfg.coefficients, env_cfg.state_dim, env_cfg.action_dim, validate=validate
        )


    @staticmethod
    def from_config(env_cfg, oracle_mean: bool = False, grid: TimeGrid | None = None) -> Environment:
        """
        Create a simulator for the configured kind.

        Args:
            env_cfg: ``EnvironmentConfig`` block.
            oracle_mean (bool): Emit costs around the true population mean
                (systemic risk only).
            grid (TimeGrid | None): Override of the configured grid, e.g. a
                refined evaluation grid.

        Returns:
            Environment: The simulator.

        Raises:
            InvalidArgumentError: If the kind is unknown.
            UnsupportedCombinationError: If ``oracle_mean`` is requested for a
                model whose population mean is not known in closed form.
        """

        grid = grid or TimeGrid.from_config(env_cfg)
        coeffs = EnvironmentFactory.coefficients(env_cfg)
        mean = env_cfg.initial_law.mean
        covariance = env_cfg.initial_law.covariance

        if oracle_mean and env_cfg.kind != "systemic_risk":
            raise UnsupportedCombinationError(f"oracle_mean is only defined for systemic_risk, not {env_cfg.kind}")

        if env_cfg.kind == "systemic_risk":
            return SystemicRiskEnvironment.from_coefficients(grid, coeffs, mean, covariance, oracle_mean)
        elif env_cfg.kind == "trading":
            return TradingEnvironment.from_coefficients(grid, coeffs, mean, covariance)
        elif env_cfg.kind == "generic_lq":
            return GenericLqEnvironment(grid, coeffs, mean, covariance)
        else:
            raise InvalidArgumentError(f"Unknown environment kind: {env_cfg.kind}")
