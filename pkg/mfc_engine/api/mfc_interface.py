import logging
import os

import numpy as np

from mfc_engine.benchmark.closed_form import optimal_parameters_example1, optimal_parameters_example2, sqrt_delta
from mfc_engine.benchmark.policy import initial_value, optimal_policy
from mfc_engine.benchmark.riccati import RiccatiSolution, solve_riccati
from mfc_engine.core.errors import InvalidArgumentError
from mfc_engine.core.rng import INIT_WEIGHTS_STREAM, RngStream
from mfc_engine.core.time_grid import TimeGrid
from mfc_engine.engine.report import TrainReport
from mfc_engine.engine.trainers import TrainConfig, train_offline, train_online
from mfc_engine.environment.factory import EnvironmentFactory
from mfc_engine.environment.systemic_risk import SystemicRiskEnvironment
from mfc_engine.environment.trading import TradingEnvironment
from mfc_engine.evaluation.curves import CurveTable, curve_export
from mfc_engine.evaluation.social_cost import EvalReport, social_cost
from mfc_engine.evaluation.trajectories import TrajectoryComparison, trajectory_compare
from mfc_engine.models.factory import ActorFactory, CriticFactory
from mfc_engine.utils.artifacts import load_snapshot, utc_now, write_manifest, write_snapshot
from mfc_engine.utils.config_loader import RunConfig, load_config
from mfc_engine.utils.csv_writer import write_csv

logger = logging.getLogger(__name__)


class MfcInterface:
    """
    Entry point that builds the whole stack from one configuration file.

    From the configuration it assembles:
    - the simulator (systemic risk, trading or a generic LQ model)
    - the critic and actor parametrisations
    - the trainer settings and schedules
    - the Riccati benchmark used for reference values
    """


    def __init__(
            self,
            config_path: str = "config/trading.json",
            seed: int | None = None,
            episodes: int | None = None,
            out_dir: str | None = None,
            progress: bool = False
        ):
        """
        Load the configuration and build the simulator, critic and actor.

        Args:
            config_path (str): JSON run configuration.
            seed (int | None): Override of the configured seed.
            episodes (int | None): Override of ``training.episodes``.
            out_dir (str | None): Override of ``output_dir``.
            progress (bool): Show training progress bars.
        """

        self.config_path = config_path
        self.cfg: RunConfig = load_config(config_path)
        self.seed = self.cfg.seed if seed is None else seed
        self.episodes = episodes
        self.out_dir = out_dir or self.cfg.output_dir
        self.progress = progress

        env_cfg = self.cfg.environment
        self.grid = TimeGrid.from_config(env_cfg)
        self.coeffs = EnvironmentFactory.coefficients(env_cfg)
        self.env = EnvironmentFactory.from_config(env_cfg, oracle_mean=env_cfg.oracle_mean, grid=self.grid)

        weights = RngStream(self.seed, INIT_WEIGHTS_STREAM)
        param_cfg = self.cfg.parametrisation
        self.critic = CriticFactory.create_critic(
            param_cfg.critic, env_cfg.horizon, env_cfg.state_dim, env_cfg.action_dim, weights
        )
        self.actor = ActorFactory.create_actor(
            param_cfg.actor, env_cfg.horizon, env_cfg.state_dim, env_cfg.action_dim, weights
        )
        self._solutions: dict[float, RiccatiSolution] = {}
        self._started = utc_now()


    def solution(self, lam: float | None = None) -> RiccatiSolution:
        """Riccati solution on the benchmark grid, cached per temperature."""

        lam = self.cfg.benchmark.lam if lam is None else float(lam)
        if lam not in self._solutions:
            grid = TimeGrid(self.cfg.environment.horizon, self.cfg.benchmark.n_nodes)
            self._solutions[lam] = solve_riccati(self.coeffs, lam, grid)
        return self._solutions[lam]


    def exact_parameters(self) -> tuple[np.ndarray, np.ndarray] | None:
        """Optimal (eta, theta) when both parametrisations have the model's exact form."""

        kinds = (self.critic.kind, self.actor.kind)
        if isinstance(self.env, TradingEnvironment) and kinds == ("exact_trading", "exact_trading"):
            return optimal_parameters_example2(self.env.p, self.env.h, self.env.gamma)
        if isinstance(self.env, SystemicRiskEnvironment) and kinds == ("exact_sysrisk", "exact_sysrisk"):
            env = self.env
            return optimal_parameters_example1(env.b_bar, env.i, env.q, env.p, env.gamma)
        return None


    def initial_values(self) -> tuple[float, float]:
        """Benchmark value against the initial law: (entropy-free, regularised at benchmark.lam)."""

        law = self.cfg.environment.initial_law
        entropy_free = initial_value(self.solution(0.0), law.mean, law.covariance)
        regularised = initial_value(self.solution(), law.mean, law.covariance)
        return entropy_free, regularised


    def _manifest(self, command: str, extra: dict | None = None) -> str:
        return write_manifest(self.out_dir, command, self.config_path, self.seed, self._started, extra)


    def train(self, mode: str | None = None) -> TrainReport:
        """
        Run the configured trainer and write params.csv, costs.csv, snapshot.json
        and manifest.json into the output directory.

        Args:
            mode (str | None): "offline" or "online"; defaults to ``training.mode``.

        Returns:
            TrainReport: The run history; check ``aborted``.
        """

        mode = mode or self.cfg.training.mode
        train_cfg = TrainConfig.from_config(self.cfg, self.episodes, self.seed, self.progress)
        if mode == "offline":
            report = train_offline(self.env, self.actor, self.critic, train_cfg)
        elif mode == "online":
            report = train_online(self.env, self.actor, self.critic, train_cfg)
        else:
            raise InvalidArgumentError(f"Unknown training mode: {mode}")

        report.write_csv(self.out_dir)
        write_snapshot(self.snapshot_path, self.actor, self.critic, {"training": report.snapshot()})
        self._manifest(f"train-{mode}", {"wall_clock_seconds": report.wall_clock})
        return report


    @property
    def snapshot_path(self) -> str:
        return os.path.join(self.out_dir, "snapshot.json")


    def load(self, snapshot_path: str | None) -> None:
        """Replace the configured initial parameters with a saved snapshot."""

        if snapshot_path is not None:
            load_snapshot(snapshot_path, self.actor, self.critic)


    def benchmark(self) -> dict:
        """
        Solve the Riccati system, write benchmark.csv (value and feedback
        coefficients per node) and return the values at t = 0.

        Returns:
            dict: K0, Lam0, Y0, R0, the initial values and, for systemic risk, sqrt_delta.
        """

        sol = self.solution()
        d, m = self.coeffs.d, self.coeffs.m
        columns = ["t"]
        columns += [f"K_{i + 1}_{j + 1}" for i in range(d) for j in range(d)]
        columns += [f"Lam_{i + 1}_{j + 1}" for i in range(d) for j in range(d)]
        columns += [f"Y_{i + 1}" for i in range(d)] + ["R"]
        columns += [f"phi1_{i + 1}_{j + 1}" for i in range(m) for j in range(d)]
        columns += [f"phi2_{i + 1}_{j + 1}" for i in range(m) for j in range(d)]
        columns += [f"phi3_{i + 1}" for i in range(m)]
        phi1, phi2, phi3 = sol.feedback(np.asarray(sol.grid.times))
        rows = []
        for k, t in enumerate(sol.grid.times):
            values = [t, *sol.K[k].ravel(), *sol.Lam[k].ravel(), *sol.Y[k], sol.R[k],
                      *phi1[k].ravel(), *phi2[k].ravel(), *phi3[k]]
            rows.append(dict(zip(columns, values)))
        write_csv(os.path.join(self.out_dir, "benchmark.csv"), columns, rows)

        entropy_free, regularised = self.initial_values()
        summary = {
            "lam": sol.lam,
            "K0": sol.K[0],
            "Lam0": sol.Lam[0],
            "Y0": sol.Y[0],
            "R0": sol.R[0],
            "initial_value": regularised,
            "initial_value_entropy_free": entropy_free,
        }
        if isinstance(self.env, SystemicRiskEnvironment):
            summary["sqrt_delta"] = sqrt_delta(self.env.b_bar, self.env.i, self.env.q)
        self._manifest("benchmark")
        return summary


    def evaluation_env(self):
        """Simulator on the evaluation grid, always fed with the empirical mean."""

        n_steps = self.cfg.evaluation.n_steps
        grid = self.grid if n_steps is None else self.grid.refine(n_steps)
        return EnvironmentFactory.from_config(self.cfg.environment, oracle_mean=False, grid=grid)


    def evaluate(self, snapshot_path: str | None = None) -> tuple[EvalReport, TrajectoryComparison]:
        """
        Social cost of the actor's mean policy over independent populations, and a
        common-noise comparison with the benchmark policy. Writes eval_report.csv
        and trajectories.csv.
        """

        self.load(snapshot_path)
        eval_cfg = self.cfg.evaluation
        env = self.evaluation_env()
        entropy_free, regularised = self.initial_values()

        report = social_cost(
            env, self.actor,
            n_agents=eval_cfg.n_agents,
            n_populations=eval_cfg.n_populations,
            seed=self.seed,
            lam=eval_cfg.lam,
            stochastic=eval_cfg.stochastic_eval,
            exact=entropy_free,
            exact_regularised=regularised,
        )
        write_csv(os.path.join(self.out_dir, "eval_report.csv"), ["population", "social_cost"], report.rows())

        comparison = trajectory_compare(
            env, self.actor, optimal_policy(self.solution(0.0)),
            n_agents=eval_cfg.trajectory_agents,
            seed=self.seed,
            path=os.path.join(self.out_dir, "trajectories.csv"),
        )
        self._manifest("eval", {"snapshot": snapshot_path})
        return report, comparison


    def export_curves(self, snapshot_path: str | None = None) -> CurveTable:
        """Learnt against benchmark coefficient curves on the training grid (curves.csv)."""

        self.load(snapshot_path)
        table = curve_export(self.solution(), self.critic, self.actor, self.grid,
                             path=os.path.join(self.out_dir, "curves.csv"))
        self._manifest("export-curves", {"snapshot": snapshot_path})
        return table
