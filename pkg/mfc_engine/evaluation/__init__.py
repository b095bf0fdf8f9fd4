from mfc_engine.evaluation.curves import CurveTable, curve_export
from mfc_engine.evaluation.social_cost import (
    EvalReport,
    KahanAccumulator,
    PopulationRun,
    eval_threads,
    simulate_population,
    social_cost,
)
from mfc_engine.evaluation.trajectories import TrajectoryComparison, trajectory_compare
