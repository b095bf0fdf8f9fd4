from mfc_engine.benchmark.closed_form import (
    ClosedFormPoint,
    closed_form_example1,
    closed_form_example2,
    optimal_parameters_example1,
    optimal_parameters_example2,
    sqrt_delta,
)
from mfc_engine.benchmark.policy import GaussianPolicy, initial_value, optimal_policy, optimal_value
from mfc_engine.benchmark.riccati import DEFAULT_NODES, RiccatiSolution, solve_riccati
