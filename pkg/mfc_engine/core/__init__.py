from mfc_engine.core.errors import (
    AssumptionViolationError,
    InvalidArgumentError,
    MfcError,
    NumericError,
    TrainingAborted,
    UnsupportedCombinationError,
)
from mfc_engine.core.measure import EmpiricalMeasure, measure_mean, update_measure
from mfc_engine.core.rng import RngStream
from mfc_engine.core.schedule import Schedule, schedule_at
from mfc_engine.core.time_grid import TimeGrid
