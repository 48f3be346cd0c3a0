"""Binary search with tunable overlapping partitions for noisy localization."""

from .analysis import (
    AsymmetricSensorsError,
    StepErrorReport,
    binomial_half_width,
    end_to_end_error,
    error_derivative_alpha,
    q_function,
    step_error_continuous_1d,
    step_error_continuous_2d,
    step_error_monte_carlo,
    step_error_symmetric_discrete,
    tree_depth_approx,
    tree_depth_exact,
    validate_symmetric_sensors,
)
from .grid import (
    CannotSplitError,
    GridAxis,
    GridRegion,
    Partition,
    enumerate_points,
    overlap_count,
    round_half_to_even,
    split,
    symmetric_partner,
)
from .measurement import (
    PropagationModel,
    as_sensors,
    expected_measurement,
    hypothesis_matrix,
    hypothesis_vector,
    log_likelihood,
    sample_measurements,
)
from .placement import (
    EAConfig,
    EAResult,
    GenerationStats,
    optimize_placement_ea,
    uniform_heuristic_placement,
)
from .quadrature import QuadratureError, QuadratureSpec
from .search import (
    SearchTrace,
    SensorPolicy,
    StepRecord,
    SuccessRateEstimate,
    ml_classify,
    run_search,
    select_region,
    sensors_for_step,
    success_rate,
)

__version__ = "0.1.0"

__all__ = [
    "AsymmetricSensorsError",
    "CannotSplitError",
    "EAConfig",
    "EAResult",
    "GenerationStats",
    "GridAxis",
    "GridRegion",
    "Partition",
    "PropagationModel",
    "QuadratureError",
    "QuadratureSpec",
    "SearchTrace",
    "SensorPolicy",
    "StepErrorReport",
    "StepRecord",
    "SuccessRateEstimate",
    "as_sensors",
    "binomial_half_width",
    "end_to_end_error",
    "enumerate_points",
    "error_derivative_alpha",
    "expected_measurement",
    "hypothesis_matrix",
    "hypothesis_vector",
    "log_likelihood",
    "ml_classify",
    "optimize_placement_ea",
    "overlap_count",
    "q_function",
    "round_half_to_even",
    "run_search",
    "sample_measurements",
    "select_region",
    "sensors_for_step",
    "split",
    "step_error_continuous_1d",
    "step_error_continuous_2d",
    "step_error_monte_carlo",
    "step_error_symmetric_discrete",
    "success_rate",
    "symmetric_partner",
    "tree_depth_approx",
    "tree_depth_exact",
    "uniform_heuristic_placement",
    "validate_symmetric_sensors",
]
