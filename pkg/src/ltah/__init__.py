"""Long-term average hazard toolkit.

Estimation and inference for the windowed (long-term) average hazard in
right-censored two-arm studies, companion restricted-mean and log-rank
comparators, and a deterministic Monte-Carlo engine for operating-
characteristic studies.
"""

from ._kernels import available_backends, backend_name, use_backend
from .core import ArmSample, StepFunction, Subject, at_risk_proportion, \
    cuminc_at, km_estimate, nelson_aalen, rmst
from .errors import CalibrationFailed, ConfigError, DatasetError, \
    EstimabilityError, LtahError, NoEvents, TooFewAtRisk, \
    WindowBeyondSupport, ZeroEventMass
from .inference import Contrast, ContrastResult, Measure, logrank_test, \
    lt_ah_difference, lt_ah_ratio, rmst_difference, rmst_ratio
from .measures import AhEstimate, RmstEstimate, WindowSpec, group_ci, \
    landmark_subset, lt_ah_point, rmst_estimate, var_log_scale, \
    var_plain_scale, variance_weights
from .simulate import Degenerate, McSummary, MetricSummary, \
    PiecewiseExponential, ReplicateResult, ScenarioConfig, Weibull, \
    calibrate_delayed_curve, censor_pattern, event_pattern, monte_carlo, \
    replicate_matrix, run_replicate, sample_censoring, sample_event_time, \
    scenario_true_values, simulate_trial_data, summarize_replicates, \
    true_lt_ah

__version__ = "0.1.0"

def kernel_backend() -> str:
    """Name of the active computational backend."""
    return backend_name()
