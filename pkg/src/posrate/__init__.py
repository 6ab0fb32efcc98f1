"""Hybrid position/rate pointer control.

A trackpad-sized input area maps relative motion to the pointer while
the finger stays inside a circular zone; pressing past the rim into an
elastic band switches to rate control, so distant targets need one
smooth push instead of repeated clutching.  The package bundles the
input-to-pointer engine (with a transition that keeps speed and
direction continuous), movement-time models for clutched and hybrid
devices, a simulation kit for scripted experiments, band calibration,
CSV/JSON interchange, and a TCP step service for external front ends.
"""

from .transfer import (
    ConfigError,
    GainCurve,
    SpeedEstimator,
    apply_transfer,
    gain_for_speed,
    load_gain_curve,
)
from .engine import (
    ControlFrame,
    ElasticParams,
    EngineParams,
    HybridEngine,
    Mode,
    StepResult,
    ZonePose,
    classify,
    integrate_boundary,
    segment_exit_point,
)
from .models import (
    ClutchStrategy,
    DeviceProfile,
    FittsCoefficients,
    FittsForm,
    ModelParams,
    Prediction,
    PRESETS,
    RegressionResult,
    clutching_time,
    crossover_distance,
    effective_width,
    fitts_regression,
    fitts_time,
    hybrid_discontinuity,
    hybrid_time,
    index_of_difficulty,
    invocations,
    sweep,
)
from .calibration import (
    CalibrationError,
    CircleFit,
    ForceProfile,
    build_force_profile,
    fit_boundary,
    normalized_penetration,
)
from .simkit import (
    AgentProfile,
    CrossingScript,
    TECHNIQUES,
    Trial,
    TrialLog,
    TrialTimeout,
    crossing_suite,
    generate_reciprocal_task,
    log_from_csv,
    run_manifest,
    run_trial,
    scripted_crossing,
    summarize,
    synthesize_movement,
    technique_params,
)

__version__ = "0.1.0"

__all__ = [
    "AgentProfile",
    "CalibrationError",
    "CircleFit",
    "ClutchStrategy",
    "ConfigError",
    "ControlFrame",
    "CrossingScript",
    "DeviceProfile",
    "ElasticParams",
    "EngineParams",
    "FittsCoefficients",
    "FittsForm",
    "ForceProfile",
    "GainCurve",
    "HybridEngine",
    "Mode",
    "ModelParams",
    "PRESETS",
    "Prediction",
    "RegressionResult",
    "SpeedEstimator",
    "StepResult",
    "TECHNIQUES",
    "Trial",
    "TrialLog",
    "TrialTimeout",
    "ZonePose",
    "apply_transfer",
    "build_force_profile",
    "classify",
    "clutching_time",
    "crossing_suite",
    "crossover_distance",
    "effective_width",
    "fit_boundary",
    "fitts_regression",
    "fitts_time",
    "gain_for_speed",
    "generate_reciprocal_task",
    "hybrid_discontinuity",
    "hybrid_time",
    "index_of_difficulty",
    "integrate_boundary",
    "invocations",
    "load_gain_curve",
    "log_from_csv",
    "normalized_penetration",
    "run_manifest",
    "run_trial",
    "scripted_crossing",
    "segment_exit_point",
    "summarize",
    "sweep",
    "synthesize_movement",
    "technique_params",
]
