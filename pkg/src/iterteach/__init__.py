"""Teacher-guided example selection for SGD-trained linear students."""

from .data import (
    Dataset,
    FeatureMap,
    apply_map,
    gen_ball,
    gen_gaussian,
    gen_spherical,
    load_features,
    random_feature_map,
    save_features,
)
from .estimator import TeachingClassifier, TeachingRegressor
from .exceptions import (
    ConfigError,
    DataFormatError,
    DimensionError,
    EmptyPoolError,
    IterTeachError,
    LabelDomainError,
    NormBoundError,
    NumericOverflowError,
    SpanViolationError,
)
from .harness import (
    DataSpec,
    ExperimentConfig,
    RunResult,
    TeacherSpec,
    TraceRow,
    compare,
    replay_selected_set,
    run,
    teach,
    write_compare,
    write_run,
)
from .learner import (
    LearnerState,
    TeachingGoal,
    batch_gradient,
    batch_objective,
    predict,
    sgd_step,
    stationarity_gap,
    train_batch,
)
from .linalg import dot, least_squares_min_norm, norm2, random_orthogonal
from .losses import LossKind, RegularizedLoss, gradient, intensity, value
from .rng import derive_rng, derive_seed, make_rng
from .teachers import (
    CombinationPlan,
    ImitationState,
    Pool,
    SelectionObjective,
    StudentQuery,
    SynthesisResult,
    imitation_fit_step,
    imitation_select,
    omniscient_combine,
    omniscient_pool_select,
    omniscient_synthesize,
    random_select,
    rescalable_pool_select,
    selection_objective,
    surrogate_select,
)
from .theory import (
    PoolVolumeReport,
    TeachabilityCertificate,
    certify_run,
    certify_run_rescalable,
    pool_volume,
    remaining_effort,
    rescalable_rate,
    teaching_volume,
)

__version__ = "0.1.0"

__all__ = [
    "CombinationPlan",
    "ConfigError",
    "DataFormatError",
    "DataSpec",
    "Dataset",
    "DimensionError",
    "EmptyPoolError",
    "ExperimentConfig",
    "FeatureMap",
    "ImitationState",
    "IterTeachError",
    "LabelDomainError",
    "LearnerState",
    "LossKind",
    "NormBoundError",
    "NumericOverflowError",
    "Pool",
    "PoolVolumeReport",
    "RegularizedLoss",
    "RunResult",
    "SelectionObjective",
    "SpanViolationError",
    "StudentQuery",
    "SynthesisResult",
    "TeachabilityCertificate",
    "TeacherSpec",
    "TeachingClassifier",
    "TeachingGoal",
    "TeachingRegressor",
    "TraceRow",
    "apply_map",
    "batch_gradient",
    "batch_objective",
    "certify_run",
    "certify_run_rescalable",
    "compare",
    "derive_rng",
    "derive_seed",
    "dot",
    "gen_ball",
    "gen_gaussian",
    "gen_spherical",
    "gradient",
    "imitation_fit_step",
    "imitation_select",
    "intensity",
    "least_squares_min_norm",
    "load_features",
    "make_rng",
    "norm2",
    "omniscient_combine",
    "omniscient_pool_select",
    "omniscient_synthesize",
    "pool_volume",
    "predict",
    "random_feature_map",
    "random_orthogonal",
    "random_select",
    "remaining_effort",
    "replay_selected_set",
    "rescalable_pool_select",
    "rescalable_rate",
    "run",
    "save_features",
    "selection_objective",
    "sgd_step",
    "stationarity_gap",
    "surrogate_select",
    "teach",
    "teaching_volume",
    "train_batch",
    "value",
    "write_compare",
    "write_run",
]
