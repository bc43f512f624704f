"""Gravitational search optimization for bounded black-box problems."""

from .errors import (
    ConfigError,
    DimensionError,
    EvaluationError,
    GravoptError,
    ProtocolError,
    RunAbortedError,
)
from .external import ExternalObjective
from .gsa import (
    GsaConfig,
    IterationRecord,
    Particle,
    RunResult,
    best_worst,
    compute_masses,
    gravitational_constant_linear,
    gravitational_constant_power,
    kbest_size,
    pairwise_force,
    run,
    step_kinematics,
    total_force,
)
from .metrics import ClassReport, ConfusionMatrix, confusion, report
from .objectives import (
    EvalRecord,
    FailurePolicy,
    MemoizedObjective,
    Objective,
    memoize,
    rastrigin,
    relu,
    rosenbrock,
    sigmoid,
    sphere,
    step_decay_lr,
)
from .space import (
    Dimension,
    ParamVector,
    SearchSpace,
    clamp,
    decode,
    default_hyperparameter_space,
    encode,
    sample_uniform,
)
from .toytrainer import ToyTrainerConfig, toy_trainer_evaluate, toy_trainer_objective

__version__ = "0.1.0"
