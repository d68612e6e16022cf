"""Domain models."""

from .diagnostic_models import RicEstimate, RicMode, SpeReport
from .experiment_models import (
    DEFAULT_LOWRANK_GRID,
    DEFAULT_SPARSE_GRID,
    CurveRow,
    ExperimentConfig,
    ExperimentMode,
    SuccessCurve,
    TrialRecord,
)
from .recovery_models import DEFAULT_SUCCESS_THRESHOLD, RecoveryOutcome
from .sensing_models import (
    DitheredEnsemble,
    LowRankMap,
    NoiseModel,
    PhaseObservation,
    SensingEnsemble,
    SignalField,
)
from .solver_models import RecoveryReport, SolverOptions, SolverStatus
from .system_models import LowRankSystem, ReformulatedSystem, SystemCase, canonical_rhs

__all__ = [
    # Sensing
    "SensingEnsemble",
    "DitheredEnsemble",
    "LowRankMap",
    "PhaseObservation",
    "SignalField",
    "NoiseModel",
    # Reformulation
    "ReformulatedSystem",
    "LowRankSystem",
    "SystemCase",
    "canonical_rhs",
    # Solvers
    "SolverOptions",
    "SolverStatus",
    "RecoveryReport",
    # Recovery
    "RecoveryOutcome",
    "DEFAULT_SUCCESS_THRESHOLD",
    # Diagnostics
    "RicEstimate",
    "RicMode",
    "SpeReport",
    # Experiments
    "ExperimentConfig",
    "ExperimentMode",
    "TrialRecord",
    "CurveRow",
    "SuccessCurve",
    "DEFAULT_SPARSE_GRID",
    "DEFAULT_LOWRANK_GRID",
]
