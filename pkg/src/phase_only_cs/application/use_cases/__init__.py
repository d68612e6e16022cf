"""Use cases orchestrating the services."""

from .experiment_runner import ExperimentRunner, UNIFORM_ENSEMBLE_KEY, trial_seed

__all__ = ["ExperimentRunner", "UNIFORM_ENSEMBLE_KEY", "trial_seed"]
