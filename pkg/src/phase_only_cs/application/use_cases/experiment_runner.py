"""Monte Carlo success-rate sweeps.

Every trial owns a generator seeded from
``SeedSequence([master_seed, m, trial_index])``, so a trial's outcome does not
depend on which worker runs it or in which order. Uniform modes share one
ensemble per m drawn from ``SeedSequence([master_seed, m, UNIFORM_ENSEMBLE_KEY])``.
"""

from __future__ import annotations

import contextvars
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from ...application.services import (
    RecoveryService,
    corrupt_phases,
    gen_lowrank_signal,
    gen_sparse_signal,
    measure_lowrank_phases,
    measure_phases,
    measure_phases_dithered,
    sample_dithered_ensemble,
    sample_ensemble,
    sample_lowrank_map,
)
from ...domain.exceptions import BaseApplicationException, ParameterError
from ...domain.models import (
    DitheredEnsemble,
    ExperimentConfig,
    ExperimentMode,
    RecoveryOutcome,
    SensingEnsemble,
    SolverStatus,
    SuccessCurve,
    TrialRecord,
)
from ...domain.utilities import make_rng, mix_seed
from ...domain.validators import require_positive_int
from ...infrastructure.logging import LoggingMixin

logger = logging.getLogger(__name__)

UNIFORM_ENSEMBLE_KEY = 0x5EED_F1ED

SharedEnsemble = Optional[Union[SensingEnsemble, DitheredEnsemble]]
ProgressCallback = Callable[[int, int], None]


def trial_seed(master_seed: int, m: int, trial_index: int) -> int:
    """Integer seed recorded for a trial, derived from its seed sequence."""
    state = mix_seed(master_seed, m, trial_index).generate_state(1, dtype=np.uint64)
    return int(state[0])


class ExperimentRunner(LoggingMixin):
    """Run trials and sweeps for one experiment configuration."""

    def __init__(
        self,
        config: ExperimentConfig,
        workers: int = 1,
        progress: Optional[ProgressCallback] = None,
    ):
        """Initialize the runner.

        Args:
            config: Validated experiment configuration
            workers: Thread count for run_curve (1 runs inline)
            progress: Optional callback(completed, total) after each trial
        """
        self.config = config
        self.workers = require_positive_int(workers, "workers")
        self.progress = progress
        self.service = RecoveryService(options=config.solver, threshold=config.threshold)
        self.records: List[TrialRecord] = []

    def shared_ensemble(self, m: int) -> SharedEnsemble:
        """The ensemble every trial at m shares in uniform modes, else None."""
        cfg = self.config
        if not cfg.mode.is_uniform:
            return None
        rng = make_rng(mix_seed(cfg.master_seed, m, UNIFORM_ENSEMBLE_KEY))
        if cfg.mode is ExperimentMode.DITHERED_UNIFORM:
            return sample_dithered_ensemble(m, cfg.n, cfg.rho, rng)
        return sample_ensemble(m, cfg.n, rng)

    def _execute(self, m: int, rng: np.random.Generator, shared: SharedEnsemble) -> Tuple[RecoveryOutcome, float]:
        """Draw, measure and recover one instance; return the outcome and its deciding error."""
        cfg = self.config
        mode = cfg.mode

        if mode is ExperimentMode.LOWRANK:
            x = gen_lowrank_signal(cfg.n1, cfg.n2, cfg.r, rng)
            lowrank_map = sample_lowrank_map(m, cfg.n1, cfg.n2, rng)
            outcome = self.service.recover_lowrank(lowrank_map, measure_lowrank_phases(lowrank_map, x), truth=x)
            return outcome, outcome.direction_error

        x = gen_sparse_signal(cfg.n, cfg.s, cfg.signal_field, rng)

        if mode.is_dithered:
            dens = shared if shared is not None else sample_dithered_ensemble(m, cfg.n, cfg.rho, rng)
            outcome = self.service.recover_full_dithered(dens, measure_phases_dithered(dens, x), truth=x)
            return outcome, outcome.error

        ens = shared if shared is not None else sample_ensemble(m, cfg.n, rng)
        if mode is ExperimentMode.LINEAR_CS:
            outcome = self.service.recover_linear_cs(ens, ens.phi @ x, truth=x)
        elif mode is ExperimentMode.NOISY:
            noisy = corrupt_phases(measure_phases(ens, x), cfg.tau0, cfg.noise_model, rng)
            outcome = self.service.recover_noisy(ens, noisy, cfg.tau0, truth=x, field=cfg.signal_field)
        else:
            outcome = self.service.recover_sparse(ens, measure_phases(ens, x), cfg.signal_field, truth=x)
        return outcome, outcome.error

    def run_trial(self, m: int, trial_index: int, shared: SharedEnsemble = None) -> TrialRecord:
        """Run one seeded trial.

        A failing pipeline is recorded as an unsuccessful trial with infinite
        error; it never propagates.

        Raises:
            ParameterError: ``shared`` given for a non-uniform mode or missing for a uniform one
        """
        cfg = self.config
        if (shared is not None) != cfg.mode.is_uniform:
            raise ParameterError(
                f"a shared ensemble is required exactly for uniform modes (mode {cfg.mode.value})",
                parameter="shared",
            )

        seed = trial_seed(cfg.master_seed, m, trial_index)
        rng = make_rng(mix_seed(cfg.master_seed, m, trial_index))
        start = time.perf_counter()
        try:
            outcome, error = self._execute(m, rng, shared)
        except (BaseApplicationException, ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
            self.log_warning("trial failed", m=m, trial=trial_index, error=str(exc))
            return TrialRecord(
                m=m,
                trial_index=trial_index,
                seed=seed,
                success=False,
                error=math.inf,
                iterations=0,
                wall_time=time.perf_counter() - start,
                status=SolverStatus.NUMERICAL_ERROR.value,
                failure=type(exc).__name__,
            )

        if not math.isfinite(error):
            error = math.inf
        return TrialRecord(
            m=m,
            trial_index=trial_index,
            seed=seed,
            success=error < cfg.threshold,
            error=error,
            iterations=outcome.report.iterations,
            wall_time=time.perf_counter() - start,
            status=outcome.report.status.value,
            failure=outcome.failure,
        )

    def run_curve(self) -> SuccessCurve:
        """Run every (m, trial) pair and aggregate one row per m.

        Records are kept on ``self.records`` in (m, trial_index) order.
        """
        cfg = self.config
        tasks = [(m, index) for m in cfg.m_list for index in range(cfg.trials)]
        shared: Dict[int, SharedEnsemble] = {m: self.shared_ensemble(m) for m in cfg.m_list}
        total = len(tasks)
        self.log_info(
            "sweep started", mode=cfg.mode.value, grid=cfg.m_list, trials=cfg.trials, workers=self.workers
        )

        records: List[TrialRecord] = []
        if self.workers == 1:
            for done, (m, index) in enumerate(tasks, start=1):
                records.append(self.run_trial(m, index, shared[m]))
                self._report_progress(done, total)
        else:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                # Each task runs in a copy of the caller's context so the run id reaches worker log lines
                futures = [
                    pool.submit(contextvars.copy_context().run, self.run_trial, m, index, shared[m])
                    for m, index in tasks
                ]
                for done, future in enumerate(futures, start=1):
                    records.append(future.result())
                    self._report_progress(done, total)

        self.records = sorted(records, key=lambda rec: (rec.m, rec.trial_index))
        curve = SuccessCurve.from_records(
            self.records, label=cfg.mode.value, sparsity=cfg.sparsity, header=cfg.header_lines()
        )
        self.log_info("sweep finished", rates=curve.rates)
        return curve

    def _report_progress(self, done: int, total: int) -> None:
        if self.progress is not None:
            self.progress(done, total)
