"""End-to-end pipelines: reformulate, solve, de-embed and score."""

from __future__ import annotations

import math
from typing import Optional, Union

import numpy as np

from ...domain.exceptions import DimensionMismatchError
from ...domain.models import (
    DEFAULT_SUCCESS_THRESHOLD,
    DitheredEnsemble,
    LowRankMap,
    PhaseObservation,
    RecoveryOutcome,
    RecoveryReport,
    SensingEnsemble,
    SignalField,
    SolverOptions,
)
from ...domain.utilities import to_complex, unembed_vector
from ...domain.validators import require_nonnegative, require_positive
from ...infrastructure.logging import LoggingMixin
from .admm_solver_service import basis_pursuit, basis_pursuit_denoise, nuclear_min
from .reformulation_service import (
    build_complex,
    build_dithered,
    build_linear_cs,
    build_lowrank,
    build_real,
    extended_signal,
    rescaled_truth,
    residual_phase_consistency,
)
from .sensing_service import extend_ensemble

# |t_sharp| below this cannot carry the norm of the signal
DEGENERATE_SCALE = 1e-9


def direction_error(xhat: np.ndarray, x: np.ndarray) -> float:
    """||xhat/||xhat|| - x/||x|| || (Frobenius for matrices).

    Returns 1 when xhat = 0, the distance from the unit truth to the origin.
    """
    xhat = np.asarray(xhat, dtype=np.complex128).ravel()
    x = np.asarray(x, dtype=np.complex128).ravel()
    if xhat.shape != x.shape:
        raise DimensionMismatchError("estimate and truth shapes differ", expected=x.shape, actual=xhat.shape)
    norm = np.linalg.norm(xhat)
    if norm == 0.0:
        return 1.0
    return float(np.linalg.norm(xhat / norm - x / np.linalg.norm(x)))


def _full_error(xhat: np.ndarray, x: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(xhat).ravel() - np.asarray(x).ravel()))


class RecoveryService(LoggingMixin):
    """Phase-only recovery pipelines sharing solver options and a success threshold.

    Every pipeline takes an optional ground truth. With a truth the outcome
    is scored; without one the errors are NaN and ``success`` reports
    whether the solver converged.
    """

    def __init__(
        self,
        options: Optional[SolverOptions] = None,
        threshold: float = DEFAULT_SUCCESS_THRESHOLD,
    ):
        """Initialize the recovery service.

        Args:
            options: ADMM options for every solve
            threshold: Success threshold on the deciding error
        """
        self.options = options or SolverOptions()
        self.threshold = require_positive(threshold, "threshold")

    def _outcome(
        self,
        xhat: np.ndarray,
        report: RecoveryReport,
        truth: Optional[np.ndarray],
        full_truth: Optional[np.ndarray] = None,
        **extra,
    ) -> RecoveryOutcome:
        if truth is None:
            outcome = RecoveryOutcome(
                xhat=xhat, direction_error=math.nan, report=report, success=report.converged, **extra
            )
        else:
            full_error = None if full_truth is None else _full_error(xhat, full_truth)
            decisive = direction_error(xhat, truth) if full_error is None else full_error
            outcome = RecoveryOutcome(
                xhat=xhat,
                direction_error=direction_error(xhat, truth),
                full_error=full_error,
                report=report,
                success=decisive < self.threshold,
                **extra,
            )
        self.log_debug(
            "recovery finished",
            status=report.status.value,
            iterations=report.iterations,
            direction_error=outcome.direction_error,
            full_error=outcome.full_error,
        )
        return outcome

    def recover_sparse(
        self,
        ens: SensingEnsemble,
        obs: PhaseObservation,
        field: Union[SignalField, str] = SignalField.COMPLEX,
        truth: Optional[np.ndarray] = None,
    ) -> RecoveryOutcome:
        """Basis pursuit on A_{z,r} (real field) or A_{z,c} (complex field).

        The estimate equals x up to a positive factor when recovery succeeds.
        """
        field = SignalField(field)
        if field is SignalField.REAL:
            system = build_real(obs, ens)
            report = basis_pursuit(system.a, system.rhs, self.options)
            xhat = report.solution.astype(np.complex128)
        else:
            system = build_complex(obs, ens)
            report = basis_pursuit(system.a, system.rhs, self.options)
            xhat = unembed_vector(report.solution)
        consistency = residual_phase_consistency(ens, obs, xhat) if np.any(xhat) else None
        return self._outcome(xhat, report, truth, phase_consistency=consistency)

    def recover_linear_cs(
        self,
        ens: SensingEnsemble,
        y: np.ndarray,
        truth: Optional[np.ndarray] = None,
    ) -> RecoveryOutcome:
        """Basis pursuit on the stacked real system of full measurements y = Phi x."""
        system = build_linear_cs(ens, y)
        report = basis_pursuit(system.a, system.rhs, self.options)
        xhat = unembed_vector(report.solution)
        return self._outcome(xhat, report, truth, full_truth=truth)

    def recover_full_dithered(
        self,
        dens: DitheredEnsemble,
        obs: PhaseObservation,
        truth: Optional[np.ndarray] = None,
    ) -> RecoveryOutcome:
        """Recover x with its norm from dithered phases.

        Solves on A_{z_d,c}, sets x_sharp = [u]_C and t_sharp = x_sharp[n], and
        returns (rho / t_sharp) x_sharp[:n] using full complex division. The
        imaginary part of rho / t_sharp is reported as ``scale_residue``.
        """
        n = dens.n
        system = build_dithered(obs, dens)
        report = basis_pursuit(system.a, system.rhs, self.options)
        x_sharp = unembed_vector(report.solution)
        t_sharp = complex(x_sharp[n])

        if abs(t_sharp) < DEGENERATE_SCALE:
            self.log_warning("dithered recovery: degenerate scale", t_sharp=abs(t_sharp))
            xhat = np.zeros(n, dtype=np.complex128)
            outcome = self._outcome(xhat, report, truth, full_truth=truth, failure="degenerate-scale")
            outcome.success = False
            return outcome

        ratio = dens.rho / t_sharp
        xhat = ratio * x_sharp[:n]
        # z_d = phase(Phi xhat + tau_d) on the extended ensemble
        consistency = residual_phase_consistency(
            extend_ensemble(dens), obs, extended_signal(xhat, dens.rho)
        )
        return self._outcome(
            xhat,
            report,
            truth,
            full_truth=truth,
            scale_residue=float(ratio.imag),
            phase_consistency=consistency,
        )

    def recover_noisy(
        self,
        ens: SensingEnsemble,
        obs: PhaseObservation,
        tau0: float,
        truth: Optional[np.ndarray] = None,
        field: Union[SignalField, str] = SignalField.COMPLEX,
    ) -> RecoveryOutcome:
        """Basis pursuit denoise with epsilon = sqrt(2) tau0.

        The full error is measured against x_star = kappa m / ||Phi x||_1 x,
        which the noiseless system recovers exactly.
        """
        tau0 = require_nonnegative(tau0, "tau0")
        field = SignalField(field)
        system = build_real(obs, ens) if field is SignalField.REAL else build_complex(obs, ens)
        report = basis_pursuit_denoise(system.a, system.rhs, math.sqrt(2.0) * tau0, self.options)
        if field is SignalField.REAL:
            xhat = report.solution.astype(np.complex128)
        else:
            xhat = unembed_vector(report.solution)
        x_star = None if truth is None else rescaled_truth(ens, truth)
        return self._outcome(xhat, report, truth, full_truth=x_star)

    def recover_lowrank(
        self,
        lowrank_map: LowRankMap,
        obs: PhaseObservation,
        truth: Optional[np.ndarray] = None,
    ) -> RecoveryOutcome:
        """Nuclear-norm minimization on the low-rank reformulation; X = [U]_C."""
        system = build_lowrank(obs, lowrank_map)
        report = nuclear_min(system, self.options)
        xhat = to_complex(report.solution)
        return self._outcome(xhat, report, truth)
