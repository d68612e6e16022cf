"""Result of an end-to-end recovery pipeline."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from .solver_models import RecoveryReport

DEFAULT_SUCCESS_THRESHOLD = 1e-3


@dataclass
class RecoveryOutcome:
    """Estimate plus its scoring against a known truth (if any).

    ``success`` is decided on ``full_error`` when the pipeline recovers the
    norm (linear CS, dithered, noisy) and on ``direction_error`` otherwise.

    Attributes:
        xhat: Complex vector or complex matrix estimate
        direction_error: ||xhat/||xhat|| - x||, NaN without truth
        full_error: ||xhat - x|| (or against x_star for noisy), None if not applicable
        report: Solver telemetry
        success: Applicable error below threshold
        scale_residue: Imaginary part of rho/t_sharp on the dithered path
        phase_consistency: max_k |z_k - phase(Phi_k^* xhat)| when computed
        failure: Short reason when the pipeline failed before scoring
    """

    xhat: np.ndarray
    direction_error: float
    report: RecoveryReport
    success: bool
    full_error: Optional[float] = None
    scale_residue: Optional[float] = None
    phase_consistency: Optional[float] = None
    failure: Optional[str] = None

    @property
    def error(self) -> float:
        """The error that decides success."""
        if self.full_error is not None:
            return self.full_error
        return self.direction_error

    def to_dict(self) -> Dict[str, Any]:
        return {
            "direction_error": self.direction_error,
            "full_error": self.full_error,
            "success": self.success,
            "scale_residue": self.scale_residue,
            "phase_consistency": self.phase_consistency,
            "failure": self.failure,
            "report": self.report.to_dict(),
        }
