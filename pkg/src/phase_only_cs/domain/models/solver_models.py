"""ADMM tuning knobs and per-solve telemetry."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict

import numpy as np

from ..exceptions import ParameterError
from ..validators import require_positive, require_positive_int


class SolverStatus(Enum):
    """Termination status of a solve."""

    CONVERGED = "converged"
    MAX_ITER = "max-iter"
    INFEASIBLE = "infeasible"
    NUMERICAL_ERROR = "numerical-error"


@dataclass(frozen=True)
class SolverOptions:
    """ADMM parameters.

    Attributes:
        penalty: Augmented Lagrangian penalty rho (> 0)
        over_relax: Over-relaxation factor in [1, 1.8]
        abs_tol: Absolute stopping tolerance
        rel_tol: Relative stopping tolerance
        max_iter: Iteration cap
    """

    penalty: float = 1.0
    over_relax: float = 1.5
    abs_tol: float = 1e-7
    rel_tol: float = 1e-7
    max_iter: int = 10000

    def __post_init__(self):
        require_positive(self.penalty, "penalty")
        require_positive(self.abs_tol, "abs_tol")
        require_positive(self.rel_tol, "rel_tol")
        require_positive_int(self.max_iter, "max_iter")
        if not 1.0 <= self.over_relax <= 1.8:
            raise ParameterError(
                f"over_relax must lie in [1, 1.8], got {self.over_relax}",
                parameter="over_relax",
                value=self.over_relax,
            )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "penalty": self.penalty,
            "over_relax": self.over_relax,
            "abs_tol": self.abs_tol,
            "rel_tol": self.rel_tol,
            "max_iter": self.max_iter,
        }


@dataclass
class RecoveryReport:
    """Outcome and convergence telemetry of one solve.

    Attributes:
        solution: Real vector or real matrix
        iterations: Iterations performed
        primal_residual: Constraint violation of the returned solution
            (||Au - b||, or its excess over epsilon for the ball constraint)
        dual_residual: Final ADMM dual residual ||rho (z - z_prev)||
        status: Termination status
        objective: l1 or nuclear norm of the solution
        wall_time: Seconds spent in the solve
        split_residual: Final ADMM primal residual ||x - z|| between the split copies
    """

    solution: np.ndarray
    iterations: int
    primal_residual: float
    dual_residual: float
    status: SolverStatus
    objective: float = 0.0
    wall_time: float = 0.0
    split_residual: float = 0.0

    @property
    def converged(self) -> bool:
        return self.status is SolverStatus.CONVERGED

    def to_csv_record(self) -> str:
        """One-line record ``status,iterations,primal,dual,objective,wall_time``."""
        return ",".join(
            [
                self.status.value,
                str(self.iterations),
                f"{self.primal_residual:.17g}",
                f"{self.dual_residual:.17g}",
                f"{self.objective:.17g}",
                f"{self.wall_time:.6f}",
            ]
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "iterations": self.iterations,
            "primal_residual": self.primal_residual,
            "dual_residual": self.dual_residual,
            "objective": self.objective,
            "wall_time": self.wall_time,
            "split_residual": self.split_residual,
        }
