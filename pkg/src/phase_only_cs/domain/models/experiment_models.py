"""Monte Carlo experiment configuration, per-trial records and success curves."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .sensing_models import NoiseModel, SignalField
from .solver_models import SolverOptions

DEFAULT_SPARSE_GRID = [6, 12, 18, 24, 30, 36, 42, 48]
DEFAULT_LOWRANK_GRID = [40, 60, 80, 100, 120]


class ExperimentMode(Enum):
    """Which pipeline a sweep exercises."""

    POCS_NONUNIFORM = "pocs-nonuniform"
    POCS_UNIFORM = "pocs-uniform"
    LINEAR_CS = "linear-cs"
    DITHERED_NONUNIFORM = "dithered-nonuniform"
    DITHERED_UNIFORM = "dithered-uniform"
    NOISY = "noisy"
    LOWRANK = "lowrank"

    @property
    def is_uniform(self) -> bool:
        """Whether one ensemble per m is shared by all trials."""
        return self in (ExperimentMode.POCS_UNIFORM, ExperimentMode.DITHERED_UNIFORM)

    @property
    def is_dithered(self) -> bool:
        return self in (ExperimentMode.DITHERED_NONUNIFORM, ExperimentMode.DITHERED_UNIFORM)


class ExperimentConfig(BaseModel):
    """Validated description of one success-rate sweep."""

    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)

    mode: ExperimentMode = Field(default=ExperimentMode.POCS_NONUNIFORM)
    n: int = Field(default=80, ge=1, description="Ambient dimension of sparse signals")
    s: int = Field(default=3, ge=1, description="Sparsity of sparse signals")
    r: int = Field(default=1, ge=1, description="Rank of low-rank signals")
    n1: int = Field(default=8, ge=1)
    n2: int = Field(default=8, ge=1)
    m_list: List[int] = Field(default_factory=list, description="Measurement counts, ascending")
    trials: int = Field(default=100, ge=1)
    threshold: float = Field(default=1e-3, gt=0)
    rho: float = Field(default=1.0 / 3.0, gt=0, description="Dither scale")
    tau0: float = Field(default=0.0, ge=0, description="Noise bound for the noisy mode")
    noise_model: NoiseModel = Field(default=NoiseModel.DISK)
    signal_field: SignalField = Field(default=SignalField.COMPLEX)
    master_seed: int = Field(default=0, ge=0)
    solver: SolverOptions = Field(default_factory=SolverOptions)

    @field_validator("m_list", mode="before")
    @classmethod
    def parse_m_list(cls, v: Any) -> Any:
        """Accept ``"6, 12, 18"`` as well as a list."""
        if isinstance(v, str):
            return [int(token) for token in v.replace(";", ",").split(",") if token.strip()]
        return v

    @model_validator(mode="after")
    def validate_grid(self) -> "ExperimentConfig":
        """Fill the default grid and check ordering and size constraints."""
        if not self.m_list:
            grid = DEFAULT_LOWRANK_GRID if self.mode is ExperimentMode.LOWRANK else DEFAULT_SPARSE_GRID
            self.m_list = list(grid)
        if any(m < 1 for m in self.m_list):
            raise ValueError(f"m_list entries must be >= 1, got {self.m_list}")
        if any(b <= a for a, b in zip(self.m_list, self.m_list[1:])):
            raise ValueError(f"m_list must be strictly ascending, got {self.m_list}")
        if self.mode is ExperimentMode.LOWRANK:
            if self.r > min(self.n1, self.n2):
                raise ValueError(f"r ({self.r}) cannot exceed min(n1, n2) ({min(self.n1, self.n2)})")
        elif self.s > self.n:
            raise ValueError(f"s ({self.s}) cannot exceed n ({self.n})")
        return self

    @property
    def sparsity(self) -> int:
        """Structure level used on the plot's m/s axis."""
        return self.r if self.mode is ExperimentMode.LOWRANK else self.s

    def header_lines(self) -> List[str]:
        """Configuration comment lines recorded at the top of result files."""
        solver = self.solver
        lines = [
            f"mode {self.mode.value}",
            f"threshold {self.threshold!r} seed {self.master_seed} trials {self.trials}",
        ]
        if self.mode is ExperimentMode.LOWRANK:
            lines.append(f"n1 {self.n1} n2 {self.n2} r {self.r}")
        else:
            lines.append(f"n {self.n} s {self.s} field {self.signal_field.value}")
        if self.mode.is_dithered:
            lines.append(f"rho {self.rho!r}")
        if self.mode is ExperimentMode.NOISY:
            lines.append(f"tau0 {self.tau0!r} noise {self.noise_model.value}")
        lines.append(
            f"solver penalty {solver.penalty!r} over_relax {solver.over_relax!r} "
            f"abs_tol {solver.abs_tol!r} rel_tol {solver.rel_tol!r} max_iter {solver.max_iter}"
        )
        lines.append("m_grid " + " ".join(str(m) for m in self.m_list))
        return lines


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of one Monte Carlo trial.

    ``error`` is +inf when the pipeline failed before producing an estimate.
    Wall time is informational and ignored by equality.
    """

    m: int
    trial_index: int
    seed: int
    success: bool
    error: float
    iterations: int
    wall_time: float = field(compare=False)
    status: str = "converged"
    failure: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "trial_index": self.trial_index,
            "seed": self.seed,
            "success": self.success,
            "error": self.error,
            "iterations": self.iterations,
            "wall_time": self.wall_time,
            "status": self.status,
            "failure": self.failure,
        }


@dataclass(frozen=True)
class CurveRow:
    """Aggregate over all trials at one m."""

    m: int
    trials: int
    successes: int
    rate: float
    mean_error: float
    median_iterations: float


@dataclass
class SuccessCurve:
    """Success rate as a function of m.

    Attributes:
        rows: One aggregate per m, ascending
        label: Legend label
        sparsity: s (or r) used for the m/s axis
        header: Configuration comment lines
    """

    rows: List[CurveRow] = field(default_factory=list)
    label: str = ""
    sparsity: int = 1
    header: List[str] = field(default_factory=list)

    @classmethod
    def from_records(
        cls,
        records: Iterable[TrialRecord],
        label: str = "",
        sparsity: int = 1,
        header: Optional[List[str]] = None,
    ) -> "SuccessCurve":
        """Aggregate trial records per m (the result does not depend on record order).

        ``mean_error`` averages the finite errors only; it is NaN when every
        trial at that m failed outright.
        """
        by_m: Dict[int, List[TrialRecord]] = {}
        for record in records:
            by_m.setdefault(record.m, []).append(record)
        rows = []
        for m in sorted(by_m):
            group = sorted(by_m[m], key=lambda rec: rec.trial_index)
            successes = sum(1 for rec in group if rec.success)
            finite = [rec.error for rec in group if math.isfinite(rec.error)]
            rows.append(
                CurveRow(
                    m=m,
                    trials=len(group),
                    successes=successes,
                    rate=successes / len(group),
                    mean_error=float(np.mean(finite)) if finite else math.nan,
                    median_iterations=float(np.median([rec.iterations for rec in group])),
                )
            )
        return cls(rows=rows, label=label, sparsity=sparsity, header=list(header or []))

    @property
    def m_values(self) -> List[int]:
        return [row.m for row in self.rows]

    @property
    def rates(self) -> List[float]:
        return [row.rate for row in self.rows]

    def rate_at(self, m: int) -> float:
        """Success rate at a given m."""
        for row in self.rows:
            if row.m == m:
                return row.rate
        raise KeyError(m)
