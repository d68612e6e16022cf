"""Results of the empirical probes."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple


class RicMode(Enum):
    """How the restricted isometry constant was estimated."""

    EXACT = "exact-enumeration"
    SAMPLED = "sampled"


@dataclass(frozen=True)
class RicEstimate:
    """Empirical restricted isometry constant.

    In sampled mode ``delta`` is a lower bound on the true constant.

    Attributes:
        delta: max over examined supports of max(smax^2 - 1, 1 - smin^2)
        order: Sparsity (or rank) order
        mode: Exact enumeration or sampling
        witnesses: Worst support (column indices), empty for matrix probes
        samples: Number of supports or matrices examined
        t_hat: Phase-row scaling the matrix was built with, when known
    """

    delta: float
    order: int
    mode: RicMode
    witnesses: Tuple[int, ...] = ()
    samples: int = 0
    t_hat: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "delta": self.delta,
            "order": self.order,
            "mode": self.mode.value,
            "witnesses": list(self.witnesses),
            "samples": self.samples,
            "t_hat": self.t_hat,
        }


@dataclass(frozen=True)
class SpeReport:
    """Worst normalized sign-product embedding deviation over a pair set."""

    deviation: float
    m: int
    pair_count: int
    per_pair: Tuple[float, ...] = field(default=(), compare=False)
