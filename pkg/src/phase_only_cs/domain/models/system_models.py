"""Real linear systems produced by the reformulation builders."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np

from ..exceptions import DimensionMismatchError
from ..validators import require_finite, require_positive


class SystemCase(Enum):
    """Which builder produced a reformulated system."""

    REAL_SPARSE = "real-sparse"
    COMPLEX_SPARSE = "complex-sparse"
    DITHERED = "dithered"
    LINEAR_CS = "linear-cs"


def canonical_rhs(length: int) -> np.ndarray:
    """The right-hand side e_1 of the given length."""
    rhs = np.zeros(length)
    rhs[0] = 1.0
    return rhs


@dataclass(frozen=True)
class ReformulatedSystem:
    """Dense real system ``a u = e_1`` (or ``a u = b`` for linear CS).

    Row 0 is the virtual norm-fixing measurement scaled by 1/(kappa m); rows
    1..m are the phase-consistency rows scaled by t_hat/sqrt(m).

    Attributes:
        a: Real matrix of shape (rows, d)
        t_hat: Scaling of the phase rows
        kappa: Normalizing constant of row 0
        case: Builder that produced the system
        n: Complex (or real) signal dimension the columns encode
        rhs_override: Explicit right-hand side; None means e_1
    """

    a: np.ndarray
    t_hat: float
    kappa: float
    case: SystemCase
    n: int
    rhs_override: Optional[np.ndarray] = None

    def __post_init__(self):
        a = np.array(self.a, dtype=np.float64, copy=True)
        if a.ndim != 2:
            raise DimensionMismatchError("system matrix must be 2-d", expected="2-d", actual=a.shape)
        require_finite(a, "a")
        require_positive(self.t_hat, "t_hat")
        a.flags.writeable = False
        object.__setattr__(self, "a", a)
        if self.rhs_override is not None:
            rhs = np.array(self.rhs_override, dtype=np.float64, copy=True)
            if rhs.shape != (a.shape[0],):
                raise DimensionMismatchError("rhs length must equal row count", expected=a.shape[0], actual=rhs.shape)
            rhs.flags.writeable = False
            object.__setattr__(self, "rhs_override", rhs)

    @property
    def m(self) -> int:
        """Number of phase measurements (rows minus the virtual row)."""
        if self.case is SystemCase.LINEAR_CS:
            return self.a.shape[0] // 2
        return self.a.shape[0] - 1

    @property
    def rhs(self) -> np.ndarray:
        """Right-hand side: e_1 unless overridden."""
        if self.rhs_override is not None:
            return self.rhs_override
        return canonical_rhs(self.a.shape[0])

    @property
    def norm_row(self) -> np.ndarray:
        return self.a[0]

    @property
    def phase_rows(self) -> np.ndarray:
        return self.a[1:]

    def residual(self, u: np.ndarray) -> np.ndarray:
        """a u - rhs."""
        return self.a @ u - self.rhs

    def with_t_hat(self, t_hat: float) -> "ReformulatedSystem":
        """Return the same system with phase rows rescaled to ``t_hat``."""
        require_positive(t_hat, "t_hat")
        a = np.array(self.a, copy=True)
        a[1:] *= t_hat / self.t_hat
        return ReformulatedSystem(
            a=a, t_hat=t_hat, kappa=self.kappa, case=self.case, n=self.n, rhs_override=self.rhs_override
        )

    def metadata_line(self) -> str:
        """Header comment used when the system is serialized."""
        return (
            f"system case {self.case.value} m {self.m} n {self.n} "
            f"that {self.t_hat!r} kappa {self.kappa!r}"
        )


@dataclass(frozen=True)
class LowRankSystem:
    """Matrix-free system ``forward(U) = e_1`` over U in R^{2 n1 x n2}.

    Attributes:
        forward: Linear map R^{2n1 x n2} -> R^{m+1}
        adjoint: Linear map R^{m+1} -> R^{2n1 x n2}
        shape: Shape (2 n1, n2) of the unknown
        m: Number of phase measurements
        t_hat: Scaling of the phase outputs
        kappa: Normalizing constant of the virtual output
    """

    forward: Callable[[np.ndarray], np.ndarray]
    adjoint: Callable[[np.ndarray], np.ndarray]
    shape: Tuple[int, int]
    m: int
    t_hat: float = math.sqrt(2.0 / 3.0)
    kappa: float = math.sqrt(math.pi / 2.0)

    @property
    def rhs(self) -> np.ndarray:
        return canonical_rhs(self.m + 1)

    def gram(self) -> np.ndarray:
        """Matrix of forward(adjoint(.)) of size (m+1) x (m+1)."""
        size = self.m + 1
        gram = np.empty((size, size))
        for j in range(size):
            gram[:, j] = self.forward(self.adjoint(canonical_rhs_at(size, j)))
        return 0.5 * (gram + gram.T)


def canonical_rhs_at(length: int, index: int) -> np.ndarray:
    """Canonical basis vector e_{index} of the given length."""
    e = np.zeros(length)
    e[index] = 1.0
    return e
