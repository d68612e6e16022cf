"""Sensing ensembles and phase observations.

The ensembles are immutable after construction: their arrays are flagged
read-only so that a shared ensemble (uniform experiments) can be handed to
many concurrent trials.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Tuple

import numpy as np

from ..exceptions import DimensionMismatchError, ParameterError
from ..validators import require_finite, require_nonnegative, require_positive


def _frozen(array: np.ndarray, dtype=np.complex128) -> np.ndarray:
    out = np.array(array, dtype=dtype, copy=True)
    out.flags.writeable = False
    return out


class SignalField(Enum):
    """Field of the ground-truth sparse signal."""

    REAL = "real"
    COMPLEX = "complex"


class NoiseModel(Enum):
    """Bounded corruption models applied after the phases are taken."""

    DISK = "disk"
    PHASE_JITTER = "phase-jitter"


@dataclass(frozen=True)
class SensingEnsemble:
    """Complex sensing matrix Phi (m x n); measurements are phase(Phi x).

    Attributes:
        phi: Complex matrix, row k is the k-th sensing vector (already conjugated,
            so the k-th measurement is ``phi[k] @ x``)
    """

    phi: np.ndarray

    def __post_init__(self):
        phi = np.asarray(self.phi)
        if phi.ndim != 2 or phi.shape[0] < 1 or phi.shape[1] < 1:
            raise DimensionMismatchError("phi must be a non-empty matrix", expected="m x n", actual=phi.shape)
        require_finite(phi, "phi")
        object.__setattr__(self, "phi", _frozen(phi))

    @property
    def m(self) -> int:
        """Measurement count."""
        return int(self.phi.shape[0])

    @property
    def n(self) -> int:
        """Ambient dimension."""
        return int(self.phi.shape[1])


@dataclass(frozen=True)
class DitheredEnsemble:
    """Ensemble with a known complex dither added before the phases.

    Attributes:
        base: Underlying sensing ensemble
        dither: Complex dither vector of length m
        rho: Dithering scale (> 0)
    """

    base: SensingEnsemble
    dither: np.ndarray
    rho: float

    def __post_init__(self):
        dither = np.asarray(self.dither)
        if dither.ndim != 1 or dither.shape[0] != self.base.m:
            raise DimensionMismatchError(
                "dither length must equal m", expected=self.base.m, actual=dither.shape
            )
        require_finite(dither, "dither")
        require_positive(self.rho, "rho")
        object.__setattr__(self, "dither", _frozen(dither))
        object.__setattr__(self, "rho", float(self.rho))

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def n(self) -> int:
        return self.base.n


@dataclass(frozen=True)
class LowRankMap:
    """Linear map X -> (<Phi_k, X>)_k with <Phi_k, X> = Tr(Phi_k^* X).

    Attributes:
        atoms: Complex array of shape (m, n1, n2)
    """

    atoms: np.ndarray

    def __post_init__(self):
        atoms = np.asarray(self.atoms)
        if atoms.ndim != 3 or min(atoms.shape) < 1:
            raise DimensionMismatchError(
                "atoms must be a non-empty (m, n1, n2) stack", expected="(m, n1, n2)", actual=atoms.shape
            )
        require_finite(atoms, "atoms")
        object.__setattr__(self, "atoms", _frozen(atoms))

    @property
    def m(self) -> int:
        return int(self.atoms.shape[0])

    @property
    def shape(self) -> Tuple[int, int]:
        """Shape (n1, n2) shared by every atom."""
        return int(self.atoms.shape[1]), int(self.atoms.shape[2])

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Evaluate (Tr(Phi_k^* X))_k."""
        return np.einsum("kij,ij->k", self.atoms.conj(), x)


@dataclass(frozen=True)
class PhaseObservation:
    """Observed phases z, optionally corrupted by bounded noise.

    Attributes:
        z: Complex vector of length m
        corrupted: Whether noise was added after taking phases
        noise_bound: Known bound tau0 on ||z_corrupt - z||_inf (0 if clean)
        notes: Free-form provenance (noise model, quantizer bits, ...)
    """

    z: np.ndarray
    corrupted: bool = False
    noise_bound: float = 0.0
    notes: List[str] = field(default_factory=list, compare=False)

    def __post_init__(self):
        z = np.asarray(self.z)
        if z.ndim != 1 or z.shape[0] < 1:
            raise DimensionMismatchError("z must be a non-empty vector", expected="m", actual=z.shape)
        require_finite(z, "z")
        require_nonnegative(self.noise_bound, "noise_bound")
        if not self.corrupted:
            modulus = np.abs(z)
            if np.any((modulus != 0) & (np.abs(modulus - 1.0) > 1e-12)):
                raise ParameterError("clean observation entries must be unit-modulus or zero", parameter="z")
        object.__setattr__(self, "z", _frozen(z))

    @property
    def m(self) -> int:
        return int(self.z.shape[0])

    def metadata_line(self) -> str:
        """Header comment serialized with the observation."""
        return f"corrupted {int(self.corrupted)} tau0 {float(self.noise_bound)!r}"
