"""Real linear systems recasting phase-only sensing as linear sensing.

Given z = phase(Phi x), the vector x_star = kappa m / ||Phi x||_1 * x is the
unique (up to the sparsity prior) solution of a real linear system whose
right-hand side is e_1:

* row 0 (the virtual measurement) reads Re(z^* Phi u) / (kappa m), which is 1
  on x_star because z^* Phi x = ||Phi x||_1;
* rows 1..m read t_hat/sqrt(m) Im(diag(conj z) Phi u), which vanish on every
  positive multiple of x because conj(z_k) (Phi x)_k is real and positive.
"""

from __future__ import annotations

import logging
import math
from typing import Optional, Union

import numpy as np

from ...domain.exceptions import DimensionMismatchError, ParameterError
from ...domain.models import (
    DitheredEnsemble,
    LowRankMap,
    LowRankSystem,
    PhaseObservation,
    ReformulatedSystem,
    SensingEnsemble,
    SystemCase,
)
from ...domain.utilities import KAPPA, phase, to_real
from ...domain.validators import require_positive, require_shape, require_vector
from .sensing_service import extend_ensemble

logger = logging.getLogger(__name__)

T_HAT_REAL = 1.0
T_HAT_COMPLEX = math.sqrt(2.0 / 3.0)


def _check_counts(obs: PhaseObservation, m: int) -> None:
    if obs.m != m:
        raise DimensionMismatchError(
            f"observation has {obs.m} phases but the ensemble has {m} rows",
            expected=m,
            actual=obs.m,
        )


def _weighted_rows(obs: PhaseObservation, ens: SensingEnsemble):
    """Return (z^* Phi, diag(conj z) Phi)."""
    _check_counts(obs, ens.m)
    weighted = obs.z.conj()[:, None] * ens.phi
    return weighted.sum(axis=0), weighted


def build_real(
    obs: PhaseObservation,
    ens: SensingEnsemble,
    t_hat: float = T_HAT_REAL,
) -> ReformulatedSystem:
    """Build A_{z,r} of shape (m+1) x n for real signals."""
    t_hat = require_positive(t_hat, "t_hat")
    row, weighted = _weighted_rows(obs, ens)
    m = ens.m
    a = np.empty((m + 1, ens.n))
    a[0] = row.real / (KAPPA * m)
    a[1:] = (t_hat / math.sqrt(m)) * weighted.imag
    return ReformulatedSystem(a=a, t_hat=t_hat, kappa=KAPPA, case=SystemCase.REAL_SPARSE, n=ens.n)


def build_complex(
    obs: PhaseObservation,
    ens: SensingEnsemble,
    t_hat: Optional[float] = None,
) -> ReformulatedSystem:
    """Build A_{z,c} of shape (m+1) x 2n acting on [Re u; Im u].

    Args:
        obs: Observed phases
        ens: Sensing ensemble
        t_hat: Phase-row scaling, sqrt(2/3) when omitted
    """
    t_hat = T_HAT_COMPLEX if t_hat is None else require_positive(t_hat, "t_hat")
    return _complex_system(obs, ens, t_hat, SystemCase.COMPLEX_SPARSE)


def _complex_system(
    obs: PhaseObservation,
    ens: SensingEnsemble,
    t_hat: float,
    case: SystemCase,
) -> ReformulatedSystem:
    row, weighted = _weighted_rows(obs, ens)
    m, n = ens.m, ens.n
    scale = t_hat / math.sqrt(m)
    a = np.empty((m + 1, 2 * n))
    a[0, :n] = row.real / (KAPPA * m)
    a[0, n:] = -row.imag / (KAPPA * m)
    a[1:, :n] = scale * weighted.imag
    a[1:, n:] = scale * weighted.real
    return ReformulatedSystem(a=a, t_hat=t_hat, kappa=KAPPA, case=case, n=n)


def build_dithered(
    obs: PhaseObservation,
    dens: DitheredEnsemble,
    t_hat: Optional[float] = None,
) -> ReformulatedSystem:
    """Build A_{z_d,c} of shape (m+1) x (2n+2) on the extended ensemble [Phi, tau_d/rho]."""
    t_hat = T_HAT_COMPLEX if t_hat is None else require_positive(t_hat, "t_hat")
    return _complex_system(obs, extend_ensemble(dens), t_hat, SystemCase.DITHERED)


def build_linear_cs(ens: SensingEnsemble, y: np.ndarray) -> ReformulatedSystem:
    """Stacked real system [[Re Phi, -Im Phi], [Im Phi, Re Phi]] u = [Re y; Im y]."""
    y = require_vector(np.asarray(y, dtype=np.complex128), "y", ens.m)
    phi = ens.phi
    a = np.block([[phi.real, -phi.imag], [phi.imag, phi.real]])
    b = np.concatenate([y.real, y.imag])
    return ReformulatedSystem(
        a=a, t_hat=1.0, kappa=KAPPA, case=SystemCase.LINEAR_CS, n=ens.n, rhs_override=b
    )


def build_lowrank(
    obs: PhaseObservation,
    lowrank_map: LowRankMap,
    t_hat: float = T_HAT_COMPLEX,
) -> LowRankSystem:
    """Matrix-free reformulation over U = [Re X; Im X] in R^{2n1 x n2}.

    With B_k = z_k Phi_k and B = sum_k B_k:

    * output 0 = (<Re B, U_top> + <Im B, U_bot>) / (kappa m)
    * output k = t_hat/sqrt(m) (-<Im B_k, U_top> + <Re B_k, U_bot>)
    """
    _check_counts(obs, lowrank_map.m)
    t_hat = require_positive(t_hat, "t_hat")
    m = lowrank_map.m
    n1, n2 = lowrank_map.shape

    weighted = obs.z[:, None, None] * lowrank_map.atoms
    total = weighted.sum(axis=0)
    b_re, b_im = np.ascontiguousarray(weighted.real), np.ascontiguousarray(weighted.imag)
    tot_re, tot_im = total.real.copy(), total.imag.copy()
    norm_scale = 1.0 / (KAPPA * m)
    phase_scale = t_hat / math.sqrt(m)

    def forward(u: np.ndarray) -> np.ndarray:
        top, bottom = u[:n1], u[n1:]
        out = np.empty(m + 1)
        out[0] = norm_scale * (np.sum(tot_re * top) + np.sum(tot_im * bottom))
        out[1:] = phase_scale * (
            np.einsum("kij,ij->k", b_re, bottom) - np.einsum("kij,ij->k", b_im, top)
        )
        return out

    def adjoint(y: np.ndarray) -> np.ndarray:
        head, tail = y[0] * norm_scale, y[1:] * phase_scale
        top = head * tot_re - np.einsum("k,kij->ij", tail, b_im)
        bottom = head * tot_im + np.einsum("k,kij->ij", tail, b_re)
        return np.vstack([top, bottom])

    return LowRankSystem(
        forward=forward, adjoint=adjoint, shape=(2 * n1, n2), m=m, t_hat=t_hat, kappa=KAPPA
    )


def extended_signal(x: np.ndarray, rho: float) -> np.ndarray:
    """x_nat = [x; rho]."""
    rho = require_positive(rho, "rho")
    x = require_vector(np.asarray(x, dtype=np.complex128), "x")
    return np.concatenate([x, [rho]])


def rescaled_truth(ens: SensingEnsemble, x: np.ndarray) -> np.ndarray:
    """x_star = kappa m / ||Phi x||_1 * x, the exact solution of the reformulated system.

    Raises:
        ParameterError: Phi x = 0
    """
    x = require_vector(np.asarray(x, dtype=np.complex128), "x", ens.n)
    l1 = float(np.sum(np.abs(ens.phi @ x)))
    if l1 == 0.0:
        raise ParameterError("Phi x vanishes, x_star is undefined", parameter="x")
    return (KAPPA * ens.m / l1) * x


def rescaled_lowrank_truth(lowrank_map: LowRankMap, x: np.ndarray) -> np.ndarray:
    """X_star = kappa m / ||Phi(X)||_1 * X."""
    x = require_shape(np.asarray(x, dtype=np.complex128), "X", lowrank_map.shape)
    l1 = float(np.sum(np.abs(lowrank_map.apply(x))))
    if l1 == 0.0:
        raise ParameterError("Phi(X) vanishes, X_star is undefined", parameter="X")
    return (KAPPA * lowrank_map.m / l1) * x


def embed_lowrank(x: np.ndarray) -> np.ndarray:
    """[X]_R: Re X stacked above Im X."""
    return to_real(x)


def residual_phase_consistency(
    ens: SensingEnsemble,
    z: Union[PhaseObservation, np.ndarray],
    xhat: np.ndarray,
) -> float:
    """max_k |z_k - phase(Phi_k^* xhat)| over the nonzero observed phases.

    Returns 0 when xhat reproduces every observed phase, and at most 2.
    """
    z = z.z if isinstance(z, PhaseObservation) else np.asarray(z, dtype=np.complex128)
    xhat = require_vector(np.asarray(xhat, dtype=np.complex128), "xhat", ens.n)
    if z.shape[0] != ens.m:
        raise DimensionMismatchError("z length must equal m", expected=ens.m, actual=z.shape[0])
    observed = z != 0
    if not np.any(observed):
        return 0.0
    predicted = phase(ens.phi[observed] @ xhat)
    return float(np.max(np.abs(z[observed] - predicted)))
