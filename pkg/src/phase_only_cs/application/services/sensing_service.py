"""Ground-truth generation and phase-only measurement.

All draws take the caller's ``numpy.random.Generator``; nothing here owns
random state, so concurrent trials stay independent as long as each owns
its generator.
"""

from __future__ import annotations

import logging
import math
from typing import Union

import numpy as np

from ...domain.exceptions import ParameterError
from ...domain.models import (
    DitheredEnsemble,
    LowRankMap,
    NoiseModel,
    PhaseObservation,
    SensingEnsemble,
    SignalField,
)
from ...domain.utilities import phase, sample_complex_gaussian
from ...domain.validators import (
    require_nonnegative,
    require_positive,
    require_positive_int,
    require_shape,
    require_vector,
)

logger = logging.getLogger(__name__)


def sample_ensemble(m: int, n: int, rng: np.random.Generator) -> SensingEnsemble:
    """Draw a complex Gaussian sensing ensemble of size m x n."""
    return SensingEnsemble(sample_complex_gaussian(m, n, rng))


def gen_sparse_signal(
    n: int,
    s: int,
    field: Union[SignalField, str],
    rng: np.random.Generator,
) -> np.ndarray:
    """Draw a unit-norm s-sparse signal with a uniformly random support.

    The support is the head of a full Fisher-Yates permutation, so every
    size-s subset is equally likely. Nonzeros are i.i.d. N(0,1) (real field)
    or N(0,1) + N(0,1)i (complex field) before normalization.

    Args:
        n: Ambient dimension
        s: Number of nonzeros, 1 <= s <= n
        field: Real or complex signal
        rng: Random generator

    Returns:
        Complex vector of length n (zero imaginary part for the real field)

    Raises:
        ParameterError: s outside [1, n]
    """
    n = require_positive_int(n, "n")
    s = require_positive_int(s, "s")
    if s > n:
        raise ParameterError(f"sparsity s={s} exceeds dimension n={n}", parameter="s", value=s)
    field = SignalField(field)

    support = rng.permutation(n)[:s]
    values = rng.standard_normal(s).astype(np.complex128)
    if field is SignalField.COMPLEX:
        values = values + 1j * rng.standard_normal(s)

    x = np.zeros(n, dtype=np.complex128)
    x[support] = values
    return x / np.linalg.norm(x)


def gen_lowrank_signal(n1: int, n2: int, r: int, rng: np.random.Generator) -> np.ndarray:
    """Draw a rank-r complex matrix G H^* with unit Frobenius norm.

    Raises:
        ParameterError: r outside [1, min(n1, n2)]
    """
    n1 = require_positive_int(n1, "n1")
    n2 = require_positive_int(n2, "n2")
    r = require_positive_int(r, "r")
    if r > min(n1, n2):
        raise ParameterError(f"rank r={r} exceeds min(n1, n2)={min(n1, n2)}", parameter="r", value=r)
    g = sample_complex_gaussian(n1, r, rng)
    h = sample_complex_gaussian(n2, r, rng)
    x = g @ h.conj().T
    return x / np.linalg.norm(x)


def measure_phases(ens: SensingEnsemble, x: np.ndarray) -> PhaseObservation:
    """Observe z = phase(Phi x)."""
    x = require_vector(np.asarray(x, dtype=np.complex128), "x", ens.n)
    return PhaseObservation(phase(ens.phi @ x))


def measure_phases_dithered(dens: DitheredEnsemble, x: np.ndarray) -> PhaseObservation:
    """Observe z_d = phase(Phi x + tau_d)."""
    x = require_vector(np.asarray(x, dtype=np.complex128), "x", dens.n)
    return PhaseObservation(phase(dens.base.phi @ x + dens.dither), notes=["dithered"])


def measure_lowrank_phases(lowrank_map: LowRankMap, x: np.ndarray) -> PhaseObservation:
    """Observe z_k = phase(Tr(Phi_k^* X))."""
    x = require_shape(np.asarray(x, dtype=np.complex128), "X", lowrank_map.shape)
    return PhaseObservation(phase(lowrank_map.apply(x)))


def corrupt_phases(
    obs: PhaseObservation,
    tau0: float,
    model: Union[NoiseModel, str],
    rng: np.random.Generator,
) -> PhaseObservation:
    """Add bounded noise with ||z_corrupt - z||_inf <= tau0.

    The disk model adds an offset uniform on the complex disk of radius tau0
    (radius drawn as tau0*sqrt(U) for area uniformity). The phase-jitter model
    rotates each entry by an angle uniform on [-2 asin(tau0/2), 2 asin(tau0/2)],
    which keeps unit modulus; the chord of that arc is at most tau0.

    Raises:
        ParameterError: tau0 < 0 or obs already corrupted
    """
    tau0 = require_nonnegative(tau0, "tau0")
    model = NoiseModel(model)
    if obs.corrupted:
        raise ParameterError("corrupt_phases expects a clean observation", parameter="obs")

    z = obs.z
    if tau0 == 0.0:
        corrupted = np.array(z, copy=True)
    elif model is NoiseModel.DISK:
        radius = tau0 * np.sqrt(rng.random(obs.m))
        angle = rng.uniform(0.0, 2.0 * math.pi, obs.m)
        # Drawn radii can round a hair above tau0
        corrupted = z + np.minimum(radius, tau0) * np.exp(1j * angle)
    else:
        half_width = 2.0 * math.asin(min(tau0, 2.0) / 2.0)
        theta = rng.uniform(-half_width, half_width, obs.m)
        corrupted = z * np.exp(1j * theta)

    return PhaseObservation(
        corrupted,
        corrupted=True,
        noise_bound=tau0,
        notes=list(obs.notes) + [f"noise {model.value}"],
    )


def quantize_phases(obs: PhaseObservation, bits: int) -> PhaseObservation:
    """Round each phase to the nearest of 2**bits uniformly spaced angles.

    Zero entries stay zero. The rounding moves an entry by at most half a
    step along the circle, so the recorded bound is 2 sin(pi / 2**bits / 2).

    Raises:
        ParameterError: bits < 1
    """
    bits = require_positive_int(bits, "bits")
    levels = 2 ** bits
    step = 2.0 * math.pi / levels
    angle = np.round(np.angle(obs.z) / step) * step
    quantized = np.where(obs.z != 0, np.exp(1j * angle), 0.0)
    return PhaseObservation(
        quantized,
        corrupted=True,
        noise_bound=2.0 * math.sin(step / 4.0),
        notes=list(obs.notes) + [f"quantized {bits} bits"],
    )


def sample_dither(m: int, rho: float, rng: np.random.Generator) -> np.ndarray:
    """Draw tau_d with i.i.d. N(0, rho^2) + N(0, rho^2)i entries."""
    m = require_positive_int(m, "m")
    rho = require_positive(rho, "rho")
    return rho * sample_complex_gaussian(m, 1, rng)[:, 0]


def sample_dithered_ensemble(m: int, n: int, rho: float, rng: np.random.Generator) -> DitheredEnsemble:
    """Draw Phi, then the dither, from one generator."""
    base = sample_ensemble(m, n, rng)
    return DitheredEnsemble(base, sample_dither(m, rho, rng), rho)


def extend_ensemble(dens: DitheredEnsemble) -> SensingEnsemble:
    """The extended ensemble [Phi, tau_d / rho]."""
    return SensingEnsemble(np.hstack([dens.base.phi, (dens.dither / dens.rho)[:, None]]))


def sample_lowrank_map(m: int, n1: int, n2: int, rng: np.random.Generator) -> LowRankMap:
    """Draw m i.i.d. complex Gaussian atoms of shape n1 x n2."""
    m = require_positive_int(m, "m")
    n1 = require_positive_int(n1, "n1")
    n2 = require_positive_int(n2, "n2")
    real = rng.standard_normal((m, n1, n2))
    imag = rng.standard_normal((m, n1, n2))
    return LowRankMap(real + 1j * imag)
