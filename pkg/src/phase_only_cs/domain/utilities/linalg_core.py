"""Complex/real identifications, phases, Gaussian sampling and seeding.

A complex m x n matrix A is identified with the real 2m x n matrix that
stacks Re(A) above Im(A); a complex vector u with the real vector
[Re(u); Im(u)]. All random draws go through ``numpy.random.Generator``
backed by PCG64, seeded from ``SeedSequence`` so runs replay across
platforms.
"""

from __future__ import annotations

import math
from typing import Union

import numpy as np
import numpy.typing as npt

from ..exceptions import DimensionMismatchError
from ..validators import require_positive_int

ComplexVector = npt.NDArray[np.complex128]
ComplexMatrix = npt.NDArray[np.complex128]
RealVector = npt.NDArray[np.float64]
RealMatrix = npt.NDArray[np.float64]

KAPPA = math.sqrt(math.pi / 2.0)


def kappa() -> float:
    """Expected modulus of a standard complex Gaussian N(0,1)+N(0,1)i."""
    return KAPPA


def to_real(a: ComplexMatrix) -> RealMatrix:
    """Stack Re(A) above Im(A)."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionMismatchError("to_real expects a matrix", expected="2-d", actual=a.shape)
    return np.vstack([a.real, a.imag])


def to_complex(b: RealMatrix) -> ComplexMatrix:
    """Inverse of :func:`to_real`: top half + i * bottom half."""
    b = np.asarray(b, dtype=np.float64)
    if b.ndim != 2 or b.shape[0] % 2:
        raise DimensionMismatchError(
            "to_complex expects a matrix with an even row count",
            expected="2m rows",
            actual=b.shape,
        )
    half = b.shape[0] // 2
    return b[:half] + 1j * b[half:]


def embed_vector(u: ComplexVector) -> RealVector:
    """Real embedding [Re(u); Im(u)] of a complex vector (norm preserving)."""
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 1:
        raise DimensionMismatchError("embed_vector expects a vector", expected="1-d", actual=u.shape)
    return np.concatenate([u.real, u.imag])


def unembed_vector(v: RealVector) -> ComplexVector:
    """Inverse of :func:`embed_vector`."""
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] % 2:
        raise DimensionMismatchError(
            "unembed_vector expects a vector of even length", expected="2n", actual=v.shape
        )
    half = v.shape[0] // 2
    return v[:half] + 1j * v[half:]


def phase(a: Union[complex, np.ndarray]) -> Union[complex, np.ndarray]:
    """Complex sign: a/|a| for a != 0 and 0 at 0.

    Works entrywise on arrays. The modulus comes from ``np.abs`` (hypot based),
    so tiny nonzero inputs still normalize to unit modulus.
    """
    arr = np.asarray(a, dtype=np.complex128)
    modulus = np.abs(arr)
    out = np.zeros_like(arr)
    np.divide(arr, modulus, out=out, where=modulus != 0)
    if out.ndim == 0:
        return complex(out)
    return out


def make_rng(seed: Union[int, np.random.SeedSequence, None]) -> np.random.Generator:
    """Create a PCG64-backed generator from an integer seed or seed sequence."""
    return np.random.Generator(np.random.PCG64(seed))


def mix_seed(master_seed: int, *keys: int) -> np.random.SeedSequence:
    """Derive an independent stream from ``master_seed`` and integer keys.

    The mixing function is numpy's ``SeedSequence`` entropy hashing over the
    tuple (master_seed, *keys); it is platform independent.
    """
    return np.random.SeedSequence([int(master_seed), *(int(k) for k in keys)])


def sample_complex_gaussian(m: int, n: int, rng: np.random.Generator) -> ComplexMatrix:
    """Draw an m x n matrix with i.i.d. N(0,1) + N(0,1)i entries.

    Real parts are drawn before imaginary parts, so a seed fixes the matrix.
    """
    m = require_positive_int(m, "m")
    n = require_positive_int(n, "n")
    real = rng.standard_normal((m, n))
    imag = rng.standard_normal((m, n))
    return real + 1j * imag
