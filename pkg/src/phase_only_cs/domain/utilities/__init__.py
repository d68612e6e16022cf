"""Numerical primitives and the matrix CSV codec."""

from .linalg_core import (
    KAPPA,
    ComplexMatrix,
    ComplexVector,
    RealMatrix,
    RealVector,
    embed_vector,
    kappa,
    make_rng,
    mix_seed,
    phase,
    sample_complex_gaussian,
    to_complex,
    to_real,
    unembed_vector,
)
from .matrix_csv import (
    read_complex_csv,
    read_real_csv,
    write_complex_csv,
    write_real_csv,
)

__all__ = [
    "KAPPA",
    "ComplexMatrix",
    "ComplexVector",
    "RealMatrix",
    "RealVector",
    "embed_vector",
    "kappa",
    "make_rng",
    "mix_seed",
    "phase",
    "sample_complex_gaussian",
    "to_complex",
    "to_real",
    "unembed_vector",
    "read_complex_csv",
    "read_real_csv",
    "write_complex_csv",
    "write_real_csv",
]
