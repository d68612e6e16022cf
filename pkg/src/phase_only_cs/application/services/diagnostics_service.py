"""Empirical probes of restricted isometry, concentration and embedding quantities.

Restricted isometry constants are evaluated per support T as
max(smax(A_T)^2 - 1, 1 - smin(A_T)^2). Supports are processed in batches
through numpy's stacked SVD; the max-reduction keeps the first worst
support in enumeration (or sampling) order, so results are deterministic.
"""

from __future__ import annotations

import itertools
import logging
import math
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ...domain.exceptions import EnumerationCapExceeded, ParameterError
from ...domain.models import (
    LowRankSystem,
    PhaseObservation,
    RicEstimate,
    RicMode,
    SensingEnsemble,
    SpeReport,
)
from ...domain.utilities import KAPPA, embed_vector, phase, to_real
from ...domain.validators import (
    require_positive,
    require_positive_int,
    require_unit_norm,
    require_vector,
)
from ...infrastructure.logging import log_function_call
from .reformulation_service import build_complex
from .sensing_service import gen_lowrank_signal

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_CAP = 1_000_000
BATCH_SIZE = 2048

Support = Tuple[int, ...]


def _support_deltas(a: np.ndarray, supports: np.ndarray) -> np.ndarray:
    """Distortion of every support in an (k, order) index array."""
    rows, order = a.shape[0], supports.shape[1]
    deltas = np.empty(supports.shape[0])
    for start in range(0, supports.shape[0], BATCH_SIZE):
        batch = supports[start:start + BATCH_SIZE]
        stacked = np.transpose(a[:, batch], (1, 0, 2))
        sigma = np.linalg.svd(stacked, compute_uv=False)
        smax = sigma[:, 0]
        smin = sigma[:, -1] if order <= rows else np.zeros(batch.shape[0])
        deltas[start:start + BATCH_SIZE] = np.maximum(smax ** 2 - 1.0, 1.0 - smin ** 2)
    return deltas


def _worst(a: np.ndarray, supports: np.ndarray) -> Tuple[float, Support]:
    deltas = _support_deltas(a, supports)
    index = int(np.argmax(deltas))
    return max(float(deltas[index]), 0.0), tuple(int(i) for i in supports[index])


def _check_order(a: np.ndarray, order: int) -> int:
    order = require_positive_int(order, "order")
    if order > a.shape[1]:
        raise ParameterError(
            f"order {order} exceeds the column count {a.shape[1]}", parameter="order", value=order
        )
    return order


@log_function_call
def estimate_ric_exact(
    a: np.ndarray,
    order: int,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> RicEstimate:
    """Exact RIC of the given order by enumerating every column support.

    Raises:
        EnumerationCapExceeded: C(q, order) exceeds ``cap``; use sampled mode
    """
    a = np.asarray(a, dtype=np.float64)
    order = _check_order(a, order)
    count = math.comb(a.shape[1], order)
    if count > cap:
        raise EnumerationCapExceeded(supports=count, cap=cap)

    supports = np.array(list(itertools.combinations(range(a.shape[1]), order)), dtype=np.intp)
    delta, witness = _worst(a, supports)
    logger.debug(f"exact RIC order {order}: delta={delta:.6g} over {count} supports")
    return RicEstimate(delta=delta, order=order, mode=RicMode.EXACT, witnesses=witness, samples=count)


def _draw_supports(columns: int, order: int, samples: int, rng: np.random.Generator) -> np.ndarray:
    # Row k depends only on the first k rows of draws, so a larger budget extends a smaller one
    keys = rng.random((samples, columns))
    return np.sort(np.argsort(keys, axis=1)[:, :order], axis=1)


def _as_support_array(supports: Iterable[Sequence[int]], order: int) -> np.ndarray:
    rows = [tuple(sorted(int(i) for i in support)) for support in supports]
    for row in rows:
        if len(row) != order or len(set(row)) != order:
            raise ParameterError(f"seed support {row} is not a set of {order} columns", parameter="seed_supports")
    return np.array(rows, dtype=np.intp).reshape(len(rows), order)


@log_function_call
def estimate_ric_sampled(
    a: np.ndarray,
    order: int,
    samples: int,
    rng: np.random.Generator,
    seed_supports: Optional[Iterable[Sequence[int]]] = None,
) -> RicEstimate:
    """Lower bound on the RIC from uniformly drawn supports plus optional seed supports.

    When the budget covers all C(q, order) supports the exact value is
    returned instead. Under a fixed seed the estimate is nondecreasing in
    ``samples``.
    """
    a = np.asarray(a, dtype=np.float64)
    order = _check_order(a, order)
    samples = require_positive_int(samples, "samples")
    if samples >= math.comb(a.shape[1], order):
        return estimate_ric_exact(a, order, cap=samples)

    supports = _draw_supports(a.shape[1], order, samples, rng)
    if seed_supports is not None:
        seeds = _as_support_array(seed_supports, order)
        supports = np.vstack([seeds, supports]) if seeds.size else supports
    delta, witness = _worst(a, supports)
    return RicEstimate(
        delta=delta, order=order, mode=RicMode.SAMPLED, witnesses=witness, samples=int(supports.shape[0])
    )


def truth_supports(
    x: np.ndarray,
    order: int,
    rng: np.random.Generator,
    embedded: bool = True,
    variants: int = 4,
) -> List[Support]:
    """Adversarial candidate supports aligned with a signal.

    Returns ``variants`` copies of the support of x (of its real embedding
    when ``embedded``) padded with random other columns, followed by the
    union of two random half-size supports. If the support of x is larger
    than ``order`` its largest entries are kept.
    """
    x = require_vector(np.asarray(x, dtype=np.complex128), "x")
    order = require_positive_int(order, "order")
    values = embed_vector(x) if embedded else x.real
    columns = values.shape[0]
    if order > columns:
        raise ParameterError(f"order {order} exceeds {columns} columns", parameter="order", value=order)

    nonzero = np.flatnonzero(values)
    if nonzero.size > order:
        nonzero = nonzero[np.argsort(-np.abs(values[nonzero]), kind="stable")[:order]]
    rest = np.setdiff1d(np.arange(columns), nonzero)

    candidates: List[Support] = []
    for _ in range(variants):
        pad = rng.choice(rest, size=order - nonzero.size, replace=False)
        candidates.append(tuple(sorted(int(i) for i in np.concatenate([nonzero, pad]))))

    half = max(order // 2, 1)
    first = rng.choice(columns, size=half, replace=False)
    second = rng.choice(np.setdiff1d(np.arange(columns), first), size=order - half, replace=False)
    candidates.append(tuple(sorted(int(i) for i in np.concatenate([first, second]))))
    return candidates


def ric_t_hat_sweep(
    obs: PhaseObservation,
    ens: SensingEnsemble,
    order: int,
    t_hats: Sequence[float],
    samples: int,
    rng: np.random.Generator,
    seed_supports: Optional[Iterable[Sequence[int]]] = None,
) -> List[RicEstimate]:
    """Sampled RIC of A_{z,c} for several phase-row scalings over identical supports."""
    base = build_complex(obs, ens)
    order = _check_order(base.a, order)
    samples = require_positive_int(samples, "samples")
    supports = _draw_supports(base.a.shape[1], order, samples, rng)
    if seed_supports is not None:
        seeds = _as_support_array(seed_supports, order)
        supports = np.vstack([seeds, supports]) if seeds.size else supports

    estimates = []
    for t_hat in t_hats:
        system = base.with_t_hat(float(t_hat))
        delta, witness = _worst(system.a, supports)
        estimates.append(
            RicEstimate(
                delta=delta,
                order=order,
                mode=RicMode.SAMPLED,
                witnesses=witness,
                samples=int(supports.shape[0]),
                t_hat=float(t_hat),
            )
        )
    return estimates


def estimate_matrix_ric_sampled(
    system: LowRankSystem,
    rank: int,
    samples: int,
    rng: np.random.Generator,
) -> RicEstimate:
    """Lower bound on the rank-restricted isometry constant of the low-rank forward map.

    Draws unit-Frobenius complex rank-``rank`` matrices X and evaluates
    | ||forward([X]_R)||^2 - 1 |.
    """
    samples = require_positive_int(samples, "samples")
    n1, n2 = system.shape[0] // 2, system.shape[1]
    worst = 0.0
    for _ in range(samples):
        u = to_real(gen_lowrank_signal(n1, n2, rank, rng))
        worst = max(worst, abs(float(np.sum(system.forward(u) ** 2)) - 1.0))
    return RicEstimate(delta=worst, order=rank, mode=RicMode.SAMPLED, samples=samples, t_hat=system.t_hat)


def count_near_vanishing(ens: SensingEnsemble, x: np.ndarray, eta: float) -> int:
    """#{k : |Phi_k^* x| < eta} for unit-norm x.

    Raises:
        ParameterError: eta <= 0 or x not unit norm
    """
    eta = require_positive(eta, "eta")
    x = require_vector(np.asarray(x, dtype=np.complex128), "x", ens.n)
    require_unit_norm(x, "x")
    return int(np.count_nonzero(np.abs(ens.phi @ x) < eta))


def near_vanishing_probability(eta: float) -> float:
    """P(|g| < eta) for g ~ N(0,1) + N(0,1)i: the Rayleigh CDF 1 - exp(-eta^2 / 2)."""
    eta = require_positive(eta, "eta")
    return -math.expm1(-eta * eta / 2.0)


def l1_concentration(ens: SensingEnsemble, w: np.ndarray) -> float:
    """| ||Phi w||_1 / (kappa m) - 1 | for unit-norm w."""
    w = require_vector(np.asarray(w, dtype=np.complex128), "w", ens.n)
    require_unit_norm(w, "w")
    return abs(float(np.sum(np.abs(ens.phi @ w))) / (KAPPA * ens.m) - 1.0)


def spe_deviation(
    ens: SensingEnsemble,
    pairs: Sequence[Tuple[np.ndarray, np.ndarray]],
) -> SpeReport:
    """Worst |Re<sign(Phi u), Phi v>/(kappa m) - Re<u, v>| / ||v|| over the pairs.

    Pairs with v = 0 contribute 0.

    Raises:
        ParameterError: Empty pair list or non-unit u
    """
    if len(pairs) == 0:
        raise ParameterError("spe_deviation needs at least one (u, v) pair", parameter="pairs")
    per_pair = []
    for u, v in pairs:
        u = require_vector(np.asarray(u, dtype=np.complex128), "u", ens.n)
        v = require_vector(np.asarray(v, dtype=np.complex128), "v", ens.n)
        require_unit_norm(u, "u")
        v_norm = float(np.linalg.norm(v))
        if v_norm == 0.0:
            per_pair.append(0.0)
            continue
        embedded = np.vdot(phase(ens.phi @ u), ens.phi @ v).real / (KAPPA * ens.m)
        per_pair.append(abs(embedded - np.vdot(u, v).real) / v_norm)
    return SpeReport(deviation=max(per_pair), m=ens.m, pair_count=len(per_pair), per_pair=tuple(per_pair))


@log_function_call
def estimate_kappa(samples: int, rng: np.random.Generator, chunk: int = 1_000_000) -> float:
    """Monte Carlo mean of |N(0,1) + N(0,1)i|; standard error sqrt((2 - pi/2)/samples)."""
    samples = require_positive_int(samples, "samples")
    total = 0.0
    remaining = samples
    while remaining:
        size = min(chunk, remaining)
        total += float(np.sum(np.hypot(rng.standard_normal(size), rng.standard_normal(size))))
        remaining -= size
    return total / samples


def kappa_standard_error(samples: int) -> float:
    return math.sqrt((2.0 - math.pi / 2.0) / require_positive_int(samples, "samples"))
