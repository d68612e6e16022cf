"""Proximal ADMM solvers for l1 and nuclear-norm minimization.

All three solvers split the unknown into two copies x = z and alternate

    x <- P(z - u)                         projection onto the constraint set
    z <- prox(alpha x + (1 - alpha) z + u) soft (singular value) thresholding
    u <- u + alpha x + (1 - alpha) z_prev - z

with over-relaxation alpha and the usual primal/dual residual stopping rule.
The right-hand side is normalized to unit norm before iterating and the
solution scaled back, so the solvers are positively homogeneous in b.
"""

from __future__ import annotations

import logging
import math
import time
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, eigh, svd

from ...domain.exceptions import DimensionMismatchError, ProjectionNotConverged, SolverError
from ...domain.models import LowRankSystem, RecoveryReport, SolverOptions, SolverStatus
from ...domain.validators import require_finite, require_nonnegative

logger = logging.getLogger(__name__)

# Relative pivot / eigenvalue floor below which a Gram matrix counts as singular
GRAM_RCOND = 1e-10
# Tolerance for b lying in the range of A after normalization
RANGE_TOL = 1e-8
# Root find on the ball-projection multiplier
ROOT_TOL = 1e-12
ROOT_MAX_ITER = 200


def soft_threshold(v: np.ndarray, kappa_thr: float) -> np.ndarray:
    """Entrywise sign(v) * max(|v| - kappa_thr, 0)."""
    kappa_thr = require_nonnegative(kappa_thr, "kappa_thr")
    v = np.asarray(v, dtype=np.float64)
    return np.sign(v) * np.maximum(np.abs(v) - kappa_thr, 0.0)


def _svd(matrix: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    if not np.all(np.isfinite(matrix)):
        raise SolverError("SVD input contains non-finite entries")
    try:
        return svd(matrix, full_matrices=False, check_finite=False, lapack_driver="gesdd")
    except LinAlgError:
        try:
            return svd(matrix, full_matrices=False, check_finite=False, lapack_driver="gesvd")
        except LinAlgError as exc:
            raise SolverError(f"SVD did not converge: {exc}") from exc


def singular_value_threshold(matrix: np.ndarray, kappa_thr: float) -> np.ndarray:
    """Q max(Sigma - kappa_thr, 0) W^T for the thin SVD M = Q Sigma W^T.

    Raises:
        SolverError: SVD failure
    """
    kappa_thr = require_nonnegative(kappa_thr, "kappa_thr")
    q, sigma, wt = _svd(np.asarray(matrix, dtype=np.float64))
    shrunk = np.maximum(sigma - kappa_thr, 0.0)
    keep = shrunk > 0
    return (q[:, keep] * shrunk[keep]) @ wt[keep]


def nuclear_norm(matrix: np.ndarray) -> float:
    return float(np.sum(_svd(np.asarray(matrix, dtype=np.float64))[1]))


class GramFactor:
    """Once-computed factorization of a symmetric positive semidefinite Gram matrix.

    Cholesky is used when the pivots are well separated from zero; otherwise
    the factor falls back to a pseudo-inverse on the eigen-range, and
    :meth:`in_range` tells whether a right-hand side is consistent.
    """

    def __init__(self, gram: np.ndarray, rcond: float = GRAM_RCOND):
        gram = 0.5 * (gram + gram.T)
        self.size = gram.shape[0]
        self._cho = None
        self._basis: Optional[np.ndarray] = None
        self._inv_eigs: Optional[np.ndarray] = None

        try:
            cho = cho_factor(gram, lower=True, check_finite=False)
            pivots = np.abs(np.diag(cho[0]))
            if pivots.size and pivots.min() ** 2 > rcond * pivots.max() ** 2:
                self._cho = cho
        except LinAlgError:
            pass

        if self._cho is None:
            eigs, vecs = eigh(gram, check_finite=False)
            top = eigs.max() if eigs.size else 0.0
            keep = eigs > rcond * top if top > 0 else np.zeros(eigs.shape, dtype=bool)
            self._basis = vecs[:, keep]
            self._inv_eigs = 1.0 / eigs[keep]
            logger.debug(f"Gram matrix rank deficient: rank {int(keep.sum())} of {self.size}")

    @property
    def singular(self) -> bool:
        return self._cho is None

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """G^{-1} rhs (or the pseudo-inverse on the range)."""
        if self._cho is not None:
            return cho_solve(self._cho, rhs, check_finite=False)
        return self._basis @ (self._inv_eigs * (self._basis.T @ rhs))

    def in_range(self, rhs: np.ndarray, tol: float = RANGE_TOL) -> bool:
        if self._cho is not None:
            return True
        residual = rhs - self._basis @ (self._basis.T @ rhs)
        return float(np.linalg.norm(residual)) <= tol * max(1.0, float(np.linalg.norm(rhs)))


class AffineProjector:
    """Projection onto {u : A u = b}: u = v - A^T (A A^T)^{-1} (A v - b)."""

    def __init__(self, a: np.ndarray):
        self.a = a
        self.factor = GramFactor(a @ a.T)

    def consistent(self, b: np.ndarray) -> bool:
        return self.factor.in_range(b)

    def project(self, v: np.ndarray, b: np.ndarray) -> np.ndarray:
        return v - self.a.T @ self.factor.solve(self.a @ v - b)


class ResidualBallProjector:
    """Projection onto {u : ||A u - b|| <= epsilon} through a precomputed thin SVD.

    For a point v outside the set, the projection is v + V d(mu) with
    w = V^T v, c = U^T b and d_i = mu s_i (c_i - s_i w_i) / (1 + mu s_i^2),
    where the multiplier mu > 0 solves

        h(mu) = sum_i (s_i w_i - c_i)^2 / (1 + mu s_i^2)^2 + ||b_perp||^2 - epsilon^2 = 0.

    h is convex and decreasing, so Newton steps taken from the left of the
    root stay bracketed; bisection guards the remaining cases.
    """

    def __init__(self, a: np.ndarray, b: np.ndarray, epsilon: float, rank_tol: float = 1e-12):
        self.a = a
        self.b = b
        self.epsilon = float(epsilon)
        u, s, vt = _svd(a)
        keep = s > rank_tol * s.max() if s.size and s.max() > 0 else np.zeros(s.shape, dtype=bool)
        self.s = s[keep]
        self.vt = vt[keep]
        self.c = u[:, keep].T @ b
        # Distance from b to range(A)
        self.floor = float(np.linalg.norm(b - u[:, keep] @ self.c))

    @property
    def feasible(self) -> bool:
        return self.floor <= self.epsilon * (1.0 + 1e-12) + 1e-15

    def project(self, v: np.ndarray) -> Tuple[np.ndarray, float]:
        """Return (projection, multiplier); the multiplier is 0 inside the ball and inf for epsilon = floor.

        Raises:
            ProjectionNotConverged: The multiplier root find stalled
        """
        s, c = self.s, self.c
        w = self.vt @ v
        gap = s * w - c
        target = self.epsilon ** 2 - self.floor ** 2
        if float(gap @ gap) <= target:
            return v, 0.0
        if target <= 1e-24:
            # Degenerate ball: affine projection onto the least-squares set
            return v + self.vt.T @ (-gap / s), math.inf

        gap2 = gap * gap
        s2 = s * s

        def h(mu: float) -> float:
            return float(np.sum(gap2 / (1.0 + mu * s2) ** 2)) - target

        def dh(mu: float) -> float:
            return float(np.sum(-2.0 * s2 * gap2 / (1.0 + mu * s2) ** 3))

        lo, hi = 0.0, 1.0
        while h(hi) > 0:
            lo, hi = hi, 2.0 * hi
            if hi > 1e300:
                raise ProjectionNotConverged(iterations=0, gap=h(lo))

        mu, value = lo, h(lo)
        tolerance = ROOT_TOL * self.epsilon ** 2
        for _ in range(ROOT_MAX_ITER):
            if abs(value) <= tolerance or hi - lo <= 4.0 * np.finfo(float).eps * hi:
                break
            if value > 0:
                lo = mu
            else:
                hi = mu
            slope = dh(mu)
            step = mu - value / slope if slope < 0 else 0.5 * (lo + hi)
            mu = step if lo < step < hi else 0.5 * (lo + hi)
            value = h(mu)
        else:
            raise ProjectionNotConverged(iterations=ROOT_MAX_ITER, gap=abs(value))

        d = -mu * s * gap / (1.0 + mu * s2)
        return v + self.vt.T @ d, mu


def _run_admm(
    x_update: Callable[[np.ndarray], np.ndarray],
    z_update: Callable[[np.ndarray], np.ndarray],
    shape: Tuple[int, ...],
    opts: SolverOptions,
):
    """Shared over-relaxed ADMM loop; returns (x, z, iterations, split, dual, status)."""
    alpha, rho = opts.over_relax, opts.penalty
    root = math.sqrt(int(np.prod(shape)))
    z = np.zeros(shape)
    u = np.zeros(shape)
    x = z
    split = dual = math.inf
    status = SolverStatus.MAX_ITER
    iteration = 0
    for iteration in range(1, opts.max_iter + 1):
        x = x_update(z - u)
        x_hat = alpha * x + (1.0 - alpha) * z
        z_prev = z
        z = z_update(x_hat + u)
        u = u + x_hat - z

        split = float(np.linalg.norm(x - z))
        dual = float(np.linalg.norm(rho * (z - z_prev)))
        eps_pri = root * opts.abs_tol + opts.rel_tol * max(np.linalg.norm(x), np.linalg.norm(z))
        eps_dual = root * opts.abs_tol + opts.rel_tol * np.linalg.norm(rho * u)
        if split < eps_pri and dual < eps_dual:
            status = SolverStatus.CONVERGED
            break
    return x, z, iteration, split, dual, status


def _check_system(a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2:
        raise DimensionMismatchError("a must be a matrix", expected="2-d", actual=a.shape)
    if b.shape != (a.shape[0],):
        raise DimensionMismatchError("b length must equal the row count of a", expected=a.shape[0], actual=b.shape)
    require_finite(a, "a")
    require_finite(b, "b")
    return a, b


def _trivial_report(shape, started: float, status: SolverStatus, residual: float = 0.0) -> RecoveryReport:
    return RecoveryReport(
        solution=np.zeros(shape),
        iterations=0,
        primal_residual=residual,
        dual_residual=0.0,
        status=status,
        objective=0.0,
        wall_time=time.perf_counter() - started,
    )


def basis_pursuit(a: np.ndarray, b: np.ndarray, opts: Optional[SolverOptions] = None) -> RecoveryReport:
    """min ||u||_1 subject to A u = b.

    A A^T is factored once. When it is singular the projection uses its
    pseudo-inverse, and the status is infeasible only if b is outside range(A).
    A rank-deficient but consistent system (linear CS with m >= n) still solves.

    Raises:
        ParameterError: Non-finite input
        DimensionMismatchError: Shapes disagree
    """
    opts = opts or SolverOptions()
    a, b = _check_system(a, b)
    started = time.perf_counter()
    q = a.shape[1]

    scale = float(np.linalg.norm(b))
    if scale == 0.0:
        return _trivial_report(q, started, SolverStatus.CONVERGED)
    unit_b = b / scale

    projector = AffineProjector(a)
    if not projector.consistent(unit_b):
        logger.debug("basis pursuit: right-hand side outside range(A)")
        return _trivial_report(q, started, SolverStatus.INFEASIBLE, residual=scale)

    threshold = 1.0 / opts.penalty
    x, _, iterations, split, dual, status = _run_admm(
        lambda v: projector.project(v, unit_b),
        lambda v: soft_threshold(v, threshold),
        (q,),
        opts,
    )
    solution = x * scale
    report = RecoveryReport(
        solution=solution,
        iterations=iterations,
        primal_residual=float(np.linalg.norm(a @ solution - b)),
        dual_residual=dual * scale,
        status=status,
        objective=float(np.sum(np.abs(solution))),
        wall_time=time.perf_counter() - started,
        split_residual=split * scale,
    )
    logger.debug(f"basis pursuit: {report.status.value} after {iterations} iterations")
    return report


def basis_pursuit_denoise(
    a: np.ndarray,
    b: np.ndarray,
    epsilon: float,
    opts: Optional[SolverOptions] = None,
) -> RecoveryReport:
    """min ||u||_1 subject to ||A u - b|| <= epsilon.

    Raises:
        ParameterError: epsilon < 0 or non-finite input
    """
    opts = opts or SolverOptions()
    epsilon = require_nonnegative(epsilon, "epsilon")
    a, b = _check_system(a, b)
    started = time.perf_counter()
    q = a.shape[1]

    scale = float(np.linalg.norm(b))
    if scale <= epsilon:
        return _trivial_report(q, started, SolverStatus.CONVERGED)

    try:
        projector = ResidualBallProjector(a, b / scale, epsilon / scale)
    except SolverError as exc:
        logger.warning(f"basis pursuit denoise: {exc.message}")
        return _trivial_report(q, started, SolverStatus.NUMERICAL_ERROR, residual=scale)
    if not projector.feasible:
        logger.debug("basis pursuit denoise: ball does not meet range(A)")
        return _trivial_report(q, started, SolverStatus.INFEASIBLE, residual=scale)

    threshold = 1.0 / opts.penalty
    try:
        x, _, iterations, split, dual, status = _run_admm(
            lambda v: projector.project(v)[0],
            lambda v: soft_threshold(v, threshold),
            (q,),
            opts,
        )
    except ProjectionNotConverged as exc:
        logger.warning(f"basis pursuit denoise: {exc.message}")
        return _trivial_report(q, started, SolverStatus.MAX_ITER, residual=scale)

    solution = x * scale
    violation = float(np.linalg.norm(a @ solution - b)) - epsilon
    return RecoveryReport(
        solution=solution,
        iterations=iterations,
        primal_residual=max(violation, 0.0),
        dual_residual=dual * scale,
        status=status,
        objective=float(np.sum(np.abs(solution))),
        wall_time=time.perf_counter() - started,
        split_residual=split * scale,
    )


def nuclear_min(
    system: LowRankSystem,
    opts: Optional[SolverOptions] = None,
    rhs: Optional[np.ndarray] = None,
) -> RecoveryReport:
    """min ||U||_* subject to forward(U) = rhs (e_1 unless given).

    The Gram matrix forward(adjoint(.)) of size (m+1)^2 is built and
    factored once. The returned solution is the singular-value-thresholded
    iterate, which carries the exact low rank of the minimizer.
    """
    opts = opts or SolverOptions()
    started = time.perf_counter()
    b = system.rhs if rhs is None else np.asarray(rhs, dtype=np.float64)
    if b.shape != (system.m + 1,):
        raise DimensionMismatchError("rhs length must equal m + 1", expected=system.m + 1, actual=b.shape)
    require_finite(b, "rhs")

    scale = float(np.linalg.norm(b))
    if scale == 0.0:
        return _trivial_report(system.shape, started, SolverStatus.CONVERGED)
    unit_b = b / scale

    factor = GramFactor(system.gram())
    if not factor.in_range(unit_b):
        logger.debug("nuclear min: right-hand side outside the range of the forward map")
        return _trivial_report(system.shape, started, SolverStatus.INFEASIBLE, residual=scale)

    def project(v: np.ndarray) -> np.ndarray:
        return v - system.adjoint(factor.solve(system.forward(v) - unit_b))

    threshold = 1.0 / opts.penalty
    try:
        _, z, iterations, split, dual, status = _run_admm(
            project,
            lambda v: singular_value_threshold(v, threshold),
            system.shape,
            opts,
        )
        solution = z * scale
        objective = nuclear_norm(solution)
    except SolverError as exc:
        logger.warning(f"nuclear min: {exc.message}")
        return _trivial_report(system.shape, started, SolverStatus.NUMERICAL_ERROR, residual=scale)

    return RecoveryReport(
        solution=solution,
        iterations=iterations,
        primal_residual=float(np.linalg.norm(system.forward(solution) - b)),
        dual_residual=dual * scale,
        status=status,
        objective=objective,
        wall_time=time.perf_counter() - started,
        split_residual=split * scale,
    )
