"""Solvers for the discrete system (lambda I - T) U = F.

Two routes are provided:

* ``solve_dense``: partial-pivot LU of the materialized matrix, O(M^3).  Used
  as the reference.
* ``solve_levinson``: the general (non-symmetric) Levinson recursion for
  Toeplitz matrices, O(M^2) with O(M) memory, followed by iterative
  refinement against an FFT residual when needed.

Every leading section of T has its numerical range in [-1, 1], so for lambda
off that segment all leading sections of lambda I - T are invertible and the
recursion cannot break down in exact arithmetic.

Both solvers accept a single right-hand side or a stack of them as columns.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .catalog import SpectralParameter
from .errors import DimensionError, NumericalError, NumericalSingularityError
from .toeplitz import ToeplitzOperator

log = logging.getLogger(__name__)

ACCEPT_RESIDUAL = 1e-8
REFINE_TRIGGER = 1e-9
MAX_REFINEMENTS = 2
BREAKDOWN = 1e-14
LEVINSON_THRESHOLD = 512


def check_stability(lam) -> SpectralParameter:
    """Validate lambda; raises UnstableParameterError within 1e-12 of [-1, 1]."""
    if isinstance(lam, SpectralParameter):
        return lam
    return SpectralParameter(lam)


@dataclass(frozen=True)
class DiscreteSystem:
    lam: SpectralParameter
    op: ToeplitzOperator
    rhs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lam", check_stability(self.lam))
        rhs = np.asarray(self.rhs, dtype=complex)
        if rhs.ndim not in (1, 2) or rhs.shape[0] != self.op.M:
            raise DimensionError(
                f"right-hand side has shape {rhs.shape}, operator has size {self.op.M}",
                field="rhs",
            )
        object.__setattr__(self, "rhs", rhs)

    def apply(self, U) -> np.ndarray:
        """(lambda I - T) U."""
        return self.lam.lam * U - self.op.matvec(U)

    def residual(self, U) -> np.ndarray:
        return self.apply(U) - self.rhs


@dataclass
class SolveResult:
    U: np.ndarray
    method: str
    residual_rel: float
    bound_ratio: float
    refinements: int = 0
    fell_back: bool = False
    near_spectrum: bool = False
    warnings: list = field(default_factory=list)


def _column_norms(v) -> np.ndarray:
    return np.linalg.norm(v, axis=0)


def _finish(system: DiscreteSystem, U, method, **extra) -> SolveResult:
    fnorm = _column_norms(system.rhs)
    fnorm = np.where(fnorm > 0, fnorm, 1.0)
    res = _column_norms(system.residual(U)) / fnorm
    ratio = _column_norms(U) * system.lam.dist_to_C / fnorm
    result = SolveResult(
        U=U,
        method=method,
        residual_rel=float(np.max(res)),
        bound_ratio=float(np.max(ratio)),
        near_spectrum=system.lam.near_spectrum,
        **extra,
    )
    if result.near_spectrum:
        result.warnings.append(f"lambda within {system.lam.dist_to_C:.1e} of [-1, 1]")
    limit = ACCEPT_RESIDUAL / min(1.0, system.lam.dist_to_C)
    if not result.residual_rel <= limit:
        raise NumericalError(
            f"{method} solve residual {result.residual_rel:.3e} exceeds {limit:.1e}"
        )
    return result


def solve_dense(system: DiscreteSystem) -> SolveResult:
    A = system.lam.lam * np.eye(system.op.M) - system.op.dense()
    with warnings.catch_warnings():
        # singular pivots are reported below with their magnitude
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    pivots = np.abs(np.diag(lu))
    scale = np.max(np.abs(A))
    if pivots.min() <= 1e-14 * scale:
        raise NumericalSingularityError(float(pivots.min()))
    U = scipy.linalg.lu_solve((lu, piv), system.rhs, check_finite=False)
    return _finish(system, U, "dense")


class _Breakdown(Exception):
    pass


def _levinson(col, row, y) -> np.ndarray:
    """Solve the Toeplitz system with A[i, j] = col[i-j] (i >= j), row[j-i] (j >= i).

    For the leading n x n section, f solves A_n f = e_first and b solves
    A_n b = e_last; both grow by one entry per step and b drives the update
    of the solution.
    """
    M = col.shape[0]
    y2 = y.reshape(M, -1)
    f = np.zeros(M, dtype=complex)
    b = np.zeros(M, dtype=complex)
    x = np.zeros(y2.shape, dtype=complex)
    if col[0] == 0:
        raise _Breakdown(0.0)
    f[0] = b[0] = 1.0 / col[0]
    x[0] = y2[0] / col[0]
    for n in range(1, M):
        lower = col[n:0:-1]  # A[n, 0:n]
        upper = row[1 : n + 1]  # A[0, 1:n+1]
        ef = lower @ f[:n]
        eb = upper @ b[:n]
        denom = 1.0 - ef * eb
        if abs(denom) < BREAKDOWN:
            raise _Breakdown(abs(denom))
        f_old = f[:n].copy()
        # f <- ([f; 0] - ef [0; b]) / denom,  b <- ([0; b] - eb [f; 0]) / denom
        f[n] = -ef * b[n - 1]
        f[1:n] -= ef * b[: n - 1]
        f[: n + 1] /= denom
        b[1 : n + 1] = b[:n]
        b[0] = 0.0
        b[:n] -= eb * f_old
        b[: n + 1] /= denom
        ex = lower @ x[:n]
        x[: n + 1] += np.outer(b[: n + 1], y2[n] - ex)
    return x.reshape(y.shape)


def solve_levinson(system: DiscreteSystem) -> SolveResult:
    lam = system.lam.lam
    col = -np.asarray(system.op.first_col, dtype=complex)
    row = -np.asarray(system.op.first_row, dtype=complex)
    col[0] += lam
    row[0] += lam
    try:
        U = _levinson(col, row, system.rhs)
        refinements = 0
        fnorm = np.where(_column_norms(system.rhs) > 0, _column_norms(system.rhs), 1.0)
        for _ in range(MAX_REFINEMENTS):
            r = system.rhs - (lam * U - system.op.matvec_fft(U))
            if np.max(_column_norms(r) / fnorm) <= REFINE_TRIGGER:
                break
            U = U + _levinson(col, row, r)
            refinements += 1
    except _Breakdown as exc:
        log.warning("Levinson recursion broke down (|denominator| %.2e); using dense LU", exc.args[0])
        result = solve_dense(system)
        result.fell_back = True
        result.warnings.append("levinson breakdown, dense fallback")
        return result
    return _finish(system, U, "levinson", refinements=refinements)


def solve(system: DiscreteSystem, method: str = "auto") -> SolveResult:
    if method == "auto":
        method = "levinson" if system.op.M > LEVINSON_THRESHOLD else "dense"
    if method == "dense":
        return solve_dense(system)
    if method == "levinson":
        return solve_levinson(system)
    raise ValueError(f"unknown solver {method!r}")
