"""Error diagnostics for the delta-delta scheme.

For an exact solution u with nodal restriction R u:

* consistency error  c = R(A u) - T R u  (midpoint-rule error of the
  principal-value integral, A u taken in closed form from the catalog);
* discrete error     E = R u - U, which satisfies (lambda I - T) E = c;
* piecewise-constant error  e = u - sum_k U_k chi_k  measured in L2(a, b).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from .catalog import ExactCase
from .errors import (
    ConsistencyCheckError,
    DegenerateDataError,
    DimensionError,
    DomainError,
    PoleProximityError,
    ValidationError,
)
from .grid import Grid, grid_from_N, interior_indices
from .solver import DiscreteSystem, SolveResult, check_stability, solve
from .toeplitz import assemble

NORM_KEYS = (
    "norm_c_l2",
    "norm_c_linf",
    "norm_E_l2",
    "norm_E_l2_interior",
    "norm_E_scaled",
    "norm_e_L2",
)
DEFAULT_INTERIOR = (0.0, 1.2)
RESIDUAL_TOL = 1e-10


def _check_case(g: Grid, case: ExactCase):
    if (case.a, case.b) != (g.a, g.b):
        raise ValidationError(
            f"example lives on ({case.a}, {case.b}) but the grid covers ({g.a}, {g.b})",
            field="interval",
        )


def midpoint_defect(g: Grid) -> np.ndarray:
    """s_j = int_a^b dy/(y - x_j) - sum_{k != j} h/(x_k - x_j).

    Terms k = j +- d cancel in pairs (h/(x_k - x_j) = 1/(k - j)), which
    leaves the unpaired tail d = j..M-j (or its mirror) against the
    logarithm.  The tail is a difference of suffix sums of 1/d accumulated
    from the small end.
    """
    M = g.M
    j = np.arange(1, M + 1)
    recip = 1.0 / np.arange(1, M + 1)
    # suffix[d] = sum_{e >= d} 1/e for d = 1..M, suffix[M+1] = 0
    suffix = np.zeros(M + 2)
    suffix[1 : M + 1] = np.cumsum(recip[::-1])[::-1]
    lo = np.minimum(j, M + 1 - j)
    hi = np.maximum(j, M + 1 - j)
    tail = suffix[lo] - suffix[hi]
    sign = np.where(j <= M + 1 - j, 1.0, -1.0)
    log_term = np.log((M - j + 0.5) / (j - 0.5))
    return log_term - sign * tail


def midpoint_defect_bound(g: Grid) -> np.ndarray:
    """(h^2/8) |1/(x_j - a)^2 - 1/(b - x_j)^2|."""
    left, right = g.gaps()
    return g.h**2 / 8.0 * np.abs(1.0 / left**2 - 1.0 / right**2)


def consistency_error(g: Grid, case: ExactCase) -> np.ndarray:
    _check_case(g, case)
    left, right = g.gaps()
    T = assemble(g.M)
    return case.Au_gaps(left, right) - T.matvec(case.u_gaps(left, right))


def solve_example(g: Grid, case: ExactCase, lam, method: str = "auto") -> SolveResult:
    """Solve the discrete system with F_m = f(x_m)."""
    _check_case(g, case)
    lam = check_stability(lam)
    F = case.f_gaps(lam, *g.gaps())
    return solve(DiscreteSystem(lam, assemble(g.M), F), method)


@dataclass
class ErrorReport:
    N: float
    M: int
    cN: np.ndarray = field(repr=False)
    EN: np.ndarray = field(repr=False)
    sN: np.ndarray = field(repr=False)
    norm_c_l2: float
    norm_c_linf: float
    norm_E_l2: float
    norm_E_l2_interior: float
    norm_E_scaled: float
    norm_e_L2: float
    residual_identity: float

    def norms(self) -> dict:
        return {k: getattr(self, k) for k in NORM_KEYS}


def discrete_error(
    g: Grid,
    case: ExactCase,
    lam,
    sol: SolveResult,
    interior=DEFAULT_INTERIOR,
    gauss: int = 8,
) -> ErrorReport:
    _check_case(g, case)
    lam = check_stability(lam)
    U = np.asarray(sol.U)
    if U.shape != (g.M,):
        raise DimensionError(f"solution has shape {U.shape}, grid has {g.M} nodes", field="U")
    left, right = g.gaps()
    Ru = case.u_gaps(left, right)
    c = consistency_error(g, case)
    E = Ru - U
    T = assemble(g.M)
    mismatch = np.linalg.norm(lam.lam * E - T.matvec(E) - c)
    cnorm = np.linalg.norm(c)
    if mismatch > RESIDUAL_TOL * (1.0 + cnorm):
        raise ConsistencyCheckError(
            f"(lambda I - T) E differs from c by {mismatch:.3e} (|c| = {cnorm:.3e}); "
            "sign convention or solver defect"
        )
    lo = max(interior[0], g.a)
    hi = min(interior[1], g.b)
    inner = interior_indices(g, lo, hi)
    Enorm = np.linalg.norm(E)
    return ErrorReport(
        N=g.scale,
        M=g.M,
        cN=c,
        EN=E,
        sN=midpoint_defect(g),
        norm_c_l2=float(cnorm),
        norm_c_linf=float(np.max(np.abs(c))),
        norm_E_l2=float(Enorm),
        norm_E_l2_interior=float(np.linalg.norm(E[inner])),
        norm_E_scaled=float(Enorm / math.sqrt(g.scale)),
        norm_e_L2=pw_constant_L2_error(g, case, U, gauss=gauss),
        residual_identity=float(mismatch / cnorm) if cnorm > 0 else float(mismatch),
    )


def pw_constant_L2_error(g: Grid, case: ExactCase, U, gauss: int = 8, depth: int = 40) -> float:
    """L2 norm of u - sum_k U_k chi_k.

    Interior cells use a ``gauss``-point Gauss-Legendre rule.  The two end
    cells are split geometrically (ratio 1/2, ``depth`` levels) toward a and
    b so that integrable endpoint singularities of |u|^2 are resolved;
    evaluation goes through the endpoint gaps, never through x itself.
    """
    _check_case(g, case)
    U = np.asarray(U, dtype=complex)
    if U.shape != (g.M,):
        raise DimensionError(f"U has shape {U.shape}, grid has {g.M} nodes", field="U")
    xi, w = leggauss(gauss)
    s, w = 0.5 * (xi + 1.0), 0.5 * w
    h, M = g.h, g.M

    # local coordinate s in (0, 1) across cell k: left gap (k + s) h
    k = np.arange(1, M - 1)[:, None]
    vals = case.u_gaps((k + s) * h, (M - k - s) * h) - U[1:-1, None]
    total = h * np.sum(np.abs(vals) ** 2 @ w)

    # pieces [2^-(j+1), 2^-j] for j < depth, then [0, 2^-depth]
    hi_edge = 0.5 ** np.arange(depth + 1)
    lo_edge = np.append(hi_edge[1:], 0.0)
    t = lo_edge[:, None] + (hi_edge - lo_edge)[:, None] * s
    tw = (hi_edge - lo_edge)[:, None] * w
    first = case.u_gaps(t * h, (M - t) * h) - U[0]
    last = case.u_gaps((M - t) * h, t * h) - U[-1]
    total += h * np.sum((np.abs(first) ** 2 + np.abs(last) ** 2) * tw)
    return float(math.sqrt(total))


def nystrom_reconstruct(g: Grid, lam, U, f_eval, x):
    """Evaluate u_N(x) = (f(x) + 1/(i pi) sum_n h U_n / (x_n - x)) / lambda."""
    lam = check_stability(lam)
    U = np.asarray(U, dtype=complex)
    if U.shape != (g.M,):
        raise DimensionError(f"U has shape {U.shape}, grid has {g.M} nodes", field="U")
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    if not np.all((x_arr > g.a) & (x_arr < g.b)):
        raise DomainError(f"evaluation points must lie in ({g.a}, {g.b})", field="x")
    diff = g.nodes[None, :] - x_arr[:, None]
    if np.min(np.abs(diff)) < 1e-12 * g.h:
        raise PoleProximityError("evaluation point coincides with a grid node", field="x")
    quad = (g.h / (1j * np.pi)) * np.sum(U[None, :] / diff, axis=1)
    out = (np.asarray(f_eval(x_arr), dtype=complex) + quad) / lam.lam
    return complex(out[0]) if np.ndim(x) == 0 else out


def loglog_slope(Ns, values) -> float:
    Ns = np.asarray(Ns, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(Ns) < 3:
        raise DegenerateDataError(f"need at least 3 points for a rate fit, got {len(Ns)}")
    if np.any(~np.isfinite(values)) or np.any(values <= 0):
        raise DegenerateDataError("rate fit needs strictly positive finite values")
    slope, _ = np.polyfit(np.log(Ns), np.log(values), 1)
    return float(slope)


@dataclass
class ConvergenceStudy:
    Ns: list
    reports: list
    slope_window: int
    slopes: dict = field(default_factory=dict)

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.Ns, self.Ns[1:])):
            raise ValidationError("Ns must be strictly increasing", field="Ns")
        if len(self.Ns) != len(self.reports):
            raise DimensionError("one report per N is required", field="reports")

    def column(self, key: str) -> np.ndarray:
        return np.array([getattr(r, key) for r in self.reports])


def fit_rate(study: ConvergenceStudy, norm_key: str) -> float:
    if norm_key not in NORM_KEYS:
        raise ValidationError(f"unknown norm {norm_key!r}", field="norm_key")
    w = study.slope_window
    if w < 3 or w > len(study.Ns):
        raise DegenerateDataError(f"slope window {w} needs 3..{len(study.Ns)} points")
    return loglog_slope(study.Ns[-w:], study.column(norm_key)[-w:])


def run_study(
    case: ExactCase,
    lam,
    Ns,
    method: str = "auto",
    interior=DEFAULT_INTERIOR,
    slope_window: int | None = None,
) -> ConvergenceStudy:
    """Solve and diagnose on grid_from_N(a, b, N) for each N.

    By default the first (pre-asymptotic) N is left out of the rate fits.
    """
    lam = check_stability(lam)
    Ns = [int(n) for n in Ns]
    reports = []
    for N in Ns:
        g = grid_from_N(case.a, case.b, N)
        sol = solve_example(g, case, lam, method)
        reports.append(discrete_error(g, case, lam, sol, interior))
    if slope_window is None:
        slope_window = len(Ns) - 1
    study = ConvergenceStudy(Ns, reports, slope_window)
    if 3 <= slope_window <= len(Ns):
        study.slopes = {k: fit_rate(study, k) for k in NORM_KEYS}
    return study
