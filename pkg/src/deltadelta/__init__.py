"""Delta-delta (midpoint Nystrom) discretization of the finite Hilbert transform equation

    lambda u(x) - 1/(i pi) p.v. int_a^b u(y) / (y - x) dy = f(x),   a < x < b,

with exact solutions, error diagnostics, Toeplitz solvers and a convergence
study driver.
"""

__version__ = "0.1.0"

from .analysis import (
    ConvergenceStudy,
    ErrorReport,
    consistency_error,
    discrete_error,
    fit_rate,
    midpoint_defect,
    nystrom_reconstruct,
    pw_constant_L2_error,
    run_study,
    solve_example,
)
from .catalog import ExactCase, SpectralParameter, eval_Au, eval_f, eval_u, make_case
from .grid import Cell, Grid, build_grid, grid_from_N, interior_indices
from .solver import DiscreteSystem, SolveResult, check_stability, solve, solve_dense, solve_levinson
from .spectral import SpectralReport, rayleigh_scan, resolvent_probe
from .toeplitz import ToeplitzOperator, assemble, symbol
