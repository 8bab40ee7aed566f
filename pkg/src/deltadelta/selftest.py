"""Fast invariant checks (all sections M <= 405) behind ``deltadelta selftest``.

Where it matters the checks recompute quantities from the raw kernel
formula instead of going through ``toeplitz.assemble``, so a corrupted
operator is caught rather than silently reproduced on both sides.
"""

from __future__ import annotations

import time

import numpy as np
from scipy import integrate

from . import analysis, catalog, grid, solver, spectral, toeplitz

A, B = -0.15, 1.35


def _explicit_apply(g, lam, v):
    """lambda v_m - 1/(i pi) sum_{n != m} h v_n / (x_n - x_m), straight from the formula."""
    d = g.nodes[None, :] - g.nodes[:, None]
    np.fill_diagonal(d, np.inf)
    return lam * v - (g.h / (1j * np.pi)) * np.sum(v[None, :] / d, axis=1)


def check_grid():
    for M in (2, 15, 45, 405):
        g = grid.build_grid(A, B, M)
        sym = np.max(np.abs(g.nodes + g.nodes[::-1] - (A + B)))
        if sym > 4 * np.spacing(B) or abs(g.nodes[0] - A - g.h / 2) > 4 * np.spacing(B):
            return False, f"M={M}: symmetry defect {sym:.2e}"
    return True, "symmetric midpoint meshes"


def check_catalog_pv():
    rng = np.random.default_rng(7)
    worst = 0.0
    for kind in ("const", "bump"):
        case = catalog.make_case(kind, A, B)
        for x in rng.uniform(A + 0.01, B - 0.01, 10):
            # quad touches the endpoints; gaps are clamped there
            density = lambda y: case.u_gaps(max(y - A, 0.0), max(B - y, 0.0)).real
            pv, _ = integrate.quad(density, A, B, weight="cauchy", wvar=x, epsabs=1e-13, epsrel=1e-12, limit=400)
            ref = pv / (1j * np.pi)
            worst = max(worst, abs(ref - case.Au(x)) / max(abs(ref), 1e-300))
    return worst <= 1e-8, f"max rel deviation from p.v. quadrature {worst:.1e}"


def check_fft_matvec():
    rng = np.random.default_rng(1)
    worst = 0.0
    for M in (2, 17, 256):
        T = toeplitz.assemble(M)
        v = rng.standard_normal(M) + 1j * rng.standard_normal(M)
        d = T.matvec_direct(v)
        worst = max(worst, np.linalg.norm(T.matvec_fft(v) - d) / np.linalg.norm(d))
    return worst <= 1e-11, f"max rel deviation {worst:.1e}"


def check_structure():
    for M in (2, 15, 135):
        D = toeplitz.assemble(M).dense()
        if np.any(D != -D[::-1, ::-1]) or np.any(D != D.conj().T) or np.any(np.diag(D) != 0):
            return False, f"M={M}: Hermitian/skew-persymmetric structure broken"
    return True, "Hermitian, zero diagonal, J T J = -T"


def check_rayleigh():
    worst = 0.0
    for M in (2, 15, 135):
        r = spectral.rayleigh_scan(toeplitz.assemble(M), 2000, seed=0)
        worst = max(worst, -1 - r.rayleigh_min, r.rayleigh_max - 1)
        if r.max_imag_rayleigh > 1e-10:
            return False, f"M={M}: imaginary Rayleigh part {r.max_imag_rayleigh:.1e}"
    return worst <= 1e-10, "sampled W(T) inside [-1, 1]"


def check_resolvent():
    worst = 0.0
    for M in (15, 45, 135):
        r = spectral.resolvent_probe(toeplitz.assemble(M), [2, 1j, -1.5, 1 + 1j, 0.5 + 0.1j], 50, seed=3)
        worst = max(worst, max(ratio for _, ratio in r.resolvent_samples))
    return worst <= 1 + 1e-8, f"max ||U|| dist / ||F|| = {worst:.4f}"


def check_levinson():
    rng = np.random.default_rng(2)
    worst = 0.0
    for M in (15, 135, 405):
        F = rng.standard_normal((M, 4)) + 1j * rng.standard_normal((M, 4))
        for lam in (2, 1j, 1 + 1j):
            system = solver.DiscreteSystem(lam, toeplitz.assemble(M), F)
            d = solver.solve_dense(system).U
            lv = solver.solve_levinson(system).U
            worst = max(worst, np.linalg.norm(lv - d) / np.linalg.norm(d))
    return worst <= 1e-8, f"max rel deviation {worst:.1e}"


def check_midpoint_lemma():
    for M in (15, 45, 135, 405):
        g = grid.build_grid(A, B, M)
        s = analysis.midpoint_defect(g)
        if np.any(np.abs(s) > analysis.midpoint_defect_bound(g) + 1e-14):
            return False, f"M={M}: bound violated"
        if np.max(np.abs(s + s[::-1])) > 1e-12:
            return False, f"M={M}: antisymmetry violated"
        mid = (A + B) / 2
        if np.any(s[g.nodes < mid - g.h / 4] <= 0) or np.any(s[g.nodes > mid + g.h / 4] >= 0):
            return False, f"M={M}: sign pattern violated"
    return True, "bound, signs, antisymmetry"


def check_const_consistency():
    worst = 0.0
    for N in (10, 30, 90):
        g = grid.grid_from_N(A, B, N)
        c = analysis.consistency_error(g, catalog.make_case("const", A, B))
        worst = max(worst, np.max(np.abs(1j * np.pi * c - analysis.midpoint_defect(g))))
    return worst <= 1e-12, f"max |i pi c - s| = {worst:.1e}"


def check_residual_identity():
    worst = 0.0
    for kind in ("const", "bump", "power"):
        case = catalog.make_case(kind, A, B)
        for N in (10, 30, 90, 270):
            g = grid.grid_from_N(A, B, N)
            u = case.u(g.nodes)
            # _explicit_apply with lambda = 0 gives -T u
            c = case.Au(g.nodes) + _explicit_apply(g, 0.0, u)
            sol = analysis.solve_example(g, case, 2.0)
            E = u - sol.U
            worst = max(worst, np.linalg.norm(_explicit_apply(g, 2.0, E) - c) / np.linalg.norm(c))
    return worst <= 1e-10, f"max ||(lambda - T)E - c|| / ||c|| = {worst:.1e}"


def check_symbol():
    worst = 0.0
    for tau in (np.pi / 2, -np.pi / 2, 1.0, -1.0):
        partial, closed = toeplitz.symbol(tau, 10**5)
        worst = max(worst, abs(partial - closed))
    return worst <= 1e-4, f"max |partial - closed| = {worst:.1e}"


def check_determinism():
    from .cli import StudyConfig, _json_text, study_payload

    cfg = StudyConfig(Ns=[10, 30, 90], example="bump")
    first = _json_text(study_payload(cfg))
    second = _json_text(study_payload(cfg))
    return first == second, "repeated study output identical"


CHECKS = [
    ("grid symmetry", check_grid),
    ("catalog vs p.v. quadrature", check_catalog_pv),
    ("fft matvec", check_fft_matvec),
    ("operator structure", check_structure),
    ("numerical range", check_rayleigh),
    ("resolvent bound", check_resolvent),
    ("levinson vs dense", check_levinson),
    ("midpoint defect lemma", check_midpoint_lemma),
    ("const consistency = defect", check_const_consistency),
    ("error equation", check_residual_identity),
    ("symbol partial sums", check_symbol),
    ("determinism", check_determinism),
]


def run(stream=None) -> bool:
    """Run every check, print one line each, return True iff all pass."""
    import sys

    stream = stream or sys.stdout
    ok_all = True
    for name, check in CHECKS:
        start = time.perf_counter()
        try:
            ok, detail = check()
        except Exception as exc:  # a crash is a failed check, keep going
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        ok_all &= bool(ok)
        elapsed = time.perf_counter() - start
        print(f"{'PASS' if ok else 'FAIL'}  {name:<28} {elapsed:6.2f}s  {detail}", file=stream)
    return ok_all
