"""Command-line driver: ``deltadelta {solve,study,spectrum,selftest}``.

Outputs are plain CSV (comma separated, header row, no quoting, floats in
17-significant-digit scientific notation) and JSON (shortest round-trip
floats).  Nothing time- or host-dependent is written, so identical
configurations give byte-identical files.

Exit codes: 0 success, 2 validation error, 3 numerical error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import NORM_KEYS, discrete_error, midpoint_defect, run_study, solve_example
from .catalog import KINDS, make_case
from .errors import NumericalError, ValidationError
from .grid import grid_from_N
from .solver import check_stability
from .spectral import rayleigh_scan, resolvent_probe
from .toeplitz import assemble

SCHEMA_VERSION = 1
PROFILE_COLUMNS = ["m", "x", "u_re", "u_im", "f_re", "f_im", "U_re", "U_im", "c_abs", "E_abs", "s"]
STUDY_COLUMNS = ["N", "M"] + list(NORM_KEYS)
DEFAULT_NS = [10 * 3**j for j in range(5)]
LARGE_NS = [10 * 3**j for j in range(7)]

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4

log = logging.getLogger("deltadelta")


def fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.16e}"


@dataclass
class StudyConfig:
    a: float = -0.15
    b: float = 1.35
    lam: complex = 2.0
    example: str = "const"
    alpha: float = 0.25
    Ns: list = field(default_factory=lambda: list(DEFAULT_NS))
    interior: tuple = (0.0, 1.2)
    outputs: str = "."
    format: str = "both"
    seed: int = 0
    solver: str = "auto"

    def __post_init__(self):
        if not self.Ns:
            raise ValidationError("Ns must not be empty", field="Ns")
        if any(n2 <= n1 for n1, n2 in zip(self.Ns, self.Ns[1:])):
            raise ValidationError(f"Ns must be strictly increasing, got {self.Ns}", field="Ns")
        if self.format not in ("csv", "json", "both"):
            raise ValidationError(f"format must be csv, json or both, got {self.format!r}", field="format")
        if self.solver not in ("auto", "dense", "levinson"):
            raise ValidationError(f"unknown solver {self.solver!r}", field="solver")
        lo, hi = self.interior
        if not (self.a <= lo < hi <= self.b):
            raise ValidationError(f"interior ({lo}, {hi}) must lie inside [{self.a}, {self.b}]", field="interior")
        self.lam = check_stability(self.lam).lam
        for N in self.Ns:
            grid_from_N(self.a, self.b, N)
        self.case = make_case(self.example, self.a, self.b, self.alpha)

    def echo(self) -> dict:
        d = {k: v for k, v in asdict(self).items() if k not in ("lam", "outputs")}
        d["interior"] = list(self.interior)
        d["lambda"] = [self.lam.real, self.lam.imag]
        return d

    @property
    def wants_csv(self) -> bool:
        return self.format in ("csv", "both")

    @property
    def wants_json(self) -> bool:
        return self.format in ("json", "both")


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_NONE)
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def profile_rows(cfg: StudyConfig, N: int):
    g = grid_from_N(cfg.a, cfg.b, N)
    case = cfg.case
    sol = solve_example(g, case, cfg.lam, cfg.solver)
    report = discrete_error(g, case, cfg.lam, sol, cfg.interior)
    u = case.u(g.nodes)
    f = case.f(cfg.lam, g.nodes)
    s = midpoint_defect(g)
    rows = []
    for i in range(g.M):
        rows.append([
            i + 1, g.nodes[i], u[i].real, u[i].imag, f[i].real, f[i].imag,
            sol.U[i].real, sol.U[i].imag, abs(report.cN[i]), abs(report.EN[i]), s[i],
        ])
    return rows, report


def study_payload(cfg: StudyConfig) -> dict:
    study = run_study(cfg.case, cfg.lam, cfg.Ns, cfg.solver, cfg.interior)
    rows = [[N, r.M] + [getattr(r, k) for k in NORM_KEYS] for N, r in zip(cfg.Ns, study.reports)]
    return {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "config": cfg.echo(),
        "columns": STUDY_COLUMNS,
        "rows": [[int(row[0]), int(row[1])] + [float(v) for v in row[2:]] for row in rows],
        "slope_window": study.slope_window,
        "slopes": study.slopes,
    }


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    log.info("wrote %s", path)


def cmd_solve(cfg: StudyConfig) -> list:
    written = []
    out = Path(cfg.outputs)
    for N in cfg.Ns:
        rows, report = profile_rows(cfg, N)
        if cfg.wants_csv:
            path = out / f"profile_N{N}.csv"
            _write(path, _csv_text(PROFILE_COLUMNS, rows))
            written.append(path)
        if cfg.wants_json:
            path = out / f"profile_N{N}.json"
            payload = {
                "schema_version": SCHEMA_VERSION,
                "version": __version__,
                "config": {**cfg.echo(), "Ns": [N]},
                "columns": PROFILE_COLUMNS,
                "rows": [[int(r[0])] + [float(v) for v in r[1:]] for r in rows],
                "norms": report.norms(),
            }
            _write(path, _json_text(payload))
            written.append(path)
    return written


def cmd_study(cfg: StudyConfig) -> list:
    payload = study_payload(cfg)
    out = Path(cfg.outputs)
    written = []
    if cfg.wants_csv:
        written.append(out / "study.csv")
        _write(written[-1], _csv_text(STUDY_COLUMNS, payload["rows"]))
    if cfg.wants_json:
        written.append(out / "study.json")
        _write(written[-1], _json_text(payload))
    for key, slope in payload["slopes"].items():
        print(f"slope {key:<20} {slope:+.4f}")
    return written


def cmd_spectrum(M: int, samples: int, lambdas, seed: int, outputs: str, trials: int = 200) -> Path:
    T = assemble(M)
    report = rayleigh_scan(T, samples, seed)
    if lambdas:
        report.resolvent_samples = resolvent_probe(T, lambdas, trials, seed).resolvent_samples
    payload = {"schema_version": SCHEMA_VERSION, "version": __version__, "seed": seed, "trials": trials}
    payload.update(report.to_dict())
    path = Path(outputs) / f"spectrum_M{M}.json"
    _write(path, _json_text(payload))
    return path


def cmd_selftest() -> int:
    from .selftest import run

    return EXIT_OK if run() else 1


def parse_complex(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected 're,im' or 're', got {text!r}")


def parse_int_list(text: str) -> list:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


def parse_pair(text: str) -> tuple:
    try:
        lo, hi = (float(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'lo,hi', got {text!r}")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deltadelta",
        description="Delta-delta discretization of the finite Hilbert transform equation.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def problem_flags(p):
        p.add_argument("--a", type=float, default=-0.15)
        p.add_argument("--b", type=float, default=1.35)
        p.add_argument("--lambda", dest="lam", type=parse_complex, default=complex(2.0),
                       help="spectral parameter as re,im (use --lambda=-1.5,0 for negatives)")
        p.add_argument("--example", choices=KINDS, default="const")
        p.add_argument("--alpha", type=float, default=0.25)
        p.add_argument("--interior", type=parse_pair, default=(0.0, 1.2), metavar="LO,HI")
        p.add_argument("--out", default=".", metavar="DIR")
        p.add_argument("--format", choices=("csv", "json", "both"), default="both")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--solver", choices=("auto", "dense", "levinson"), default="auto")

    p = sub.add_parser("solve", help="nodal profile for one or more N")
    problem_flags(p)
    p.add_argument("--N", type=int, default=10)
    p.add_argument("--Ns", type=parse_int_list, default=None, help="comma list, overrides --N")

    p = sub.add_parser("study", help="error norms and fitted rates over a sequence of N")
    problem_flags(p)
    p.add_argument("--Ns", type=parse_int_list, default=None)
    p.add_argument("--large", action="store_true", help="N = 10*3^j up to j = 6")

    p = sub.add_parser("spectrum", help="numerical range and resolvent samples of T_M")
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--lambda", dest="lams", type=parse_complex, action="append", default=[])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".", metavar="DIR")

    sub.add_parser("selftest", help="fast invariant checks, exit 0 iff all pass")
    return parser


def _config(args, Ns) -> StudyConfig:
    return StudyConfig(
        a=args.a, b=args.b, lam=args.lam, example=args.example, alpha=args.alpha, Ns=Ns,
        interior=args.interior, outputs=args.out, format=args.format, seed=args.seed,
        solver=args.solver,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command == "solve":
            cmd_solve(_config(args, args.Ns or [args.N]))
        elif args.command == "study":
            Ns = args.Ns or (LARGE_NS if args.large else DEFAULT_NS)
            cmd_study(_config(args, Ns))
        elif args.command == "spectrum":
            if args.M < 1 or args.samples < 1 or args.trials < 1:
                raise ValidationError("M, samples and trials must be positive", field="M")
            cmd_spectrum(args.M, args.samples, args.lams, args.seed, args.out, args.trials)
        elif args.command == "selftest":
            return cmd_selftest()
    except (ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NumericalError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
