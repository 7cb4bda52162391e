"""Command-line entry point: ``verify``, ``potential`` and ``bounds``.

Exit codes: 0 when every check passes, 1 when any check fails, 2 for usage
or I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import List, Optional, Sequence

import numpy as np

from . import __version__
from .bounds import rows_to_csv, rows_to_json, tabulate
from .constants import Params, in_lower_window
from .errors import RieszWeakError
from .heat import COMPARISON_COLUMNS, asymptotic_comparison
from .radial import RadialProfile, fractional_maximal, riesz_potential
from .report import VerificationReport
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad flags, parameters or input files; maps to exit code 2."""


def _params(ns: Sequence[int], ss: Sequence[float]) -> List[Params]:
    if len(ns) != len(ss) and 1 not in (len(ns), len(ss)):
        raise UsageError("--n and --s need matching lengths (or one of them a single value)")
    count = max(len(ns), len(ss))
    ns = list(ns) * count if len(ns) == 1 else list(ns)
    ss = list(ss) * count if len(ss) == 1 else list(ss)
    try:
        return [Params(n, s) for n, s in zip(ns, ss)]
    except RieszWeakError as exc:
        raise UsageError(str(exc)) from None


def _write(text: str, out: Optional[str]):
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from None


# verify -------------------------------------------------------------------------
def cmd_verify(params: List[Params], suites: List[str], *, jobs=1, tol_scale=1.0) -> VerificationReport:
    """Run ``suites`` at every parameter pair; ids are prefixed when several pairs run."""
    tasks = [(name, p) for p in params for name in suites]
    if jobs > 1 and len(tasks) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(run_suite, name, p.n, p.s, tol_scale) for name, p in tasks]
            results = [f.result() for f in futures]
    else:
        results = [run_suite(name, p.n, p.s, tol_scale) for name, p in tasks]
    report = VerificationReport(params=[{"n": p.n, "s": p.s} for p in params])
    for (name, p), checks in zip(tasks, results):
        if len(params) > 1:
            for c in checks:
                c.id = f"n{p.n}_s{p.s:g}.{c.id}"
        report.extend(checks)
    return report


def _run_verify(args) -> int:
    params = _params(args.n, args.s)
    suites = args.suite or list(SUITES)
    if args.tol_scale <= 0:
        raise UsageError("--tol-scale must be positive")
    report = cmd_verify(params, suites, jobs=args.jobs, tol_scale=args.tol_scale)
    _write(report.to_json() + "\n", args.out)
    summary = report.summary()
    print(f"{summary['pass']} pass, {summary['fail']} fail, {summary['flagged']} flagged",
          file=sys.stderr)
    return report.exit_code()


# potential ----------------------------------------------------------------------
def load_profile(path: str) -> RadialProfile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read profile {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None
    if not isinstance(data, dict):
        raise UsageError(f"{path}:1: profile must be a JSON object")
    try:
        return RadialProfile.from_dict(data)
    except (RieszWeakError, TypeError, ValueError, KeyError) as exc:
        raise UsageError(f"{path}: invalid profile: {exc}") from None


def _radii(text: str) -> np.ndarray:
    parts = [t for t in text.replace(",", " ").split() if t]
    try:
        radii = np.array([float(t) for t in parts])
    except ValueError:
        raise UsageError(f"--radii must be numbers, got {text!r}") from None
    if np.any(radii < 0) or not np.all(np.isfinite(radii)):
        raise UsageError("--radii must be finite and non-negative")
    return radii


def cmd_potential(f: RadialProfile, p: Params, radii) -> str:
    """CSV with columns ``rho, riesz, maximal``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["rho", "riesz", "maximal"])
    for rho in radii:
        writer.writerow([repr(float(rho)), repr(riesz_potential(f, p, rho)),
                         repr(fractional_maximal(f, p, rho))])
    return buf.getvalue()


def _run_potential(args) -> int:
    p = _params([args.n], [args.s])[0]
    f = load_profile(args.profile)
    try:
        f.validate_for(p.n)
    except RieszWeakError as exc:
        raise UsageError(str(exc)) from None
    _write(cmd_potential(f, p, _radii(args.radii)), args.out)
    return EXIT_OK


# bounds -------------------------------------------------------------------------
def cmd_bounds(n: int, s_grid, *, fmt="csv", witness=False, jobs=1) -> str:
    rows = tabulate(n, s_grid, witness=witness, jobs=jobs)
    return rows_to_csv(rows) if fmt == "csv" else rows_to_json(rows) + "\n"


def tau_table(n_grid, s_grid) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COMPARISON_COLUMNS)
    for row in asymptotic_comparison(n_grid, s_grid):
        writer.writerow([row.n] + [repr(float(getattr(row, k))) for k in COMPARISON_COLUMNS[1:]])
    return buf.getvalue()


def _run_bounds(args) -> int:
    if args.steps < 1:
        raise UsageError("--steps must be at least 1")
    if not 0 < args.s_min <= args.s_max < args.n:
        raise UsageError("need 0 < s-min <= s-max < n")
    if args.steps == 1:
        grid = np.array([args.s_min])
    elif args.s_min > 0 and args.s_max / args.s_min > 10:
        grid = np.geomspace(args.s_min, args.s_max, args.steps)
    else:
        grid = np.linspace(args.s_min, args.s_max, args.steps)
    if not any(in_lower_window(args.n, s) for s in grid):
        print(f"warning: no s in the grid lies in the lower-bound window n > 2, 0 < s < (n-2)/4; "
              "the lower column is empty", file=sys.stderr)
    _write(cmd_bounds(args.n, grid, fmt=args.format, witness=args.witness, jobs=args.jobs),
           args.out)
    if args.tau_out:
        _write(tau_table([args.n], grid), args.tau_out)
    return EXIT_OK


# parser -------------------------------------------------------------------------
class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rieszweak", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run verification suites and write a JSON report")
    v.add_argument("--n", type=int, nargs="+", required=True, help="dimension(s)")
    v.add_argument("--s", type=float, nargs="+", required=True, help="order(s)")
    v.add_argument("--suite", nargs="+", choices=list(SUITES), help="suites (default: all)")
    v.add_argument("--out", help="report path (default: stdout)")
    v.add_argument("--jobs", type=int, default=1, help="parallel suite workers")
    v.add_argument("--tol-scale", type=float, default=1.0, help="multiplies every tolerance")
    v.set_defaults(run=_run_verify)

    pot = sub.add_parser("potential", help="tabulate I_s f and M_s f for a profile file")
    pot.add_argument("--profile", required=True, help="JSON profile file")
    pot.add_argument("--n", type=int, required=True)
    pot.add_argument("--s", type=float, required=True)
    pot.add_argument("--radii", default="", help="comma or space separated radii")
    pot.add_argument("--out", help="CSV path (default: stdout)")
    pot.set_defaults(run=_run_potential)

    b = sub.add_parser("bounds", help="tabulate lower/upper bounds on the best constant")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--s-min", type=float, required=True)
    b.add_argument("--s-max", type=float, required=True)
    b.add_argument("--steps", type=int, default=25)
    b.add_argument("--format", choices=("csv", "json"), default="csv")
    b.add_argument("--witness", action="store_true",
                   help="also measure the level-set witness per row (slow)")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--out", help="table path (default: stdout)")
    b.add_argument("--tau-out", help="also write the tau comparison CSV here")
    b.set_defaults(run=_run_bounds)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except UsageError as exc:
        print(f"rieszweak: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
