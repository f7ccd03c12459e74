"""Command-line front end.

Subcommands
-----------
geometry   free-boundary scalars (W, H, L, R) over a dimension range
eig        Steklov eigenvalues over dimension/mode ranges
index      mode counts, Steklov and Morse indices, certification flags
asym       computed-vs-predicted deviation reports (figure data), with a
           rendered PNG next to the delimited output
spheres    Morse indices of minimal sphere products
selftest   quick end-to-end verification against built-in reference values

Every data file written with --out is paired with a ``*.manifest.json``
recording the command, parameter ranges, tolerances, version and wall time;
the data files themselves carry no wall-clock content, so identical
commands yield byte-identical output.  Exit codes: 0 fine, 2 a row failed
to solve, 3 an index row was left uncertified under --strict.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from catenoid import __version__, asymptotics, geometry, index, spectrum, spheres
from catenoid.kernels import SolverConfig
from catenoid.spectrum import Parity

EXIT_OK = 0
EXIT_SOLVER_FAILURE = 2
EXIT_UNCERTIFIED = 3

# Base tolerance: the ODE relative tolerance; the absolute ODE tolerance
# and the quadrature/root tolerances hang off it by fixed factors (see
# geometry.solve_geometry).  CATENOID_TOL overrides the default, --tol
# overrides both.
DEFAULT_TOL = 1e-12
MAX_DIMENSION = 100_000


class CliError(Exception):
    """Bad command-line arguments."""


def _base_tol(args) -> float:
    if args.tol is not None:
        value = args.tol
    else:
        env = os.environ.get("CATENOID_TOL")
        value = float(env) if env else DEFAULT_TOL
    if not 0.0 < value < 1.0:
        raise CliError(f"tolerance must lie in (0, 1), got {value}")
    return value


def _config_from_tol(tol: float) -> SolverConfig:
    return SolverConfig(rel_tol=tol, abs_tol=tol * 1e-2)


def parse_range(spec: str, lo_limit: int, hi_limit: int) -> tuple[int, int]:
    """Parse 'A..B' or a single integer 'A' into an inclusive range."""
    try:
        if ".." in spec:
            lo_s, hi_s = spec.split("..", 1)
            lo, hi = int(lo_s), int(hi_s)
        else:
            lo = hi = int(spec)
    except ValueError:
        raise CliError(f"cannot parse range {spec!r} (use 'A' or 'A..B')") from None
    if lo > hi:
        raise CliError(f"empty range {spec!r}")
    if lo < lo_limit or hi > hi_limit:
        raise CliError(f"range {spec!r} escapes [{lo_limit}, {hi_limit}]")
    return lo, hi


# =============================================================================
# OUTPUT: CSV/JSON FORMATTING, MANIFESTS
# =============================================================================

def _fmt_float(value, table5: bool) -> str:
    if value is None:
        return ""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if table5:
        return f"{value:.5f}"  # IEEE round-half-even at the 5th decimal
    return f"{value:.10g}"


def _fmt_cell(value, table5: bool) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return _fmt_float(value, table5)
    return str(value)


def _json_cell(value):
    if isinstance(value, float) and math.isinf(value):
        return None  # paired with a *_finite flag column
    return value


def render_rows(rows: list[dict], columns: list[str], fmt: str,
                table5: bool) -> str:
    """Serialize rows to CSV or JSON text (deterministic)."""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt_cell(row.get(col), table5) for col in columns])
        return buf.getvalue()
    if fmt == "json":
        records = []
        for row in rows:
            record = {}
            for col in columns:
                value = row.get(col)
                record[col] = _json_cell(value)
                if isinstance(value, float) and math.isinf(value):
                    record[f"{col}_finite"] = False
            records.append(record)
        return json.dumps(records, indent=2) + "\n"
    raise CliError(f"unknown format {fmt!r}")


def write_output(text: str, out: str | None) -> Path | None:
    if out is None:
        sys.stdout.write(text)
        return None
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def write_manifest(data_path: Path | None, command: str, params: dict,
                   tol: float, wall_time: float, flags: dict) -> None:
    if data_path is None:
        return
    manifest = {
        "command": command,
        "parameters": params,
        "tolerances": {
            "base": tol,
            "ode_rel": tol,
            "ode_abs": tol * 1e-2,
            "quadrature": tol * 0.1,
            "root": tol * 0.1,
        },
        "version": __version__,
        "wall_time_s": wall_time,
        "row_flags": flags,
    }
    side = data_path.with_name(data_path.stem + ".manifest.json")
    side.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")


def _map_rows(worker, arg_tuples, threads: int):
    """Ordered map over row workers, optionally across processes."""
    if threads <= 1:
        return [worker(args) for args in arg_tuples]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, arg_tuples, chunksize=1))


# =============================================================================
# ROW WORKERS (top level so they can cross process boundaries)
# =============================================================================

def _geometry_row(args):
    n, tol = args
    try:
        g = geometry.solve_geometry(n, _config_from_tol(tol))
    except Exception as exc:  # row failure is data, not a crash
        return n, None, f"{type(exc).__name__}: {exc}"
    return n, {"n": n, "W": g.W, "H": g.H, "L": g.L, "R": g.R}, None


def _eig_row(args):
    n, m, parity_name, tol = args
    try:
        lam = spectrum.steklov(n, m, parity_name, _config_from_tol(tol)).value
    except Exception as exc:
        return (n, m, parity_name), None, f"{type(exc).__name__}: {exc}"
    return (n, m, parity_name), {"n": n, "m": m, "parity": parity_name,
                                 "lambda": lam}, None


def _index_row(args):
    n, tol, log_only = args
    try:
        limit = 0 if log_only else index.EXACT_MI_LIMIT
        rep = index.index_report(n, _config_from_tol(tol), exact_limit=limit)
    except Exception as exc:
        return n, None, f"{type(exc).__name__}: {exc}"
    row = {"n": n, "K0": rep.K0, "K1": rep.K1,
           "SI": str(rep.SI) if rep.SI is not None else None,
           "MI": str(rep.MI) if rep.MI is not None else None,
           "logMI": rep.logMI, "margin": rep.margin,
           "certified": rep.certified}
    return n, row, None


# =============================================================================
# SUBCOMMANDS
# =============================================================================

def _run_geometry(args) -> int:
    tol = _base_tol(args)
    lo, hi = parse_range(args.n, 2, MAX_DIMENSION)
    t0 = time.perf_counter()
    results = _map_rows(_geometry_row, [(n, tol) for n in range(lo, hi + 1)],
                        args.threads)
    rows, failures = [], {}
    for n, row, err in results:
        if err is not None:
            failures[str(n)] = err
            if args.strict:
                print(f"geometry failed at n={n}: {err}", file=sys.stderr)
                return EXIT_SOLVER_FAILURE
        else:
            rows.append(row)
    text = render_rows(rows, ["n", "W", "H", "L", "R"], args.format, args.table5)
    path = write_output(text, args.out)
    write_manifest(path, "geometry", {"n": [lo, hi]}, tol,
                   time.perf_counter() - t0, {"failed": failures})
    if failures:
        print(f"{len(failures)} row(s) failed to solve", file=sys.stderr)
        return EXIT_SOLVER_FAILURE
    return EXIT_OK


def _run_eig(args) -> int:
    tol = _base_tol(args)
    n_lo, n_hi = parse_range(args.n, 2, MAX_DIMENSION)
    m_lo, m_hi = parse_range(args.m, 0, 10 * MAX_DIMENSION)
    parities = ["even", "odd"] if args.parity == "both" else [args.parity]
    work = [(n, m, p, tol)
            for n in range(n_lo, n_hi + 1)
            for m in range(m_lo, m_hi + 1)
            for p in parities]
    t0 = time.perf_counter()
    results = _map_rows(_eig_row, work, args.threads)
    rows, failures = [], {}
    for key, row, err in results:
        if err is not None:
            failures[str(key)] = err
            if args.strict:
                print(f"eigenvalue failed at {key}: {err}", file=sys.stderr)
                return EXIT_SOLVER_FAILURE
        else:
            rows.append(row)
    text = render_rows(rows, ["n", "m", "parity", "lambda"], args.format,
                       args.table5)
    path = write_output(text, args.out)
    write_manifest(path, "eig", {"n": [n_lo, n_hi], "m": [m_lo, m_hi],
                                 "parity": args.parity}, tol,
                   time.perf_counter() - t0, {"failed": failures})
    if failures:
        print(f"{len(failures)} row(s) failed to solve", file=sys.stderr)
        return EXIT_SOLVER_FAILURE
    return EXIT_OK


def _run_index(args) -> int:
    tol = _base_tol(args)
    lo, hi = parse_range(args.n, 2, MAX_DIMENSION)
    t0 = time.perf_counter()
    results = _map_rows(_index_row,
                        [(n, tol, args.log_only) for n in range(lo, hi + 1)],
                        args.threads)
    rows, failures, uncertified = [], {}, []
    for n, row, err in results:
        if err is not None:
            failures[str(n)] = err
            if args.strict:
                print(f"index failed at n={n}: {err}", file=sys.stderr)
                return EXIT_SOLVER_FAILURE
            continue
        rows.append(row)
        if not row["certified"]:
            uncertified.append(row["n"])
    text = render_rows(rows, ["n", "K0", "K1", "SI", "MI", "logMI", "margin",
                              "certified"], args.format, args.table5)
    path = write_output(text, args.out)
    write_manifest(path, "index", {"n": [lo, hi], "log_only": args.log_only},
                   tol, time.perf_counter() - t0,
                   {"failed": failures, "uncertified": uncertified})
    if failures:
        print(f"{len(failures)} row(s) failed to solve", file=sys.stderr)
        return EXIT_SOLVER_FAILURE
    if uncertified and args.strict:
        print(f"uncertified rows under --strict: {uncertified}", file=sys.stderr)
        return EXIT_UNCERTIFIED
    return EXIT_OK


def _run_asym(args) -> int:
    tol = _base_tol(args)
    lo, hi = parse_range(args.n, 2, MAX_DIMENSION)
    if args.kind == "lambda" and args.m is None:
        raise CliError("--kind lambda requires --m")
    n_values = asymptotics.log_spaced_ints(lo, hi, args.per_decade)
    if args.kind == "geometry":
        n_values = [n for n in n_values if n >= 3]
    t0 = time.perf_counter()
    report = asymptotics.deviation_report(args.kind, n_values, m=args.m,
                                          config=_config_from_tol(tol))
    rows = [{"n": r.n, "m": r.m, "quantity": r.quantity, "computed": r.computed,
             "predicted": r.predicted, "scaled_error": r.scaled_error,
             "scaling": r.scaling, "note": r.note} for r in report.rows]
    text = render_rows(rows, ["n", "m", "quantity", "computed", "predicted",
                              "scaled_error", "scaling", "note"], args.format,
                       args.table5)
    path = write_output(text, args.out)
    figure = None
    if path is not None and not args.no_plot:
        from catenoid import plots  # matplotlib import deferred to use

        figure = path.with_suffix(".png")
        plots.render_report_figure(report, figure)
    write_manifest(path, "asym",
                   {"kind": args.kind, "n": [lo, hi], "m": args.m,
                    "per_decade": args.per_decade,
                    "figure": figure.name if figure else None},
                   tol, time.perf_counter() - t0, {})
    return EXIT_OK


def _run_spheres(args) -> int:
    if args.p or args.q:
        if not (args.p and args.q):
            raise CliError("--p and --q must be given together")
        p_lo, p_hi = parse_range(args.p, 1, 10_000)
        q_lo, q_hi = parse_range(args.q, 1, 10_000)
        pairs = [(p, q) for p in range(p_lo, p_hi + 1)
                 for q in range(q_lo, q_hi + 1) if p <= q]
    else:
        pairs = [(p, q) for p in range(1, args.max + 1)
                 for q in range(p, args.max + 1)]
    t0 = time.perf_counter()
    rows = []
    for p, q in pairs:
        mi = spheres.sphere_morse_index(p, q)
        negatives = spheres.negative_modes(p, q)
        rows.append({"p": p, "q": q, "MI": mi,
                     "negative_modes": len(negatives),
                     "closed_form": p + q + 3})
    text = render_rows(rows, ["p", "q", "MI", "negative_modes", "closed_form"],
                       args.format, args.table5)
    path = write_output(text, args.out)
    write_manifest(path, "spheres",
                   {"pairs": len(pairs), "max": args.max, "p": args.p,
                    "q": args.q},
                   _base_tol(args), time.perf_counter() - t0, {})
    return EXIT_OK


# (value, absolute tolerance) sentinels exercised by the selftest.
_SELFTEST_GEOMETRY = {2: (1.19968, 1.81017), 3: (0.67715, 1.60312),
                      50: (0.03186, 1.07445), 100: (0.01582, 1.04322)}
_SELFTEST_EIGS = {(11, 3): 1.02647, (91, 8): 0.99545, (7, 7): 7.0,
                  (20, 10): 9.66755}
_SELFTEST_INDEX = {2: (2, 4), 12: (4, 443), 100: (9, 350319724626)}


def _run_selftest(args) -> int:
    tol = _base_tol(args)
    config = _config_from_tol(tol)
    failures = 0

    def report(name: str, ok: bool, detail: str = "") -> None:
        nonlocal failures
        failures += 0 if ok else 1
        status = "pass" if ok else "FAIL"
        print(f"[{status}] {name}" + (f"  ({detail})" if detail else ""))

    for n, (w_ref, h_ref) in _SELFTEST_GEOMETRY.items():
        g = geometry.solve_geometry(n, config)
        report(f"geometry n={n}",
               abs(g.W - w_ref) < 1e-5 and abs(g.H - h_ref) < 1e-5,
               f"W={g.W:.6f} H={g.H:.6f}")
    for (n, m), lam_ref in _SELFTEST_EIGS.items():
        lam = spectrum.steklov(n, m, Parity.EVEN, config).value
        report(f"eigenvalue (n={n}, m={m})", abs(lam - lam_ref) < 1e-5,
               f"lambda={lam:.6f}")
    for n, (k0_ref, mi_ref) in _SELFTEST_INDEX.items():
        rep = index.index_report(n, config)
        report(f"index n={n}",
               rep.K0 == k0_ref and rep.MI == mi_ref and rep.certified,
               f"K0={rep.K0} MI={rep.MI} certified={rep.certified}")
    report("sphere product (2,3)", spheres.sphere_morse_index(2, 3) == 8)
    report("sphere mode (1,1) vanishes",
           spheres.sphere_mode_eigenvalue(3, 4, 1, 1) == 0.0)
    print(f"selftest: {failures} failure(s)")
    return EXIT_OK if failures == 0 else EXIT_SOLVER_FAILURE


# =============================================================================
# PARSER
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catenoid",
        description="Free-boundary minimal catenoid geometry, Steklov "
                    "spectrum and Morse index.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="base tolerance (default 1e-12; env CATENOID_TOL)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--strict", action="store_true",
                        help="abort on row failure; uncertified index rows exit 3")
    common.add_argument("--table5", action="store_true",
                        help="round displayed values half-even to 5 decimals")
    common.add_argument("--threads", type=int, default=1,
                        help="worker processes for row-parallel sweeps")

    p = sub.add_parser("geometry", parents=[common],
                       help="free-boundary scalars W, H, L, R")
    p.add_argument("--n", required=True, help="dimension or range, e.g. 2..100")
    p.set_defaults(func=_run_geometry)

    p = sub.add_parser("eig", parents=[common], help="Steklov eigenvalues")
    p.add_argument("--n", required=True)
    p.add_argument("--m", required=True, help="harmonic mode or range")
    p.add_argument("--parity", choices=("even", "odd", "both"), default="even")
    p.set_defaults(func=_run_eig)

    p = sub.add_parser("index", parents=[common],
                       help="mode counts and Morse indices")
    p.add_argument("--n", required=True)
    p.add_argument("--log-only", action="store_true",
                   help="skip exact integers, report logMI only")
    p.set_defaults(func=_run_index)

    p = sub.add_parser("asym", parents=[common],
                       help="computed-vs-predicted deviation reports")
    p.add_argument("--kind", choices=asymptotics.DEVIATION_KINDS, required=True)
    p.add_argument("--n", required=True, help="dimension range, log-sampled")
    p.add_argument("--m", type=int, default=None,
                   help="harmonic mode (kind=lambda)")
    p.add_argument("--per-decade", type=int, default=40,
                   help="log-grid density (default 40)")
    p.add_argument("--no-plot", action="store_true",
                   help="skip the PNG figure next to --out")
    p.set_defaults(func=_run_asym)

    p = sub.add_parser("spheres", parents=[common],
                       help="Morse indices of minimal sphere products")
    p.add_argument("--max", type=int, default=12,
                   help="scan all 1 <= p <= q <= MAX (default 12)")
    p.add_argument("--p", default=None, help="explicit p range")
    p.add_argument("--q", default=None, help="explicit q range")
    p.set_defaults(func=_run_spheres)

    p = sub.add_parser("selftest", parents=[common],
                       help="verify built-in reference values")
    p.set_defaults(func=_run_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER_FAILURE


if __name__ == "__main__":
    sys.exit(main())
