"""Command-line driver: ``hjweno list | solve | table``.

Exit codes: 0 success, 1 numerical failure, 2 usage error.  Output files go
to ``--output`` or, when omitted, to ``$HJWENO_OUTPUT_DIR`` (default: the
current directory).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .hamiltonian import BlowupError
from .harness import convergence_study, emit_solution, emit_table, error_norms
from .problems import catalog, catalog_ids
from .reconstruction import SCHEMES, params_for_scheme
from .timestepper import TimeControls, integrate

OUTPUT_DIR_ENV = "HJWENO_OUTPUT_DIR"
EXIT_NUMERICAL = 1
EXIT_USAGE = 2


def _fmt_time(t: float) -> str:
    return f"{t:.6g}"


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _scheme_list(text: str) -> list[str]:
    out = [s.strip().lower() for s in text.split(",") if s.strip()]
    bad = [s for s in out if s not in SCHEMES]
    if bad or not out:
        raise argparse.ArgumentTypeError(f"unknown scheme(s) {bad}; choose from {sorted(SCHEMES)}")
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hjweno", description="WENO solvers for Hamilton-Jacobi equations")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list benchmark problems")

    def common(p, dt_mode):
        p.add_argument("--problem", required=True, help="problem id, P1..P13")
        p.add_argument("--t", type=float, default=None, help="final time (default: problem's first)")
        p.add_argument("--cfl", type=float, default=0.6)
        p.add_argument("--dt-mode", choices=["cfl", "accuracy"], default=dt_mode)
        p.add_argument("--epsilon", type=float, default=1e-6, help="weight regularisation")
        p.add_argument("--output", default=None)

    solve = sub.add_parser("solve", help="run one problem and write the solution")
    common(solve, "cfl")
    solve.add_argument("--scheme", type=str.lower, choices=sorted(SCHEMES), default="weno-l")
    solve.add_argument("--n", type=int, default=None)
    solve.add_argument("--ny", type=int, default=None)
    solve.add_argument("--curvature-eps", type=_float_list, default=None,
                       help="comma-separated list; one output per value")
    solve.add_argument("--curvature-form", choices=["printed", "canonical"], default=None)
    solve.add_argument("--format", choices=["csv", "gnuplot"], default=None)

    table = sub.add_parser("table", help="grid-convergence table")
    common(table, "accuracy")
    table.add_argument("--ns", type=_int_list, required=True)
    table.add_argument("--schemes", type=_scheme_list, default=["weno-l"])
    table.add_argument("--format", choices=["text", "csv"], default="text")
    table.add_argument("--normalize-l1", action="store_true", help="report mean absolute error as L1")
    table.add_argument("--workers", type=int, default=1)
    return parser


def cmd_list(out=sys.stdout) -> int:
    for pid in catalog_ids():
        spec = catalog(pid)
        times = ",".join(_fmt_time(t) for t in spec.final_times)
        grids = ",".join(str(n) for n in spec.grids)
        out.write(f"{pid + ' ' + spec.short:<22} {spec.dimension}D  t={times:<18} N={grids:<18} {spec.title}\n")
    return 0


def _output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, "."))


def _lookup(parser, args, **kw):
    try:
        return catalog(args.problem, **kw)
    except KeyError as exc:
        parser.error(str(exc.args[0]))


def cmd_solve(args, parser, out=sys.stdout) -> int:
    eps_values = args.curvature_eps or [None]
    spec = _lookup(parser, args)
    t_final = spec.final_times[0] if args.t is None else args.t
    n = args.n or spec.grids[0]
    if spec.dimension == 1 and args.ny is not None:
        parser.error("--ny only applies to 2D problems")
    params = params_for_scheme(args.scheme, args.epsilon)
    controls = TimeControls(t_final, cfl=args.cfl, mode=args.dt_mode)
    status = 0
    for eps in eps_values:
        spec = _lookup(parser, args, curvature_eps=eps, curvature_form=args.curvature_form)
        if eps is not None and spec.dimension != 2:
            parser.error("--curvature-eps only applies to 2D problems")
        grid = spec.problem.make_grid(n, args.ny)
        try:
            sol = integrate(spec.problem, grid, controls, params)
        except BlowupError as exc:
            print(f"error: {exc}", file=sys.stderr)
            status = EXIT_NUMERICAL
            continue
        oracle = spec.oracle_at(t_final)
        fmt = args.format or ("gnuplot" if spec.dimension == 2 else "csv")
        payload = emit_solution(sol.field, oracle, sol.t, fmt)
        path = _solution_path(args, spec, n, t_final, fmt, eps if len(eps_values) > 1 else None)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(payload)
        msg = f"{spec.id} {args.scheme} N={grid_label(spec, n, args.ny)} t={_fmt_time(sol.t)} steps={sol.steps} -> {path}"
        if oracle is not None:
            errs = error_norms(sol.field, oracle, sol.t)
            msg += f"  linf={errs.l_inf:.3e} l1={errs.l_1:.3e}"
        out.write(msg + "\n")
    return status


def grid_label(spec, n, ny=None) -> str:
    return f"{n}x{ny or n}" if spec.dimension == 2 else str(n)


def _solution_path(args, spec, n, t, fmt, eps) -> Path:
    ext = "csv" if fmt == "csv" else "dat"
    suffix = "" if eps is None else f"_eps{eps:g}"
    name = f"{spec.id}_{args.scheme}_N{n}_t{t:.6g}{suffix}.{ext}"
    if args.output is None:
        return _output_dir() / name
    target = Path(args.output)
    if target.is_dir():
        return target / name
    if eps is not None:
        return target.with_name(f"{target.stem}{suffix}{target.suffix}")
    return target


def cmd_table(args, parser, out=sys.stdout) -> int:
    spec = _lookup(parser, args)
    t_final = spec.final_times[0] if args.t is None else args.t
    if spec.oracle_at(t_final) is None:
        parser.error(f"{spec.id} has no exact solution at t={_fmt_time(t_final)}")
    ns = args.ns
    if any(b != 2 * a for a, b in zip(ns, ns[1:])):
        parser.error("--ns must double successively")
    controls = TimeControls(t_final, cfl=args.cfl, mode=args.dt_mode)
    status = 0
    chunks = []
    for scheme in args.schemes:
        table = convergence_study(spec.id, ns, scheme, controls, epsilon=args.epsilon,
                                  normalize=args.normalize_l1, workers=args.workers)
        if any(r.error for r in table.rows):
            status = EXIT_NUMERICAL
        payload = emit_table(table, args.format)
        if args.output is not None:
            target = Path(args.output)
            if len(args.schemes) > 1:
                target = target.with_name(f"{target.stem}_{scheme}{target.suffix}")
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_bytes(payload)
        chunks.append(payload)
    if args.output is None:
        out.write(b"\n".join(chunks).decode())
    return status


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "list":
            return cmd_list(sys.stdout)
        if args.command == "solve":
            return cmd_solve(args, parser, sys.stdout)
        return cmd_table(args, parser, sys.stdout)
    except ValueError as exc:
        parser.error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
