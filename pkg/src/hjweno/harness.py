"""Error norms, grid-convergence tables and plot-data output."""

from __future__ import annotations

import csv
import io
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .hamiltonian import BlowupError, HJProblem
from .mesh import Grid, Grid2D, ScalarField, grid_axes
from .reconstruction import params_for_scheme
from .timestepper import TimeControls, integrate

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ErrorPair:
    l_inf: float
    l_1: float


def _oracle_values(grid: Grid, oracle, t: float) -> np.ndarray:
    if callable(oracle):
        if isinstance(grid, Grid2D):
            X, Y = grid.mesh()
            return np.asarray(oracle(X, Y, t), dtype=float)
        return np.asarray(oracle(grid.nodes, t), dtype=float)
    return np.asarray(oracle, dtype=float)


def error_norms(numeric: ScalarField, oracle, t: float, normalize: bool = False) -> ErrorPair:
    """Nodal max error and L1 error against ``oracle``.

    ``oracle`` is a callable ``(x[, y], t)`` or an array of nodal values.
    L1 is ``sum |e| * cell measure``; with ``normalize=True`` it is divided by
    the domain measure (mean absolute error).
    """
    grid = numeric.grid
    err = np.abs(numeric.values - _oracle_values(grid, oracle, t))
    cell = math.prod(ax.dx for ax in grid_axes(grid))
    l1 = cell * float(err.sum())
    if normalize:
        l1 /= math.prod(ax.length for ax in grid_axes(grid))
    return ErrorPair(float(err.max()) if err.size else 0.0, l1)


@dataclass
class ConvergenceRow:
    n: int
    label: str
    l_inf: float | None = None
    order_inf: float | None = None
    l_1: float | None = None
    order_1: float | None = None
    steps: int = 0
    error: str | None = None


@dataclass
class ConvergenceTable:
    scheme: str
    rows: list[ConvergenceRow] = field(default_factory=list)
    problem: str = ""
    t: float = 0.0

    def column(self, name: str) -> list:
        return [getattr(r, name) for r in self.rows]


def observed_order(coarse: float | None, fine: float | None, ratio: float = 2.0) -> float | None:
    if coarse is None or fine is None or coarse <= 0 or fine <= 0:
        return None
    return math.log(coarse / fine) / math.log(ratio)


def fill_orders(rows: list[ConvergenceRow]) -> None:
    for prev, row in zip(rows, rows[1:]):
        ratio = row.n / prev.n
        row.order_inf = observed_order(prev.l_inf, row.l_inf, ratio)
        row.order_1 = observed_order(prev.l_1, row.l_1, ratio)


def _run_one(problem: HJProblem, n: int, scheme: str, controls: TimeControls, oracle,
             epsilon: float, normalize: bool) -> ConvergenceRow:
    grid = problem.make_grid(n)
    label = f"{n}x{n}" if problem.dimension == 2 else str(n)
    try:
        sol = integrate(problem, grid, controls, params_for_scheme(scheme, epsilon))
    except BlowupError as exc:
        log.warning("N=%d blew up: %s", n, exc)
        return ConvergenceRow(n, label, error=str(exc))
    ref = oracle if oracle is not None else problem.exact
    if ref is None:
        raise ValueError("convergence study needs an oracle")
    if hasattr(ref, "sample"):
        ref = ref.sample(grid)
    errs = error_norms(sol.field, ref, sol.t, normalize)
    return ConvergenceRow(n, label, errs.l_inf, None, errs.l_1, None, sol.steps)


def _run_catalog(args) -> ConvergenceRow:
    from .problems import catalog

    pid, n, scheme, controls, epsilon, normalize = args
    spec = catalog(pid)
    return _run_one(spec.problem, n, scheme, controls, spec.oracle_at(controls.t_final), epsilon, normalize)


def convergence_study(problem, ns: Sequence[int], scheme: str = "weno-l",
                      controls: TimeControls | None = None, oracle: Optional[Callable] = None,
                      epsilon: float = 1e-6, normalize: bool = False,
                      workers: int = 1) -> ConvergenceTable:
    """Run ``problem`` on each resolution in ``ns`` and tabulate errors and orders.

    ``problem`` is an :class:`HJProblem` or a catalog id.  In ``"accuracy"``
    mode the reference spacing for the time step is the coarsest grid's.
    Parallel execution (``workers > 1``) needs a catalog id.
    """
    ns = [int(n) for n in ns]
    if any(b != 2 * a for a, b in zip(ns, ns[1:])):
        raise ValueError(f"resolutions must double successively, got {ns}")
    pid = problem if isinstance(problem, str) else None
    if pid is not None:
        from .problems import catalog

        spec = catalog(pid)
        problem = spec.problem
        if controls is None:
            controls = TimeControls(spec.final_times[0], mode="accuracy")
        if oracle is None:
            oracle = spec.oracle_at(controls.t_final)
            if oracle is None:
                raise ValueError(f"{pid} has no exact solution at t={controls.t_final}")
    if controls is None:
        raise ValueError("controls are required for a bare HJProblem")
    if controls.dx_ref is None and ns:
        coarse = problem.make_grid(ns[0])
        controls = TimeControls(controls.t_final, controls.cfl, controls.mode, controls.max_steps,
                                grid_axes(coarse)[0].dx)

    if workers > 1 and pid is not None and len(ns) > 1:
        jobs = [(pid, n, scheme, controls, epsilon, normalize) for n in ns]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_catalog, jobs))
    else:
        rows = [_run_one(problem, n, scheme, controls, oracle, epsilon, normalize) for n in ns]
    fill_orders(rows)
    return ConvergenceTable(scheme, rows, pid or problem.name, controls.t_final)


# -- emission ----------------------------------------------------------------------

def _sci(v: float | None) -> str:
    return "" if v is None else f"{v:.2e}"


def _ord(v: float | None) -> str:
    return "" if v is None else f"{v:.2f}"


TABLE_HEADER = ("N", "linf", "order_linf", "l1", "order_l1")
_SCHEME_TITLES = {"weno-l": "WENO-L", "weno-jp": "WENO-JP"}


def emit_table(table: ConvergenceTable, fmt: str = "csv") -> bytes:
    """Serialise a convergence table as CSV or aligned text.

    Errors use three significant digits (``2.74e-03``) and orders two
    decimals; the first row has empty order cells.
    """
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TABLE_HEADER)
        for r in table.rows:
            writer.writerow([r.label, _sci(r.l_inf), _ord(r.order_inf), _sci(r.l_1), _ord(r.order_1)])
        return buf.getvalue().encode()
    if fmt in ("text", "aligned-text"):
        title = _SCHEME_TITLES.get(table.scheme, table.scheme)
        lines = [title, f"{'N':>10}  {'Linf error':>10}  {'Order':>6}  {'L1 error':>10}  {'Order':>6}"]
        for r in table.rows:
            if r.error is not None:
                lines.append(f"{r.label:>10}  failed: {r.error}")
                continue
            lines.append(f"{r.label:>10}  {_sci(r.l_inf):>10}  {_ord(r.order_inf) or '...':>6}  "
                         f"{_sci(r.l_1):>10}  {_ord(r.order_1) or '...':>6}")
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown table format {fmt!r}")


def emit_solution(field: ScalarField, oracle=None, t: float = 0.0, fmt: str | None = None) -> bytes:
    """Serialise a solution for plotting.

    1D ``csv``: columns ``x, numeric[, exact]``.  2D ``gnuplot``: one block of
    ``x y value [exact]`` lines per x node, blocks separated by a blank line
    (``splot`` grid format).  2D ``csv`` writes the same columns flat.
    """
    grid = field.grid
    two_d = isinstance(grid, Grid2D)
    fmt = fmt or ("gnuplot" if two_d else "csv")
    exact = None if oracle is None else _oracle_values(grid, oracle, t)
    if not two_d:
        if fmt != "csv":
            raise ValueError("1D solutions are written as csv")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "numeric"] + (["exact"] if exact is not None else []))
        for k, (x, v) in enumerate(zip(grid.nodes, field.values)):
            w.writerow([repr(float(x)), repr(float(v))] + ([repr(float(exact[k]))] if exact is not None else []))
        return buf.getvalue().encode()

    X, Y = grid.mesh()
    vals = field.values
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "y", "numeric"] + (["exact"] if exact is not None else []))
        for i in range(grid.shape[0]):
            for j in range(grid.shape[1]):
                extra = [repr(float(exact[i, j]))] if exact is not None else []
                w.writerow([repr(float(X[i, j])), repr(float(Y[i, j])), repr(float(vals[i, j]))] + extra)
        return buf.getvalue().encode()
    if fmt in ("gnuplot", "gnuplot-grid"):
        blocks = []
        for i in range(grid.shape[0]):
            lines = []
            for j in range(grid.shape[1]):
                cols = [X[i, j], Y[i, j], vals[i, j]] + ([exact[i, j]] if exact is not None else [])
                lines.append(" ".join(f"{c:.16g}" for c in cols))
            blocks.append("\n".join(lines))
        return ("\n\n".join(blocks) + "\n").encode()
    raise ValueError(f"unknown solution format {fmt!r}")
