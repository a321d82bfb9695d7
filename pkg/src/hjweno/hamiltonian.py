"""Lax-Friedrichs numerical Hamiltonians and semi-discrete right-hand sides.

Hamiltonians are vectorised callables ``H(x, t, u)`` in 1D and
``H(x, y, t, u, v)`` in 2D, where ``u = phi_x`` and ``v = phi_y``.
Wave-speed bounds ``alpha_bound(box)`` receive one ``(lo, hi)`` interval per
gradient component and return one speed per direction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal, Optional, Sequence

import numpy as np

from .mesh import (BoundaryRule, Grid, Grid2D, ScalarField, fill_ghosts,
                   grid_axes, make_uniform_grid_1d, make_uniform_grid_2d)
from .reconstruction import WeightParams, weno_derivatives

CurvatureForm = Literal["printed", "canonical"]


class BlowupError(RuntimeError):
    """Raised when a numerical operation produces non-finite values."""


@dataclass(frozen=True)
class HJProblem:
    """A scalar Hamilton-Jacobi problem ``phi_t + H(x, t, grad phi) = 0``.

    ``curvature_eps > 0`` adds the level-set curvature term
    ``-eps * K * sqrt(phi_x**2 + phi_y**2 + 1)`` to the right-hand side
    (2D only).  ``alpha_inflation`` scales the wave-speed bound; problems
    whose bound is global rather than box dependent set it to 0.
    """

    dimension: int
    hamiltonian: Callable
    alpha_bound: Callable
    domain: tuple[tuple[float, float], ...]
    initial: Callable
    boundary: BoundaryRule | Sequence[BoundaryRule]
    exact: Optional[Callable] = None
    curvature_eps: float = 0.0
    curvature_form: CurvatureForm = "printed"
    alpha_inflation: float = 0.1
    name: str = ""

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {self.dimension}")
        if len(self.domain) != self.dimension:
            raise ValueError("domain needs one (a, b) pair per dimension")
        if self.curvature_eps < 0:
            raise ValueError("curvature_eps must be nonnegative")
        if self.curvature_eps > 0 and self.dimension != 2:
            raise ValueError("the curvature term is only defined in 2D")

    def make_grid(self, n: int, ny: int | None = None) -> Grid:
        if self.dimension == 1:
            (a, b), = self.domain
            return make_uniform_grid_1d(a, b, n)
        (ax, bx), (ay, by) = self.domain
        return make_uniform_grid_2d(ax, bx, n, ay, by, ny)

    def initial_field(self, grid: Grid) -> ScalarField:
        return ScalarField.sample(grid, self.initial)


# -- numerical Hamiltonians ---------------------------------------------------------

def lax_friedrichs_1d(H: Callable, u_plus, u_minus, alpha):
    """``H((u+ + u-)/2) - alpha (u+ - u-)/2`` with ``H`` a function of u only."""
    return H(0.5 * (u_plus + u_minus)) - alpha * 0.5 * (u_plus - u_minus)


def lax_friedrichs_2d(H: Callable, u_plus, u_minus, v_plus, v_minus, alpha_x, alpha_y):
    return (H(0.5 * (u_plus + u_minus), 0.5 * (v_plus + v_minus))
            - alpha_x * 0.5 * (u_plus - u_minus)
            - alpha_y * 0.5 * (v_plus - v_minus))


# -- derivative sweeps ------------------------------------------------------------------

def one_sided_derivatives(filled: ScalarField, params: WeightParams) -> tuple:
    """WENO (minus, plus) derivative pairs along every axis of a filled field.

    Returns ``((u_minus, u_plus),)`` in 1D and
    ``((u_minus, u_plus), (v_minus, v_plus))`` in 2D, each on interior nodes.
    """
    g = filled.ghost_width
    data = filled.data
    axes = grid_axes(filled.grid)
    if len(axes) == 1:
        return (weno_derivatives(data[g - 3:data.shape[0] - g + 3], axes[0].dx, params),)
    inner = slice(g, -g)
    sweep = slice(g - 3, None if g == 3 else -(g - 3))
    x_pair = weno_derivatives(data[sweep, inner], axes[0].dx, params)
    vm, vp = weno_derivatives(data[inner, sweep].T, axes[1].dx, params)
    return (x_pair, (vm.T, vp.T))


def alpha_from_field(problem: HJProblem, derivatives) -> tuple[float, ...]:
    """Per-direction Lax-Friedrichs speeds over the current derivative range.

    ``alpha_bound`` is evaluated on the bounding box of both one-sided
    derivatives and the result is scaled by ``1 + problem.alpha_inflation``.
    """
    box = []
    for minus, plus in derivatives:
        lo = float(min(np.min(minus), np.min(plus)))
        hi = float(max(np.max(minus), np.max(plus)))
        if not (np.isfinite(lo) and np.isfinite(hi)):
            raise BlowupError("non-finite derivative values while bounding wave speeds")
        box.append((lo, hi))
    speeds = np.atleast_1d(np.asarray(problem.alpha_bound(tuple(box)), dtype=float))
    if speeds.shape != (problem.dimension,) or np.any(speeds < 0):
        raise ValueError(f"alpha_bound must return {problem.dimension} nonnegative speeds, got {speeds}")
    return tuple(float(s) * (1 + problem.alpha_inflation) for s in speeds)


# -- curvature -------------------------------------------------------------------------

def curvature(filled: ScalarField, form: CurvatureForm = "printed") -> tuple[np.ndarray, np.ndarray]:
    """Central-difference curvature K and ``S = sqrt(phi_x^2 + phi_y^2 + 1)``.

    ``form="printed"`` uses ``phi_xx (1 + phi_y)^2 + phi_yy (1 + phi_x)^2`` in
    the numerator, ``"canonical"`` the graph mean-curvature factors
    ``(1 + phi_y^2)`` and ``(1 + phi_x^2)``.
    """
    p = filled.data
    g = filled.ghost_width
    dx, dy = filled.grid.spacing
    nx, ny = filled.grid.shape

    def s(i, j):
        return p[g + i:g + i + nx, g + j:g + j + ny]

    c = s(0, 0)
    px = (s(1, 0) - s(-1, 0)) / (2 * dx)
    py = (s(0, 1) - s(0, -1)) / (2 * dy)
    pxx = (s(1, 0) - 2 * c + s(-1, 0)) / dx**2
    pyy = (s(0, 1) - 2 * c + s(0, -1)) / dy**2
    pxy = (s(1, 1) - s(1, -1) - s(-1, 1) + s(-1, -1)) / (4 * dx * dy)
    if form == "printed":
        fy, fx = (1 + py) ** 2, (1 + px) ** 2
    elif form == "canonical":
        fy, fx = 1 + py**2, 1 + px**2
    else:
        raise ValueError(f"unknown curvature form {form!r}")
    S = np.sqrt(px**2 + py**2 + 1)
    K = (pxx * fy - 2 * pxy * px * py + pyy * fx) / S**3
    return K, S


def curvature_term(filled: ScalarField, eps: float, form: CurvatureForm = "printed") -> np.ndarray:
    """Right-hand-side contribution ``-eps K S`` of ``phi_t = (1 - eps K) S``."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if eps == 0:
        return np.zeros(filled.grid.shape)
    K, S = curvature(filled, form)
    return -eps * K * S


# -- right-hand sides ------------------------------------------------------------------

def _check_finite(arr: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(arr)):
        bad = np.argwhere(~np.isfinite(arr))[0]
        raise BlowupError(f"non-finite {what} at node {tuple(int(i) for i in bad)}")
    return arr


def rhs_from_derivatives(filled: ScalarField, problem: HJProblem, derivatives, alpha, t: float) -> np.ndarray:
    grid = filled.grid
    if problem.dimension == 1:
        (um, up), = derivatives
        x = grid.nodes
        H = lambda u: problem.hamiltonian(x, t, u)  # noqa: E731
        out = -lax_friedrichs_1d(H, up, um, alpha[0])
    else:
        (um, up), (vm, vp) = derivatives
        X, Y = grid.mesh()
        H = lambda u, v: problem.hamiltonian(X, Y, t, u, v)  # noqa: E731
        out = -lax_friedrichs_2d(H, up, um, vp, vm, alpha[0], alpha[1])
        if problem.curvature_eps > 0:
            out = out + curvature_term(filled, problem.curvature_eps, problem.curvature_form)
    return _check_finite(np.broadcast_to(out, grid.shape if isinstance(grid, Grid2D) else (grid.n,)), "right-hand side")


def rhs(field: ScalarField, problem: HJProblem, params: WeightParams, t: float,
        alpha: Sequence[float] | None = None) -> np.ndarray:
    """Semi-discrete operator L(phi) = -H_hat on the interior nodes.

    Ghosts are refilled for time ``t``.  Without an explicit ``alpha`` the
    speeds come from :func:`alpha_from_field` on this field.
    """
    filled = fill_ghosts(field, problem.boundary, t)
    derivs = one_sided_derivatives(filled, params)
    for pair in derivs:
        for d in pair:
            _check_finite(d, "derivative")
    if alpha is None:
        alpha = alpha_from_field(problem, derivs)
    return rhs_from_derivatives(filled, problem, derivs, alpha, t)


def rhs_1d(field: ScalarField, problem: HJProblem, params: WeightParams, t: float, alpha=None) -> np.ndarray:
    if problem.dimension != 1:
        raise ValueError("rhs_1d needs a 1D problem")
    return rhs(field, problem, params, t, alpha)


def rhs_2d(field: ScalarField, problem: HJProblem, params: WeightParams, t: float, alpha=None) -> np.ndarray:
    if problem.dimension != 2:
        raise ValueError("rhs_2d needs a 2D problem")
    return rhs(field, problem, params, t, alpha)
