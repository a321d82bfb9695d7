"""Benchmark Hamilton-Jacobi problems P1-P13 and their reference solutions.

Exact oracles exist for the linear problems (P1, P5) and, before the first
kink forms, for the problems whose data reduce to a scalar 1D equation
(P2, P3, P4, P6; the 2D ones through ``w = x + y``).  Everything else is
checked against a fine-grid WENO solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Literal, Optional

import numpy as np

from .hamiltonian import HJProblem
from .mesh import DirichletExact, Grid, Grid1D, LinearExtrapolation, Periodic, grid_axes
from .reconstruction import WeightParams
from .timestepper import TimeControls, integrate

PI = math.pi

SHORT_NAMES = {
    "P1": "advection", "P2": "cos", "P3": "burgers-2d", "P4": "cos-2d",
    "P5": "advection-corners", "P6": "burgers", "P7": "cos-late", "P8": "nonconvex-quartic",
    "P9": "burgers-2d-late", "P10": "nonconvex-sin-2d", "P11": "optimal-control",
    "P12": "eikonal", "P13": "eikonal-curvature",
}
ReferenceKind = Literal["analytic", "characteristic", "fine_grid"]


@dataclass(frozen=True)
class ProblemSpec:
    id: str
    title: str
    problem: HJProblem
    final_times: tuple[float, ...]
    grids: tuple[int, ...]
    reference: ReferenceKind
    exact_valid_until: float = 0.0
    notes: str = ""

    @property
    def short(self) -> str:
        return SHORT_NAMES[self.id]

    @property
    def dimension(self) -> int:
        return self.problem.dimension

    def oracle_at(self, t: float) -> Optional[Callable]:
        """Exact solution callable if one is valid at time ``t``, else None."""
        if self.problem.exact is None or t > self.exact_valid_until * (1 + 1e-12):
            return None
        return self.problem.exact


# -- wave-speed helpers -------------------------------------------------------------

def max_abs_sin(lo: float, hi: float) -> float:
    """max |sin s| for s in [lo, hi]."""
    if hi - lo >= PI:
        return 1.0
    k = math.ceil((lo - PI / 2) / PI)
    if PI / 2 + k * PI <= hi:
        return 1.0
    return max(abs(math.sin(lo)), abs(math.sin(hi)))


def max_abs_cos(lo: float, hi: float) -> float:
    return max_abs_sin(lo + PI / 2, hi + PI / 2)


def max_abs_affine(lo: float, hi: float) -> float:
    """max |s| for s in [lo, hi]."""
    return max(abs(lo), abs(hi))


def _quartic_speed(lo: float, hi: float) -> float:
    # |H'(u)| = |u^3 - 5u/2| for H = (u^2 - 1)(u^2 - 4)/4
    pts = [lo, hi] + [s for s in (-math.sqrt(5 / 6), math.sqrt(5 / 6)) if lo < s < hi]
    return max(abs(u**3 - 2.5 * u) for u in pts)


def _eikonal_speeds(box) -> tuple[float, float]:
    (ulo, uhi), (vlo, vhi) = box

    def min_abs(lo, hi):
        return 0.0 if lo <= 0 <= hi else min(abs(lo), abs(hi))

    U, V = max_abs_affine(ulo, uhi), max_abs_affine(vlo, vhi)
    Umin, Vmin = min_abs(ulo, uhi), min_abs(vlo, vhi)
    return (U / math.sqrt(U * U + Vmin * Vmin + 1), V / math.sqrt(V * V + Umin * Umin + 1))


# -- method of characteristics ------------------------------------------------------

def characteristic_solution(phi0: Callable, dphi0: Callable, H: Callable, dH: Callable, x, t: float,
                            d2phi0: Callable | None = None, d2H: Callable | None = None,
                            tol: float = 1e-14, max_iter: int = 100):
    """Smooth solution of ``phi_t + H(phi_x) = 0`` traced along characteristics.

    Solves ``x = x0 + t H'(phi0'(x0))`` for the foot x0 with a bracketed
    Newton iteration (bisection whenever Newton leaves the bracket) and
    returns ``phi0(x0) + t (p H'(p) - H(p))`` with ``p = phi0'(x0)``.

    Raises ``ValueError`` if characteristics have crossed anywhere in the
    bracketed range (the foot map is not increasing there).
    """
    x = np.asarray(x, dtype=float)
    if t == 0:
        return phi0(x)

    def foot_map(x0):
        return x0 + t * dH(dphi0(x0))

    def F(x0):
        return foot_map(x0) - x

    def dF(x0):
        if d2phi0 is not None and d2H is not None:
            return 1 + t * d2H(dphi0(x0)) * d2phi0(x0)
        h = 1e-6 * (1 + np.abs(x0))
        return (foot_map(x0 + h) - foot_map(x0 - h)) / (2 * h)

    # bracket: F(x0) is increasing before characteristics cross
    delta = np.full_like(x, 1.0 + abs(t))
    for _ in range(60):
        lo, hi = x - delta, x + delta
        ok = (F(lo) <= 0) & (F(hi) >= 0)
        if np.all(ok):
            break
        delta = np.where(ok, delta, 2 * delta)
    else:
        raise ValueError("could not bracket the characteristic foot; is t past the first kink?")

    x0 = np.array(x, dtype=float)
    scale = tol * (1 + np.abs(x))
    for it in range(max_iter + 200):
        f = F(x0)
        done = np.abs(f) <= scale
        if np.all(done):
            break
        lo = np.where(f < 0, x0, lo)
        hi = np.where(f > 0, x0, hi)
        if it < max_iter:
            with np.errstate(divide="ignore", invalid="ignore"):
                step = x0 - f / dF(x0)
            inside = np.isfinite(step) & (step > lo) & (step < hi)
            nxt = np.where(inside, step, 0.5 * (lo + hi))
        else:
            nxt = 0.5 * (lo + hi)
        x0 = np.where(done, x0, nxt)
        if np.all(done | (hi - lo <= scale)):
            break
    # the foot map must be increasing over every bracket, not just at the roots
    probe = np.linspace(float(np.min(lo)), float(np.max(hi)), 4097)
    if np.any(dF(probe) <= 0) or np.any(dF(x0) <= 0):
        raise ValueError("characteristics have crossed; no smooth solution at this time")
    p = dphi0(x0)
    return phi0(x0) + t * (p * dH(p) - H(p))


# -- P5 initial profile ---------------------------------------------------------------

def _p5_profile(x):
    """Piecewise profile with kinks, continuous and 2-periodic on [-1, 1).

    The third branch is ``15/2 - 3 cos(2 pi x)``: that constant is the only one
    making the profile continuous at both x = 0 and x = 1/3.
    """
    x = np.asarray(x, dtype=float)
    ramp = -(math.sqrt(3) / 2 + 4.5 + 2 * PI / 3) * (x + 1)
    piece = np.select(
        [x < -1 / 3, x < 0, x < 1 / 3],
        [2 * np.cos(1.5 * PI * x**2) - math.sqrt(3),
         1.5 + 3 * np.cos(2 * PI * x),
         7.5 - 3 * np.cos(2 * PI * x)],
        default=(28 + 4 * PI + np.cos(3 * PI * x)) / 3 + 6 * PI * x * (x - 1),
    )
    return ramp + piece


def wrap(x, a: float, b: float):
    """Map x periodically into [a, b)."""
    return a + np.mod(np.asarray(x, dtype=float) - a, b - a)


def exact_linear_advection(x, t: float, profile: Callable | None = None, shift: float = 0.0,
                           period: tuple[float, float] = (-1.0, 1.0)):
    """Solution of ``phi_t + phi_x = 0`` with periodic data.

    Default profile is ``-cos(pi x)``; with ``profile`` given the initial data
    is ``profile(x - shift)`` wrapped into ``period``.
    """
    if profile is None:
        return -np.cos(PI * (np.asarray(x, dtype=float) - t))
    return profile(wrap(np.asarray(x, dtype=float) - t - shift, *period))


# -- catalog ------------------------------------------------------------------------

def _cos_data(k: float):
    """phi0(w) = -cos(k w) with its first two derivatives."""
    return (lambda w: -np.cos(k * w),
            lambda w: k * np.sin(k * w),
            lambda w: k * k * np.cos(k * w))


def _char_oracle_1d(phi0, dphi0, d2phi0, H, dH, d2H):
    def exact(x, t):
        return characteristic_solution(phi0, dphi0, H, dH, x, t, d2phi0, d2H)
    return exact


def _char_oracle_diag(psi0, dpsi0, d2psi0, Hd, dHd, d2Hd):
    """2D oracle for data depending on x + y only."""
    def exact(x, y, t):
        w = np.asarray(x, dtype=float) + np.asarray(y, dtype=float)
        return characteristic_solution(psi0, dpsi0, Hd, dHd, w, t, d2psi0, d2Hd)
    return exact


def _build_catalog() -> dict[str, ProblemSpec]:
    specs: dict[str, ProblemSpec] = {}
    periodic = Periodic()
    shock_1d = 1 / PI**2

    phi0, dphi0, d2phi0 = _cos_data(PI)

    # P1: linear advection
    specs["P1"] = ProblemSpec(
        "P1", "linear advection phi_t + phi_x = 0, phi0 = -cos(pi x)",
        HJProblem(1, lambda x, t, u: u, lambda box: (1.0,), ((-1.0, 1.0),),
                  lambda x: -np.cos(PI * x), periodic,
                  exact=lambda x, t: exact_linear_advection(x, t),
                  alpha_inflation=0.0, name="P1"),
        (2.0,), (20, 40, 80, 160, 320), "analytic", math.inf)

    # P2 / P7: phi_t - cos(phi_x + 1) = 0
    H2 = lambda p: -np.cos(p + 1)  # noqa: E731
    dH2 = lambda p: np.sin(p + 1)  # noqa: E731
    d2H2 = lambda p: np.cos(p + 1)  # noqa: E731
    cos_problem = HJProblem(
        1, lambda x, t, u: -np.cos(u + 1),
        lambda box: (max_abs_sin(box[0][0] + 1, box[0][1] + 1),),
        ((-1.0, 1.0),), phi0, periodic,
        exact=_char_oracle_1d(phi0, dphi0, d2phi0, H2, dH2, d2H2), name="P2")
    specs["P2"] = ProblemSpec(
        "P2", "phi_t - cos(phi_x + 1) = 0, phi0 = -cos(pi x)", cos_problem,
        (0.5 / PI**2,), (20, 40, 80, 160, 320), "characteristic", shock_1d)
    specs["P7"] = ProblemSpec(
        "P7", "phi_t - cos(phi_x + 1) = 0 after the kink forms", replace(cos_problem, name="P7"),
        (1.5 / PI**2, 3.5 / PI**2), (40, 80), "fine_grid", shock_1d,
        notes="two evaluation times catalogued, 1.5/pi^2 and 3.5/pi^2")

    # P3 / P9: 2D Burgers; diagonal reduction H(p, p) = (2p + 1)^2 / 2
    psi0, dpsi0, d2psi0 = _cos_data(PI / 2)
    burgers2d = HJProblem(
        2, lambda x, y, t, u, v: 0.5 * (u + v + 1) ** 2,
        lambda box: (max_abs_affine(box[0][0] + box[1][0] + 1, box[0][1] + box[1][1] + 1),) * 2,
        ((-2.0, 2.0), (-2.0, 2.0)), lambda x, y: -np.cos(PI * (x + y) / 2), periodic,
        exact=_char_oracle_diag(psi0, dpsi0, d2psi0,
                                lambda p: 0.5 * (2 * p + 1) ** 2,
                                lambda p: 2 * (2 * p + 1),
                                lambda p: 4.0 + 0 * p),
        name="P3")
    specs["P3"] = ProblemSpec(
        "P3", "2D Burgers phi_t + (phi_x + phi_y + 1)^2/2 = 0", burgers2d,
        (0.5 / PI**2,), (20, 40, 80, 160, 320), "characteristic", shock_1d)
    specs["P9"] = ProblemSpec(
        "P9", "2D Burgers after the kink forms", replace(burgers2d, name="P9"),
        (1.5 / PI**2,), (40,), "fine_grid", shock_1d)

    # P4: phi_t - cos(phi_x + phi_y + 1) = 0
    specs["P4"] = ProblemSpec(
        "P4", "phi_t - cos(phi_x + phi_y + 1) = 0", HJProblem(
            2, lambda x, y, t, u, v: -np.cos(u + v + 1),
            lambda box: (max_abs_sin(box[0][0] + box[1][0] + 1, box[0][1] + box[1][1] + 1),) * 2,
            ((-2.0, 2.0), (-2.0, 2.0)), lambda x, y: -np.cos(PI * (x + y) / 2), periodic,
            exact=_char_oracle_diag(psi0, dpsi0, d2psi0,
                                    lambda p: -np.cos(2 * p + 1),
                                    lambda p: 2 * np.sin(2 * p + 1),
                                    lambda p: 4 * np.cos(2 * p + 1)),
            name="P4"),
        (0.5 / PI**2,), (20, 40, 80, 160, 320), "characteristic",
        # |H''(p)| <= 4 and |psi0''| <= pi^2/4 on the diagonal reduction
        shock_1d)

    # P5: linear advection of a profile with kinks
    specs["P5"] = ProblemSpec(
        "P5", "linear advection of a piecewise profile with corners", HJProblem(
            1, lambda x, t, u: u, lambda box: (1.0,), ((-1.0, 1.0),),
            lambda x: _p5_profile(wrap(x - 0.5, -1.0, 1.0)), periodic,
            exact=lambda x, t: exact_linear_advection(x, t, _p5_profile, 0.5),
            alpha_inflation=0.0, name="P5"),
        (2.0, 8.0), (100,), "analytic", math.inf)

    # P6: 1D Burgers
    H6 = lambda p: 0.5 * (p + 1) ** 2  # noqa: E731
    specs["P6"] = ProblemSpec(
        "P6", "1D Burgers phi_t + (phi_x + 1)^2/2 = 0", HJProblem(
            1, lambda x, t, u: 0.5 * (u + 1) ** 2,
            lambda box: (max_abs_affine(box[0][0] + 1, box[0][1] + 1),),
            ((-1.0, 1.0),), phi0, periodic,
            exact=_char_oracle_1d(phi0, dphi0, d2phi0, H6, lambda p: p + 1, lambda p: 1.0 + 0 * p),
            name="P6"),
        (3.5 / PI**2,), (20, 40, 80), "fine_grid", shock_1d)

    # P8: non-convex quartic Hamiltonian
    specs["P8"] = ProblemSpec(
        "P8", "non-convex phi_t + (phi_x^2 - 1)(phi_x^2 - 4)/4 = 0, phi0 = -2|x|", HJProblem(
            1, lambda x, t, u: 0.25 * (u * u - 1) * (u * u - 4),
            lambda box: (_quartic_speed(*box[0]),),
            ((-1.0, 1.0),), lambda x: -2 * np.abs(x), LinearExtrapolation(), name="P8"),
        (1.0,), (100,), "fine_grid")

    # P10: non-convex 2D, Dirichlet data frozen at the initial values
    phi10 = lambda x, y: PI * (np.abs(y) - np.abs(x))  # noqa: E731
    specs["P10"] = ProblemSpec(
        "P10", "non-convex phi_t + sin(phi_x + phi_y) = 0, Dirichlet boundary", HJProblem(
            2, lambda x, y, t, u, v: np.sin(u + v),
            lambda box: (max_abs_cos(box[0][0] + box[1][0], box[0][1] + box[1][1]),) * 2,
            ((-1.0, 1.0), (-1.0, 1.0)), phi10,
            DirichletExact(lambda x, y, t: phi10(x, y)), name="P10"),
        (1.0,), (80,), "fine_grid")

    # P11: optimal control, x/y dependent Hamiltonian; sign(v) v == |v|
    def H11(x, y, t, u, v):
        return np.sin(y) * u + np.sin(x) * v + np.abs(v) - 0.5 * np.sin(y) ** 2 - (1 - np.cos(x))

    specs["P11"] = ProblemSpec(
        "P11", "optimal control problem on [-pi, pi)^2", HJProblem(
            2, H11, lambda box: (1.0, 2.0), ((-PI, PI), (-PI, PI)),
            lambda x, y: np.zeros(np.broadcast(x, y).shape), periodic,
            alpha_inflation=0.0, name="P11"),
        (1.0,), (60,), "fine_grid")

    # P12: eikonal (geometric optics)
    bump = lambda x, y: 0.25 * (np.cos(2 * PI * x) - 1) * (np.cos(2 * PI * y) - 1)  # noqa: E731
    specs["P12"] = ProblemSpec(
        "P12", "2D eikonal phi_t + sqrt(phi_x^2 + phi_y^2 + 1) = 0", HJProblem(
            2, lambda x, y, t, u, v: np.sqrt(u * u + v * v + 1), _eikonal_speeds,
            ((0.0, 1.0), (0.0, 1.0)), lambda x, y: bump(x, y) - 1, periodic, name="P12"),
        (0.6,), (80,), "fine_grid")

    # P13: eikonal with curvature, phi_t - (1 - eps K) sqrt(...) = 0
    specs["P13"] = ProblemSpec(
        "P13", "eikonal with curvature phi_t - (1 - eps K) sqrt(phi_x^2 + phi_y^2 + 1) = 0", HJProblem(
            2, lambda x, y, t, u, v: -np.sqrt(u * u + v * v + 1), _eikonal_speeds,
            ((0.0, 1.0), (0.0, 1.0)), lambda x, y: 1 - bump(x, y), periodic,
            curvature_eps=0.1, name="P13"),
        (0.1,), (60,), "fine_grid",
        notes="evolution time unstated; default t = 0.1, run with eps = 0 and eps = 0.1")
    return specs


_CATALOG = _build_catalog()


def catalog_ids() -> list[str]:
    return sorted(_CATALOG, key=lambda s: int(s[1:]))


def catalog(pid: str, curvature_eps: float | None = None,
            curvature_form: str | None = None) -> ProblemSpec:
    """Look up a benchmark problem by id (``"P1"`` .. ``"P13"``, case-insensitive)."""
    key = pid.strip().upper()
    if key not in _CATALOG:
        raise KeyError(f"unknown problem {pid!r}; expected one of {', '.join(catalog_ids())}")
    spec = _CATALOG[key]
    changes = {}
    if curvature_eps is not None:
        changes["curvature_eps"] = float(curvature_eps)
    if curvature_form is not None:
        changes["curvature_form"] = curvature_form
    if changes:
        spec = replace(spec, problem=replace(spec.problem, **changes))
    return spec


# -- fine-grid references -----------------------------------------------------------

@dataclass
class FineGridReference:
    """WENO solution on a fine grid, sampled onto coarser grids."""

    grid: Grid
    values: np.ndarray
    t: float

    def sample(self, grid: Grid) -> np.ndarray:
        fine_axes = grid_axes(self.grid)
        coarse_axes = grid_axes(grid)
        if len(fine_axes) != len(coarse_axes):
            raise ValueError("dimension mismatch")
        ratios = [f.n // c.n for f, c in zip(fine_axes, coarse_axes)]
        aligned = all(
            f.n % c.n == 0 and math.isclose(f.a, c.a) and math.isclose(f.b, c.b)
            for f, c in zip(fine_axes, coarse_axes))
        if aligned:
            return self.values[tuple(slice(None, None, r) for r in ratios)].copy()
        from scipy.interpolate import RegularGridInterpolator
        interp = RegularGridInterpolator([ax.nodes for ax in fine_axes], self.values,
                                         bounds_error=False, fill_value=None)
        pts = np.meshgrid(*[ax.nodes for ax in coarse_axes], indexing="ij")
        return interp(np.stack([p.ravel() for p in pts], axis=-1)).reshape(pts[0].shape)

    def envelope(self, grid: Grid1D) -> tuple[np.ndarray, np.ndarray]:
        """Min/max of the reference over [x_{i-1}, x_{i+1}] for each coarse node."""
        xf = self.grid.nodes
        lo = np.empty(grid.n)
        hi = np.empty(grid.n)
        tol = 1e-12 * grid.dx
        for i, x in enumerate(grid.nodes):
            sel = (xf >= x - grid.dx - tol) & (xf <= x + grid.dx + tol)
            lo[i] = self.values[sel].min()
            hi[i] = self.values[sel].max()
        return lo, hi


def reference_fine_grid(problem: HJProblem, t: float, n_ref: int,
                        params: WeightParams = WeightParams(), cfl: float = 0.6) -> FineGridReference:
    grid = problem.make_grid(n_ref)
    if t == 0:
        return FineGridReference(grid, problem.initial_field(grid).values.copy(), 0.0)
    sol = integrate(problem, grid, TimeControls(t_final=t, cfl=cfl), params)
    return FineGridReference(grid, sol.field.values.copy(), t)
