"""Third-order TVD Runge-Kutta integration and time-step control."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .hamiltonian import (BlowupError, HJProblem, alpha_from_field, one_sided_derivatives,
                          rhs_from_derivatives, rhs)
from .mesh import Grid, ScalarField, fill_ghosts, grid_axes
from .reconstruction import WeightParams

log = logging.getLogger(__name__)

DtMode = Literal["cfl", "accuracy"]

# explicit stability bound for the curvature (parabolic) term
CURVATURE_DT_FACTOR = 0.3


@dataclass(frozen=True)
class TimeControls:
    """Time-step policy.

    ``mode="accuracy"`` shrinks the CFL step by ``(dx/dx_ref)**(2/3)`` so that
    dt scales like ``dx**(5/3)`` and RK3's temporal error keeps pace with the
    fifth-order spatial error.  ``dx_ref`` defaults to the run's own dx.
    """

    t_final: float
    cfl: float = 0.6
    mode: DtMode = "cfl"
    max_steps: int = 1_000_000
    dx_ref: float | None = None

    def __post_init__(self):
        if not 0 < self.cfl <= 1:
            raise ValueError(f"cfl must be in (0, 1], got {self.cfl}")
        if self.t_final < 0:
            raise ValueError(f"t_final must be nonnegative, got {self.t_final}")
        if self.mode not in ("cfl", "accuracy"):
            raise ValueError(f"unknown dt mode {self.mode!r}")


def dt_from_cfl(alphas, spacings, controls: TimeControls, t: float = 0.0,
                curvature_eps: float = 0.0) -> float:
    """Time step from wave speeds, clamped to land on ``controls.t_final``.

    1D: ``cfl dx / alpha``; 2D: ``cfl / (alpha_x/dx + alpha_y/dy)``.
    """
    alphas = tuple(float(a) for a in alphas)
    spacings = tuple(float(h) for h in spacings)
    if any(a < 0 for a in alphas):
        raise ValueError("wave speeds must be nonnegative")
    remaining = controls.t_final - t
    rate = sum(a / h for a, h in zip(alphas, spacings))
    dt = controls.cfl / rate if rate > 0 else np.inf
    if controls.mode == "accuracy" and np.isfinite(dt):
        dx_ref = controls.dx_ref if controls.dx_ref is not None else spacings[0]
        dt *= (spacings[0] / dx_ref) ** (2.0 / 3.0)
    if curvature_eps > 0:
        dt = min(dt, CURVATURE_DT_FACTOR * min(spacings) ** 2 / curvature_eps)
    return float(min(dt, remaining))


def rk3_step(field: ScalarField, dt: float, operator: Callable[[ScalarField, float], np.ndarray],
             t: float, l0: np.ndarray | None = None) -> ScalarField:
    """One Shu-Osher TVD-RK3 step of ``dphi/dt = operator(phi, t)``.

    ``l0`` may carry an already evaluated ``operator(field, t)``.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    p0 = field.values
    L0 = operator(field, t) if l0 is None else l0
    p1 = p0 + dt * L0
    f1 = field.with_values(_finite(p1, 1))
    p2 = 0.75 * p0 + 0.25 * (p1 + dt * operator(f1, t + dt))
    f2 = field.with_values(_finite(p2, 2))
    p3 = p0 / 3 + 2 / 3 * (p2 + dt * operator(f2, t + 0.5 * dt))
    return field.with_values(_finite(p3, 3))


def _finite(values: np.ndarray, stage: int) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        bad = tuple(int(i) for i in np.argwhere(~np.isfinite(values))[0])
        raise BlowupError(f"non-finite value after RK stage {stage} at node {bad}")
    return values


@dataclass
class Solution:
    field: ScalarField
    t: float
    steps: int


def integrate(problem: HJProblem, grid: Grid, controls: TimeControls,
              params: WeightParams = WeightParams(), initial: ScalarField | None = None,
              t0: float = 0.0) -> Solution:
    """Advance ``problem`` from ``t0`` to ``controls.t_final`` on ``grid``.

    The Lax-Friedrichs speeds are recomputed once per step from the
    one-sided derivatives of the current solution and held fixed over the
    three RK stages.
    """
    field = problem.initial_field(grid) if initial is None else initial
    spacings = tuple(ax.dx for ax in grid_axes(grid))
    t = float(t0)
    steps = 0
    t_end = controls.t_final
    # tolerate round-off in the accumulated time
    tiny = 1e-13 * max(1.0, abs(t_end))

    while t_end - t > tiny:
        if steps >= controls.max_steps:
            raise BlowupError(f"max_steps={controls.max_steps} exceeded at t={t:.6g}")
        try:
            filled = fill_ghosts(field, problem.boundary, t)
            derivs = one_sided_derivatives(filled, params)
            alpha = alpha_from_field(problem, derivs)
            dt = dt_from_cfl(alpha, spacings, controls, t, problem.curvature_eps)
            if not dt > 0:
                dt = t_end - t
            l0 = rhs_from_derivatives(filled, problem, derivs, alpha, t)
            op = lambda f, s, _a=alpha: rhs(f, problem, params, s, _a)  # noqa: E731
            field = rk3_step(field, dt, op, t, l0=l0)
        except BlowupError as exc:
            raise BlowupError(f"step {steps + 1} (t={t:.6g}): {exc}") from exc
        steps += 1
        t = t_end if t_end - (t + dt) <= tiny else t + dt
    log.debug("integrated %s to t=%g in %d steps", problem.name or "problem", t, steps)
    return Solution(field, t, steps)
