"""Uniform grids, ghost-padded scalar fields and boundary handling.

Grids are node based and half open: ``n`` nodes at ``a + i*dx`` for
``i = 0..n-1`` with ``dx = (b - a)/n``.  Under periodicity node ``n`` is
identified with node 0, so the seam is never stored twice.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

GHOST_WIDTH = 3
MIN_NODES = 8


@dataclass(frozen=True)
class Grid1D:
    a: float
    b: float
    n: int

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError(f"grid needs b > a, got a={self.a}, b={self.b}")
        if int(self.n) != self.n or self.n < MIN_NODES:
            raise ValueError(f"grid needs an integer n >= {MIN_NODES}, got {self.n}")

    @property
    def dx(self) -> float:
        return (self.b - self.a) / self.n

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def nodes(self) -> np.ndarray:
        return self.a + self.dx * np.arange(self.n)

    def padded_nodes(self, ghost_width: int = GHOST_WIDTH) -> np.ndarray:
        return self.a + self.dx * np.arange(-ghost_width, self.n + ghost_width)


@dataclass(frozen=True)
class Grid2D:
    x_axis: Grid1D
    y_axis: Grid1D

    @property
    def shape(self) -> tuple[int, int]:
        return (self.x_axis.n, self.y_axis.n)

    @property
    def spacing(self) -> tuple[float, float]:
        return (self.x_axis.dx, self.y_axis.dx)

    @property
    def axes(self) -> tuple[Grid1D, Grid1D]:
        return (self.x_axis, self.y_axis)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x_axis.nodes, self.y_axis.nodes, indexing="ij")

    @property
    def measure(self) -> float:
        return self.x_axis.length * self.y_axis.length


Grid = Union[Grid1D, Grid2D]


def make_uniform_grid_1d(a: float, b: float, n: int) -> Grid1D:
    if int(n) != n:
        raise ValueError(f"grid needs an integer n, got {n}")
    return Grid1D(float(a), float(b), int(n))


def make_uniform_grid_2d(ax: float, bx: float, nx: int,
                         ay: float, by: float, ny: int | None = None) -> Grid2D:
    return Grid2D(make_uniform_grid_1d(ax, bx, nx),
                  make_uniform_grid_1d(ay, by, nx if ny is None else ny))


def grid_axes(grid: Grid) -> tuple[Grid1D, ...]:
    return grid.axes if isinstance(grid, Grid2D) else (grid,)


# -- boundary rules ---------------------------------------------------------

@dataclass(frozen=True)
class Periodic:
    pass


@dataclass(frozen=True)
class LinearExtrapolation:
    pass


@dataclass(frozen=True)
class DirichletExact:
    """Ghost values taken from ``oracle(*coords, t)``."""

    oracle: Callable | None = None


BoundaryRule = Union[Periodic, LinearExtrapolation, DirichletExact]


# -- fields -------------------------------------------------------------------

@dataclass(frozen=True)
class ScalarField:
    """Grid samples of phi stored with a ghost layer on every side.

    ``data`` holds the padded array; ``values`` is a view on the interior.
    Ghost entries are meaningless until :func:`fill_ghosts` has been applied.
    """

    grid: Grid
    data: np.ndarray
    ghost_width: int = GHOST_WIDTH

    def __post_init__(self):
        if self.ghost_width < GHOST_WIDTH:
            raise ValueError(f"ghost_width must be >= {GHOST_WIDTH}")
        expected = tuple(ax.n + 2 * self.ghost_width for ax in grid_axes(self.grid))
        if self.data.shape != expected:
            raise ValueError(f"padded shape {self.data.shape} does not match grid {expected}")

    @classmethod
    def from_interior(cls, grid: Grid, values, ghost_width: int = GHOST_WIDTH) -> "ScalarField":
        values = np.asarray(values, dtype=float)
        shape = tuple(ax.n for ax in grid_axes(grid))
        if values.shape != shape:
            raise ValueError(f"interior shape {values.shape} does not match grid {shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("field values must be finite")
        data = np.zeros(tuple(s + 2 * ghost_width for s in shape))
        data[_interior_slices(len(shape), ghost_width)] = values
        return cls(grid, data, ghost_width)

    @classmethod
    def sample(cls, grid: Grid, func: Callable, *args) -> "ScalarField":
        """Sample ``func(x[, y], *args)`` at the interior nodes."""
        if isinstance(grid, Grid2D):
            X, Y = grid.mesh()
            vals = func(X, Y, *args)
        else:
            vals = func(grid.nodes, *args)
        vals = np.broadcast_to(np.asarray(vals, dtype=float), tuple(ax.n for ax in grid_axes(grid)))
        return cls.from_interior(grid, vals)

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def values(self) -> np.ndarray:
        return self.data[_interior_slices(self.ndim, self.ghost_width)]

    def with_values(self, values) -> "ScalarField":
        return ScalarField.from_interior(self.grid, values, self.ghost_width)


def _interior_slices(ndim: int, g: int) -> tuple[slice, ...]:
    return (slice(g, -g),) * ndim


def _as_rules(rule, ndim: int) -> tuple:
    if isinstance(rule, (Periodic, LinearExtrapolation, DirichletExact)):
        return (rule,) * ndim
    rules = tuple(rule)
    if len(rules) != ndim:
        raise ValueError(f"need {ndim} boundary rules, got {len(rules)}")
    return rules


def _pad_axis(arr: np.ndarray, axis: int, g: int, rule, coords: Sequence[np.ndarray],
              t: float) -> np.ndarray:
    """Pad ``arr`` by ``g`` entries on both ends of ``axis``.

    ``coords`` are the coordinate vectors of the *returned* array, one per
    axis, used only by Dirichlet rules.
    """
    arr = np.moveaxis(arr, axis, 0)
    if isinstance(rule, Periodic):
        if g > arr.shape[0]:
            raise ValueError("ghost width exceeds periodic grid length")
        out = np.concatenate([arr[-g:], arr, arr[:g]], axis=0)
    elif isinstance(rule, LinearExtrapolation):
        k = np.arange(1, g + 1).reshape((-1,) + (1,) * (arr.ndim - 1))
        left_slope = arr[0] - arr[1]
        right_slope = arr[-1] - arr[-2]
        left = (arr[0] + k * left_slope)[::-1]
        right = arr[-1] + k * right_slope
        out = np.concatenate([left, arr, right], axis=0)
    elif isinstance(rule, DirichletExact):
        if rule.oracle is None:
            raise ValueError("DirichletExact boundary needs an oracle")
        mesh = np.meshgrid(*coords, indexing="ij")
        exact = np.moveaxis(np.broadcast_to(rule.oracle(*mesh, t), mesh[0].shape), axis, 0)
        out = np.concatenate([exact[:g], arr, exact[-g:]], axis=0)
    else:
        raise TypeError(f"unknown boundary rule {rule!r}")
    return np.moveaxis(out, 0, axis)


def fill_ghosts(field: ScalarField, rule, t: float = 0.0) -> ScalarField:
    """Return a copy of ``field`` whose ghost layers follow ``rule``.

    ``rule`` is a single boundary rule or one rule per axis.  Axes are padded
    in order, so 2D corner ghosts are filled as well.  Only interior values
    are read, which makes the operation idempotent.
    """
    g = field.ghost_width
    axes = grid_axes(field.grid)
    rules = _as_rules(rule, len(axes))
    arr = np.array(field.values)
    for axis, ax_rule in enumerate(rules):
        coords = [ax.padded_nodes(g) if k <= axis else ax.nodes for k, ax in enumerate(axes)]
        arr = _pad_axis(arr, axis, g, ax_rule, coords, t)
    return ScalarField(field.grid, arr, g)
