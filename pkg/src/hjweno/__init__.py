"""Fifth-order WENO finite-difference solvers for Hamilton-Jacobi equations.

Two nonlinear-weight variants are available: ``weno-l``, whose smoothness
indicators are squared arc lengths of the candidate reconstructions, and the
classical ``weno-jp``.
"""

from .hamiltonian import BlowupError, HJProblem, rhs, rhs_1d, rhs_2d
from .harness import ConvergenceTable, ErrorPair, convergence_study, emit_solution, emit_table, error_norms
from .mesh import (DirichletExact, Grid1D, Grid2D, LinearExtrapolation, Periodic, ScalarField,
                   fill_ghosts, make_uniform_grid_1d, make_uniform_grid_2d)
from .problems import ProblemSpec, catalog, catalog_ids
from .reconstruction import WeightParams, params_for_scheme, weno_derivative_pair, weno_derivatives
from .timestepper import Solution, TimeControls, integrate

__version__ = "0.1.0"

__all__ = [
    "BlowupError", "ConvergenceTable", "DirichletExact", "ErrorPair", "Grid1D", "Grid2D", "HJProblem",
    "LinearExtrapolation", "Periodic", "ProblemSpec", "ScalarField", "Solution", "TimeControls",
    "WeightParams", "catalog", "catalog_ids", "convergence_study", "emit_solution", "emit_table",
    "error_norms", "fill_ghosts", "integrate", "make_uniform_grid_1d", "make_uniform_grid_2d",
    "params_for_scheme", "rhs", "rhs_1d", "rhs_2d", "weno_derivative_pair", "weno_derivatives",
]
