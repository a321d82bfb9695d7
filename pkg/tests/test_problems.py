import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hjweno.mesh import DirichletExact, LinearExtrapolation, Periodic, make_uniform_grid_1d
from hjweno.problems import (FineGridReference, _p5_profile, catalog, catalog_ids, characteristic_solution,
                             max_abs_cos, max_abs_sin, reference_fine_grid)
from hjweno.timestepper import TimeControls, integrate

PI = math.pi


def test_catalog_ids_and_roundtrip():
    ids = catalog_ids()
    assert ids == [f"P{k}" for k in range(1, 14)]
    for pid in ids:
        spec = catalog(pid)
        assert spec.id == pid
        assert catalog(pid.lower()) == spec
        assert spec.final_times and spec.grids
        assert spec.reference in ("analytic", "characteristic", "fine_grid")


def test_catalog_unknown_id():
    with pytest.raises(KeyError):
        catalog("P14")


def test_catalog_overrides_curvature():
    spec = catalog("P13", curvature_eps=0.0, curvature_form="canonical")
    assert spec.problem.curvature_eps == 0.0
    assert spec.problem.curvature_form == "canonical"
    assert catalog("P13").problem.curvature_eps == 0.1


def test_catalog_boundary_rules_and_speeds():
    assert isinstance(catalog("P8").problem.boundary, LinearExtrapolation)
    assert isinstance(catalog("P10").problem.boundary, DirichletExact)
    assert isinstance(catalog("P12").problem.boundary, Periodic)
    p11 = catalog("P11").problem
    assert tuple(p11.alpha_bound(((-9, 9), (-9, 9)))) == (1.0, 2.0)
    assert p11.alpha_inflation == 0.0


def test_catalog_times():
    assert catalog("P2").final_times == (0.5 / PI**2,)
    assert catalog("P7").final_times == (1.5 / PI**2, 3.5 / PI**2)
    assert catalog("P5").final_times == (2.0, 8.0)
    assert catalog("P3").problem.domain == ((-2.0, 2.0), (-2.0, 2.0))


def test_oracle_validity_window():
    spec = catalog("P2")
    assert spec.oracle_at(0.5 / PI**2) is not None
    assert spec.oracle_at(1.5 / PI**2) is None
    assert catalog("P12").oracle_at(0.6) is None
    assert catalog("P1").oracle_at(100.0) is not None


# -- oracle residuals --------------------------------------------------------------------

def _d(f, x, h):
    """Fourth-order central difference."""
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)


@pytest.mark.parametrize("pid,H", [
    ("P1", lambda u: u),
    ("P2", lambda u: -np.cos(u + 1)),
    ("P6", lambda u: 0.5 * (u + 1) ** 2),
])
def test_1d_oracle_pde_residual(pid, H):
    exact = catalog(pid).problem.exact
    rng = np.random.default_rng(int(pid[1:]))
    x = rng.uniform(-0.95, 0.95, 50)
    t = 0.5 / PI**2
    h = 1e-4
    phi_t = _d(lambda s: exact(x, s), t, h)
    phi_x = _d(lambda s: exact(s, t), x, h)
    assert np.abs(phi_t + H(phi_x)).max() < 1e-8


@pytest.mark.parametrize("pid,H", [
    ("P3", lambda u, v: 0.5 * (u + v + 1) ** 2),
    ("P4", lambda u, v: -np.cos(u + v + 1)),
])
def test_2d_oracle_pde_residual(pid, H):
    exact = catalog(pid).problem.exact
    rng = np.random.default_rng(int(pid[1:]))
    x, y = rng.uniform(-1.9, 1.9, (2, 50))
    t = 0.5 / PI**2
    h = 1e-4
    phi_t = _d(lambda s: exact(x, y, s), t, h)
    phi_x = _d(lambda s: exact(s, y, t), x, h)
    phi_y = _d(lambda s: exact(x, s, t), y, h)
    assert np.abs(phi_t + H(phi_x, phi_y)).max() < 1e-8


def test_p5_oracle_is_shifted_profile():
    exact = catalog("P5").problem.exact
    x = np.linspace(-1, 1, 41)[:-1]
    assert np.allclose(exact(x, 2.0), catalog("P5").problem.initial(x), atol=1e-12)
    assert np.allclose(exact(x, 0.3), catalog("P5").problem.initial(x - 0.3), atol=1e-12)


@pytest.mark.parametrize("x0", [-1 / 3, 0.0, 1 / 3])
def test_p5_profile_continuous_at_branch_points(x0):
    e = 1e-10
    assert _p5_profile(x0 - e) == pytest.approx(_p5_profile(x0 + e), abs=1e-8)


def test_p5_profile_periodic_seam():
    assert _p5_profile(-1.0) == pytest.approx(_p5_profile(1.0 - 1e-14), abs=1e-10)


# -- characteristics ------------------------------------------------------------------

def test_characteristics_at_time_zero():
    x = np.linspace(-1, 1, 11)
    out = characteristic_solution(lambda s: np.sin(s), np.cos, lambda p: p * p, lambda p: 2 * p, x, 0.0)
    assert np.array_equal(out, np.sin(x))


def test_characteristics_burgers_implicit_solution():
    # phi0 = x^2/2, H = p^2/2: phi = x^2 / (2 (1 + t))
    x = np.linspace(-3, 3, 31)
    t = 0.7
    out = characteristic_solution(lambda s: 0.5 * s * s, lambda s: s, lambda p: 0.5 * p * p, lambda p: p, x, t)
    assert np.allclose(out, x * x / (2 * (1 + t)), rtol=1e-13, atol=1e-15)


def test_characteristics_newton_without_second_derivatives():
    spec = catalog("P2")
    x = np.linspace(-1, 1, 33)
    with_d2 = spec.problem.exact(x, 0.05)
    without = characteristic_solution(lambda s: -np.cos(PI * s), lambda s: PI * np.sin(PI * s),
                                      lambda p: -np.cos(p + 1), lambda p: np.sin(p + 1), x, 0.05)
    assert np.allclose(with_d2, without, atol=1e-13)


@pytest.mark.parametrize("t", [1.01 / PI**2, 2.0 / PI**2])
def test_characteristics_reject_crossed_rays(t):
    for x in (np.linspace(-1, 1, 41), np.array([0.0])):
        with pytest.raises(ValueError):
            catalog("P6").problem.exact(x, t)


def test_characteristics_accept_times_before_crossing():
    x = np.linspace(-1, 1, 41)
    assert np.all(np.isfinite(catalog("P6").problem.exact(x, 0.99 / PI**2)))


def test_characteristic_oracle_agrees_with_fine_solve():
    spec = catalog("P2")
    t = 0.5 / PI**2
    g = spec.problem.make_grid(640)
    sol = integrate(spec.problem, g, TimeControls(t, mode="accuracy", dx_ref=0.1))
    assert np.abs(sol.field.values - spec.problem.exact(g.nodes, t)).max() < 1e-8


# -- speed helpers -------------------------------------------------------------------

@given(st.floats(-10, 10), st.floats(0, 8))
def test_max_abs_sin_matches_sampling(lo, width):
    hi = lo + width
    s = np.linspace(lo, hi, 20001)
    assert max_abs_sin(lo, hi) >= np.abs(np.sin(s)).max() - 1e-12
    assert max_abs_sin(lo, hi) <= np.abs(np.sin(s)).max() + 1e-6
    assert max_abs_cos(lo, hi) == pytest.approx(np.abs(np.cos(s)).max(), abs=1e-6)


@pytest.mark.parametrize("pid", catalog_ids())
def test_alpha_bound_dominates_sampled_speed(pid):
    prob = catalog(pid).problem
    rng = np.random.default_rng(100 + int(pid[1:]))
    box = ((-1.7, 0.9),) * prob.dimension
    alphas = np.atleast_1d(prob.alpha_bound(box))
    h = 1e-6
    x, y = rng.uniform(-1, 1, (2, 500))
    u, v = rng.uniform(-1.7, 0.9, (2, 500))
    if prob.dimension == 1:
        du = (prob.hamiltonian(x, 0.0, u + h) - prob.hamiltonian(x, 0.0, u - h)) / (2 * h)
        assert np.abs(du).max() <= alphas[0] + 1e-6
    else:
        H = prob.hamiltonian
        du = (H(x, y, 0.0, u + h, v) - H(x, y, 0.0, u - h, v)) / (2 * h)
        dv = (H(x, y, 0.0, u, v + h) - H(x, y, 0.0, u, v - h)) / (2 * h)
        assert np.abs(du).max() <= alphas[0] + 1e-6
        assert np.abs(dv).max() <= alphas[1] + 1e-6


# -- fine-grid references ---------------------------------------------------------------

def test_fine_grid_sample_aligned_and_interpolated():
    g_fine = make_uniform_grid_1d(-1, 1, 80)
    ref = FineGridReference(g_fine, np.sin(PI * g_fine.nodes), 0.0)
    g = make_uniform_grid_1d(-1, 1, 20)
    assert np.array_equal(ref.sample(g), np.sin(PI * g_fine.nodes[::4]))
    g_off = make_uniform_grid_1d(-1, 1, 30)
    assert np.allclose(ref.sample(g_off), np.sin(PI * g_off.nodes), atol=2e-3)


def test_fine_grid_envelope_brackets_neighbourhood():
    g_fine = make_uniform_grid_1d(-1, 1, 80)
    ref = FineGridReference(g_fine, g_fine.nodes.copy(), 0.0)
    g = make_uniform_grid_1d(-1, 1, 20)
    lo, hi = ref.envelope(g)
    assert np.allclose(lo[1:], g.nodes[1:] - g.dx)
    assert np.allclose(hi[:-1], g.nodes[:-1] + g.dx)


def test_reference_fine_grid_at_zero_time_is_initial_data():
    spec = catalog("P8")
    ref = reference_fine_grid(spec.problem, 0.0, 64)
    assert np.array_equal(ref.values, -2 * np.abs(ref.grid.nodes))
