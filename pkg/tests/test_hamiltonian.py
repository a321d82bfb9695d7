import numpy as np
import pytest

from hjweno.hamiltonian import (BlowupError, HJProblem, alpha_from_field, curvature, curvature_term,
                                lax_friedrichs_1d, lax_friedrichs_2d, one_sided_derivatives, rhs, rhs_1d,
                                rhs_2d)
from hjweno.mesh import (DirichletExact, LinearExtrapolation, Periodic, ScalarField, fill_ghosts,
                         make_uniform_grid_1d, make_uniform_grid_2d)
from hjweno.problems import catalog, catalog_ids
from hjweno.reconstruction import WeightParams

from . import checks, oracles


def burgers_1d(**kw):
    return HJProblem(1, lambda x, t, u: 0.5 * (u + 1) ** 2,
                     lambda box: (max(abs(box[0][0] + 1), abs(box[0][1] + 1)),),
                     ((-1.0, 1.0),), lambda x: -np.cos(np.pi * x), Periodic(), **kw)


def burgers_2d_embedding(**kw):
    return HJProblem(2, lambda x, y, t, u, v: 0.5 * (u + 1) ** 2 + 0.25 * v * v,
                     lambda box: (max(abs(box[0][0] + 1), abs(box[0][1] + 1)),
                                  0.5 * max(abs(box[1][0]), abs(box[1][1]))),
                     ((-1.0, 1.0), (0.0, 1.0)), lambda x, y: -np.cos(np.pi * x) + 0 * y, Periodic(), **kw)


def test_lf_examples():
    H = lambda u: u * u  # noqa: E731
    assert lax_friedrichs_1d(H, 2.0, 2.0, 5.0) == 4.0
    assert lax_friedrichs_1d(H, 1.0, -1.0, 2.0) == pytest.approx(0.0 - 2.0)
    G = lambda u, v: u + v  # noqa: E731
    assert lax_friedrichs_2d(G, 1.0, 0.0, 3.0, 1.0, 1.0, 2.0) == pytest.approx(0.5 + 2.0 - 0.5 - 2.0)


def test_lf_consistency_every_catalog_hamiltonian():
    assert checks.lf_consistency() < 1e-14


@pytest.mark.parametrize("pid", catalog_ids())
def test_lf_monotone_when_alpha_bounds_speed(pid):
    prob = catalog(pid).problem
    rng = np.random.default_rng(int(pid[1:]))
    lo, hi = -2.0, 2.0
    box = ((lo, hi),) * prob.dimension
    alphas = prob.alpha_bound(box)
    h = 1e-6
    for _ in range(200):
        x, y = rng.uniform(-1, 1, 2)
        um, up, vm, vp = rng.uniform(lo + h, hi - h, 4)
        if prob.dimension == 1:
            H = lambda u: prob.hamiltonian(x, 0.0, u)  # noqa: E731
            f = lambda a, b: lax_friedrichs_1d(H, a, b, alphas[0])  # noqa: E731
            assert f(up + h, um) - f(up, um) <= 1e-12
            assert f(up, um + h) - f(up, um) >= -1e-12
        else:
            H = lambda u, v: prob.hamiltonian(x, y, 0.0, u, v)  # noqa: E731
            f = lambda a, b, c, d: lax_friedrichs_2d(H, a, b, c, d, *alphas)  # noqa: E731
            base = f(up, um, vp, vm)
            assert f(up + h, um, vp, vm) - base <= 1e-12
            assert f(up, um + h, vp, vm) - base >= -1e-12
            assert f(up, um, vp + h, vm) - base <= 1e-12
            assert f(up, um, vp, vm + h) - base >= -1e-12


@pytest.mark.parametrize("pid", catalog_ids())
def test_alpha_bound_monotone_in_box(pid):
    prob = catalog(pid).problem
    small = ((-0.3, 0.2),) * prob.dimension
    large = ((-1.5, 1.1),) * prob.dimension
    s, big = np.atleast_1d(prob.alpha_bound(small)), np.atleast_1d(prob.alpha_bound(large))
    assert np.all(s >= 0) and np.all(big >= s - 1e-15)


def test_alpha_from_field_inflates_box_bound():
    prob = burgers_1d()
    g = prob.make_grid(40)
    derivs = one_sided_derivatives(fill_ghosts(prob.initial_field(g), Periodic()), WeightParams())
    lo = min(d.min() for d in derivs[0])
    hi = max(d.max() for d in derivs[0])
    (alpha,) = alpha_from_field(prob, derivs)
    assert alpha == pytest.approx(1.1 * max(abs(lo + 1), abs(hi + 1)))
    (alpha0,) = alpha_from_field(burgers_1d(alpha_inflation=0.0), derivs)
    assert alpha0 == pytest.approx(max(abs(lo + 1), abs(hi + 1)))


def test_alpha_bound_shape_checked():
    prob = HJProblem(1, lambda x, t, u: u, lambda box: (1.0, 2.0), ((0.0, 1.0),), lambda x: x, Periodic())
    g = prob.make_grid(8)
    derivs = one_sided_derivatives(fill_ghosts(prob.initial_field(g), Periodic()), WeightParams())
    with pytest.raises(ValueError):
        alpha_from_field(prob, derivs)


def test_rhs_1d_converges_to_minus_hamiltonian():
    prob = burgers_1d()
    hs, errs = [], []
    for n in (20, 40, 80, 160):
        g = prob.make_grid(n)
        f = prob.initial_field(g)
        exact = -0.5 * (np.pi * np.sin(np.pi * g.nodes) + 1) ** 2
        errs.append(np.abs(rhs_1d(f, prob, WeightParams(), 0.0) - exact).max())
        hs.append(g.dx)
    assert oracles.observed_slope(hs, errs) >= 4.7


def test_rhs_2d_embeds_rhs_1d():
    p1, p2 = burgers_1d(), burgers_2d_embedding()
    g1 = p1.make_grid(32)
    g2 = p2.make_grid(32, 10)
    f1 = p1.initial_field(g1)
    f2 = p2.initial_field(g2)
    r1 = rhs_1d(f1, p1, WeightParams(), 0.0)
    r2 = rhs_2d(f2, p2, WeightParams(), 0.0)
    assert np.abs(r2 - r1[:, None]).max() < 1e-12


def test_rhs_dimension_guards():
    with pytest.raises(ValueError):
        rhs_2d(burgers_1d().initial_field(burgers_1d().make_grid(16)), burgers_1d(), WeightParams(), 0.0)


def test_rhs_raises_blowup_on_nonfinite():
    prob = HJProblem(1, lambda x, t, u: np.where(u > 0, np.inf, u), lambda box: (1.0,), ((-1.0, 1.0),),
                     lambda x: np.sin(np.pi * x), Periodic())
    with pytest.raises(BlowupError):
        rhs(prob.initial_field(prob.make_grid(16)), prob, WeightParams(), 0.0)


# -- curvature ---------------------------------------------------------------------------

def _quadratic_field(n=12):
    g = make_uniform_grid_2d(-1, 1, n, -1, 1)
    a, b, c, d, e = 0.7, -0.4, 0.3, 0.5, -0.2
    phi = lambda x, y: a * x * x + b * y * y + c * x * y + d * x + e * y  # noqa: E731
    f = fill_ghosts(ScalarField.sample(g, phi), DirichletExact(lambda x, y, t: phi(x, y)))
    X, Y = g.mesh()
    px, py = 2 * a * X + c * Y + d, 2 * b * Y + c * X + e
    return f, (px, py, 2 * a, 2 * b, c)


@pytest.mark.parametrize("form", ["printed", "canonical"])
def test_curvature_exact_for_quadratics(form):
    f, (px, py, pxx, pyy, pxy) = _quadratic_field()
    K, S = curvature(f, form)
    if form == "printed":
        ref = oracles.curvature_printed(px, py, pxx, pyy, pxy)
    else:
        ref = (pxx * (1 + py**2) - 2 * pxy * px * py + pyy * (1 + px**2)) / (px**2 + py**2 + 1) ** 1.5
    assert np.allclose(K, ref, rtol=1e-10, atol=1e-12)
    assert np.allclose(S, np.sqrt(px**2 + py**2 + 1), rtol=1e-12)


def test_curvature_paraboloid_at_origin():
    g = make_uniform_grid_2d(-1, 1, 10, -1, 1)
    phi = lambda x, y: (x * x + y * y) / 2  # noqa: E731
    f = fill_ghosts(ScalarField.sample(g, phi), Periodic())
    K, _ = curvature(f)
    assert K[5, 5] == pytest.approx(2.0, rel=1e-12)


def test_curvature_of_plane_is_zero():
    g = make_uniform_grid_2d(0, 1, 10, 0, 1)
    f = fill_ghosts(ScalarField.sample(g, lambda x, y: 0.3 * x - 2 * y), LinearExtrapolation())
    K, _ = curvature(f)
    assert np.abs(K).max() < 1e-11
    assert not curvature_term(f, 0.0).any()


def test_curvature_term_sign():
    f, (px, py, pxx, pyy, pxy) = _quadratic_field()
    ref = -0.1 * oracles.curvature_printed(px, py, pxx, pyy, pxy) * np.sqrt(px**2 + py**2 + 1)
    assert np.allclose(curvature_term(f, 0.1), ref, rtol=1e-10)
    with pytest.raises(ValueError):
        curvature_term(f, -1.0)


def test_curvature_only_in_2d():
    with pytest.raises(ValueError):
        burgers_1d(curvature_eps=0.1)


def test_grid_factory_matches_domain():
    prob = burgers_2d_embedding()
    g = prob.make_grid(20, 8)
    assert g.shape == (20, 8)
    assert g.spacing == pytest.approx((0.1, 0.125))
    assert make_uniform_grid_1d(-1, 1, 20) == burgers_1d().make_grid(20)
