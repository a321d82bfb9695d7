"""Fifth-order WENO approximation of phi_x for Hamilton-Jacobi equations.

All stencil data are stacked along axis 0 so the same code handles a single
node (``window.shape == (7,)``) and a whole sweep (``(7, n, ...)``).  A
window holds phi at offsets -3..+3 around node i; its forward differences
``u_j = (phi_{j+1} - phi_j)/dx`` are the cell averages of phi_x on the six
cells i-3..i+2.

The left-biased value uses cells i-3..i+1, the right-biased one cells
i-2..i+2.  The right-biased side is always obtained by reflecting the data
about x_i (``phi_hat_m = phi_{2i-m}``), running the left-biased machinery and
negating, so both sides share one implementation.

Two smoothness indicator families are provided:

``"arclength"``
    beta_k is the squared arc length, over the cell adjacent to x_i, of the
    quadratic that reconstructs phi_x on sub-stencil k.
``"jp"``
    the classical Jiang-Peng indicators (Jiang-Shu quadratic forms applied
    to the divided differences).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

Indicator = Literal["arclength", "jp"]

LINEAR_WEIGHTS = (0.1, 0.6, 0.3)

# rows: candidate k, columns: u_{i-3}..u_{i+1}
_CANDIDATE_COEFFS = np.array([
    [1 / 3, -7 / 6, 11 / 6, 0.0, 0.0],
    [0.0, -1 / 6, 5 / 6, 1 / 3, 0.0],
    [0.0, 0.0, 1 / 3, 5 / 6, -1 / 6],
])
_BIG_STENCIL_COEFFS = np.array([1 / 30, -13 / 60, 47 / 60, 9 / 20, -1 / 20])

# band in which the c == 0 branch of the arc-length primitive is used
_SMALL_C = 1e-12


@dataclass(frozen=True)
class WeightParams:
    epsilon: float = 1e-6
    linear_weights: tuple[float, float, float] = LINEAR_WEIGHTS
    indicator: Indicator = "arclength"

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if abs(sum(self.linear_weights) - 1.0) > 1e-14 or min(self.linear_weights) < 0:
            raise ValueError(f"linear weights must be nonnegative and sum to 1, got {self.linear_weights}")
        if self.indicator not in ("arclength", "jp"):
            raise ValueError(f"unknown smoothness indicator {self.indicator!r}")


SCHEMES = {
    "weno-l": "arclength",
    "weno-jp": "jp",
}


def params_for_scheme(scheme: str, epsilon: float = 1e-6) -> WeightParams:
    """Map a scheme tag (``weno-l`` / ``weno-jp``) to weight parameters."""
    try:
        indicator = SCHEMES[scheme.lower()]
    except KeyError:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {sorted(SCHEMES)}") from None
    return WeightParams(epsilon=epsilon, indicator=indicator)


def _stack(a) -> np.ndarray:
    return np.asarray(a, dtype=float)


def _contract(coeffs: np.ndarray, u: np.ndarray) -> np.ndarray:
    return np.tensordot(coeffs, u, axes=([-1], [0]))


def reflect_differences(u) -> np.ndarray:
    """Divided differences of the data mirrored about x_i.

    Mirroring maps the plus-side cells i-2..i+2 onto the minus-side cells
    i-3..i+1 in reversed order with flipped sign.
    """
    return -_stack(u)[::-1]


def forward_differences(window, dx: float) -> np.ndarray:
    """``(phi_{j+1} - phi_j)/dx`` along axis 0."""
    if not dx > 0:
        raise ValueError(f"dx must be positive, got {dx}")
    return np.diff(_stack(window), axis=0) / dx


# -- candidates ---------------------------------------------------------------

def candidates_minus(u) -> np.ndarray:
    """Third-order left-biased candidates from ``u_{i-3}..u_{i+1}``."""
    return _contract(_CANDIDATE_COEFFS, _stack(u))


def candidates_plus(u) -> np.ndarray:
    """Third-order right-biased candidates from ``u_{i-2}..u_{i+2}``.

    Candidate k uses the mirror image of minus-side sub-stencil k, so the
    linear weights apply unchanged.
    """
    return -candidates_minus(reflect_differences(u))


def big_stencil_derivative_minus(u) -> np.ndarray:
    """Fifth-order left-biased phi_x from ``u_{i-3}..u_{i+1}``."""
    return _contract(_BIG_STENCIL_COEFFS, _stack(u))


def big_stencil_derivative_plus(u) -> np.ndarray:
    return -big_stencil_derivative_minus(reflect_differences(u))


# -- arc-length indicators --------------------------------------------------------

def poly_coefficients_from_differences(u, dx: float) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients ``b_k, c_k`` of the left-biased candidate quadratics.

    ``p_k(x) = a_k + b_k x + c_k x**2`` in local coordinates (x_i = 0), where
    p_k has the prescribed averages on the three cells of sub-stencil k.
    Input is ``u_{i-3}..u_{i+1}``; outputs have a leading axis of length 3.
    """
    u = _stack(u)
    u0, u1, u2, u3, u4 = u[0], u[1], u[2], u[3], u[4]
    c = np.stack([
        (u0 - 2 * u1 + u2),
        (u1 - 2 * u2 + u3),
        (u2 - 2 * u3 + u4),
    ]) / (2 * dx * dx)
    b = np.stack([
        (u0 - 3 * u1 + 2 * u2),
        (u3 - u2),
        (u3 - u2),
    ]) / dx
    return b, c


def poly_coefficients(window, dx: float, side: str = "minus") -> tuple[np.ndarray, np.ndarray]:
    """``(b, c)`` of the candidate quadratics of a 7-point phi window.

    For ``side="plus"`` the coefficients are those of the reflected data,
    i.e. of ``x -> -p(-x)`` for the right-biased candidate polynomial.
    """
    u = forward_differences(window, dx)
    if side == "minus":
        return poly_coefficients_from_differences(u[:5], dx)
    if side == "plus":
        return poly_coefficients_from_differences(reflect_differences(u[1:]), dx)
    raise ValueError(f"side must be 'minus' or 'plus', got {side!r}")


def arc_length_primitive(b, c, z):
    """Antiderivative of ``sqrt(1 + (b + 2 c z)**2)`` in z.

    Direct form with a c == 0 branch; subtracting two values of it loses
    accuracy when c is small, :func:`arc_length` does not.
    """
    b, c, z = np.broadcast_arrays(_stack(b), _stack(c), _stack(z))
    s = b + 2 * c * z
    with np.errstate(divide="ignore", invalid="ignore"):
        curved = (s * np.sqrt(s * s + 1) + np.arcsinh(s)) / (4 * c)
    return np.where(c == 0, np.sqrt(1 + b * b) * z, curved)


def _asinhc(x):
    """asinh(x)/x, continuous at 0."""
    x2 = x * x
    small = x2 < 1e-8
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.arcsinh(x) / x
    return np.where(small, 1 - x2 / 6, ratio)


def arc_length(b, c, z0, z1):
    """Arc length of ``p(z) = a + b z + c z**2`` over [z0, z1].

    Returns ``int_{z0}^{z1} sqrt(1 + (b + 2 c z)**2) dz``.

    The textbook difference of primitives divides by c and cancels badly for
    small c or large slopes.  When the slopes s0, s1 at both ends share a
    sign the difference is rationalised so that the factor ``s1 - s0 = 2 c dz``
    cancels analytically; when they straddle zero the plain difference has no
    cancellation.
    """
    b, c, z0, z1 = np.broadcast_arrays(_stack(b), _stack(c), _stack(z0), _stack(z1))
    dz = z1 - z0
    s0 = b + 2 * c * z0
    s1 = b + 2 * c * z1
    r0 = np.sqrt(1 + s0 * s0)
    r1 = np.sqrt(1 + s1 * s1)

    flat = np.abs(c) * (np.abs(z0) + np.abs(z1) + 1) < _SMALL_C * (1 + np.abs(b))
    same = (s0 * s1 > 0) & ~flat
    cross = ~same & ~flat

    out = np.sqrt(1 + b * b) * dz
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        ssum = s0 + s1
        d1 = s1 * r1 + s0 * r0
        d2 = s1 * r0 + s0 * r1
        x = 2 * c * dz * ssum / d2
        rationalised = 0.5 * dz * ssum * ((1 + s0 * s0 + s1 * s1) / d1 + _asinhc(x) / d2)
    out = np.where(same, rationalised, out)
    if np.any(cross):
        a0, a1, q0, q1, cc = s0[cross], s1[cross], r0[cross], r1[cross], c[cross]
        out[cross] = (a1 * q1 - a0 * q0 + np.arcsinh(a1) - np.arcsinh(a0)) / (4 * cc)
    return out[()] if out.ndim == 0 else out


def smoothness_arclength_from_differences(u, dx: float) -> np.ndarray:
    """Squared arc length of each left-biased candidate over [x_{i-1}, x_i]."""
    b, c = poly_coefficients_from_differences(u, dx)
    return arc_length(b, c, -dx, 0.0) ** 2


def smoothness_arclength(window, dx: float, side: str = "minus") -> np.ndarray:
    """Arc-length indicators from a 7-point phi window.

    The plus side measures the mirrored cell [x_i, x_{i+1}].
    """
    u = forward_differences(window, dx)
    if side == "minus":
        return smoothness_arclength_from_differences(u[:5], dx)
    if side == "plus":
        return smoothness_arclength_from_differences(reflect_differences(u[1:]), dx)
    raise ValueError(f"side must be 'minus' or 'plus', got {side!r}")


# -- classical indicators ---------------------------------------------------------

def _jp_minus(u) -> np.ndarray:
    u0, u1, u2, u3, u4 = u[0], u[1], u[2], u[3], u[4]
    return np.stack([
        13 / 12 * (u0 - 2 * u1 + u2) ** 2 + 0.25 * (u0 - 4 * u1 + 3 * u2) ** 2,
        13 / 12 * (u1 - 2 * u2 + u3) ** 2 + 0.25 * (u1 - u3) ** 2,
        13 / 12 * (u2 - 2 * u3 + u4) ** 2 + 0.25 * (3 * u2 - 4 * u3 + u4) ** 2,
    ])


def smoothness_classical(u, side: str = "minus") -> np.ndarray:
    """Jiang-Peng indicators from the five divided differences of one side.

    ``u`` is ``u_{i-3}..u_{i+1}`` for the minus side and ``u_{i-2}..u_{i+2}``
    for the plus side.
    """
    u = _stack(u)
    if side == "minus":
        return _jp_minus(u)
    if side == "plus":
        return _jp_minus(reflect_differences(u))
    raise ValueError(f"side must be 'minus' or 'plus', got {side!r}")


# -- weights and the fused derivative -------------------------------------------

def nonlinear_weights(beta, params: WeightParams = WeightParams()) -> np.ndarray:
    beta = _stack(beta)
    d = np.asarray(params.linear_weights).reshape((3,) + (1,) * (beta.ndim - 1))
    alpha = d / (params.epsilon + beta) ** 2
    return alpha / alpha.sum(axis=0)


def _minus_side(u, dx: float, params: WeightParams) -> np.ndarray:
    q = candidates_minus(u)
    if params.indicator == "arclength":
        beta = smoothness_arclength_from_differences(u, dx)
    else:
        beta = _jp_minus(u)
    return np.sum(nonlinear_weights(beta, params) * q, axis=0)


def weno_derivatives(phi, dx: float, params: WeightParams = WeightParams()) -> tuple[np.ndarray, np.ndarray]:
    """One-sided WENO derivatives along axis 0 of a ghost-padded array.

    ``phi`` has 3 ghost entries on each end of axis 0 (other axes are carried
    along); the result covers the ``len(phi) - 6`` interior nodes.
    Returns ``(phi_x_minus, phi_x_plus)``.
    """
    phi = _stack(phi)
    n = phi.shape[0] - 6
    if n < 1:
        raise ValueError("need at least 7 entries along the sweep axis")
    u = forward_differences(phi, dx)
    minus = _minus_side(np.stack([u[k:k + n] for k in range(5)]), dx, params)
    mirrored = np.stack([-u[5 - k:5 - k + n] for k in range(5)])
    plus = -_minus_side(mirrored, dx, params)
    return minus, plus


def weno_derivative_pair(window, dx: float, params: WeightParams = WeightParams()):
    """``(phi_x_minus, phi_x_plus)`` at the centre of a 7-point window."""
    window = _stack(window)
    if window.shape[0] != 7:
        raise ValueError(f"window must have 7 entries along axis 0, got {window.shape[0]}")
    minus, plus = weno_derivatives(window, dx, params)
    return minus[0], plus[0]


def weights_for_window(window, dx: float, params: WeightParams = WeightParams(),
                       side: str = "minus") -> np.ndarray:
    """Nonlinear weights used on one side of a 7-point window (diagnostics)."""
    u = forward_differences(window, dx)
    u_side = u[:5] if side == "minus" else reflect_differences(u[1:])
    if params.indicator == "arclength":
        beta = smoothness_arclength_from_differences(u_side, dx)
    else:
        beta = _jp_minus(u_side)
    return nonlinear_weights(beta, params)
