"""Quadrature engines: adaptive Gauss-Legendre panels on complex segments,
plus a Gauss-Jacobi panel for algebraic endpoint behaviour.

All integrands handled here are analytic on their paths, so fixed-order
panels with bisection on a straddle estimate converge geometrically; the
absolute error budget is split between the two halves at every split.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ToleranceError

_NODE_CACHE: dict = {}


def _nodes(n: int):
    try:
        return _NODE_CACHE[n]
    except KeyError:
        pair = np.polynomial.legendre.leggauss(n)
        _NODE_CACHE[n] = pair
        return pair


def gl_panel(f, a, b, order: int = 20) -> complex:
    """Single Gauss-Legendre panel on the straight segment from a to b."""
    x, w = _nodes(order)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return half * complex(np.sum(w * f(mid + half * x)))


def integrate_segment(f, a, b, tol_abs: float, order: int = 20, max_depth: int = 48) -> complex:
    """Adaptive integral of a vectorized integrand along a straight segment."""
    total = 0j
    stack = [(a, b, gl_panel(f, a, b, order), float(tol_abs), 0)]
    while stack:
        a0, b0, coarse, tol0, depth = stack.pop()
        mid = 0.5 * (a0 + b0)
        left = gl_panel(f, a0, mid, order)
        right = gl_panel(f, mid, b0, order)
        err = abs(coarse - left - right)
        if not math.isfinite(err):
            raise ToleranceError(f"integrand not finite on [{a0}, {b0}]")
        if err <= tol0 or depth >= max_depth:
            if depth >= max_depth and err > 10.0 * tol0:
                raise ToleranceError(
                    f"quadrature stalled on [{a0}, {b0}] with error estimate {err:.3e}"
                )
            total += left + right
        else:
            stack.append((a0, mid, left, 0.5 * tol0, depth + 1))
            stack.append((mid, b0, right, 0.5 * tol0, depth + 1))
    return total


def integrate_chain(f, points, tol_abs: float, order: int = 20) -> complex:
    """Adaptive integral along the polyline through ``points``."""
    pts = list(points)
    if len(pts) < 2:
        raise ValueError("need at least two points")
    budget = float(tol_abs) / (len(pts) - 1)
    total = 0j
    for a, b in zip(pts, pts[1:]):
        total += integrate_segment(f, a, b, budget, order)
    return total


def jacobi_panel(g, a, b, exponent: float, order: int = 48) -> complex:
    """integral_a^b (t - a)^exponent g(t) dt for smooth g and exponent > -1.

    Gauss-Jacobi nodes absorb the algebraic endpoint factor exactly.
    """
    from scipy.special import roots_jacobi

    if exponent <= -1:
        raise ValueError("endpoint exponent must exceed -1")
    x, w = roots_jacobi(order, 0.0, float(exponent))
    h = (b - a) / 2.0
    t = a + h * (x + 1.0)
    return h ** (float(exponent) + 1.0) * complex(np.sum(w * g(t)))
