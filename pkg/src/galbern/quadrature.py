"""Gauss-Legendre quadrature on [a, b].

Nodes are the roots of the Legendre polynomial P_G, found by Newton iteration
from the usual cosine initial guesses and polished to 1e-15; weights follow
from w = 2 / ((1 - t^2) P_G'(t)^2).  A G-point rule integrates polynomials of
degree <= 2G - 1 exactly, which is what the Galerkin assembly relies on.
"""

from dataclasses import dataclass

import numpy as np

from .errors import QuadratureOrderError

MAX_ORDER = 64


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights on some interval (a, b).

    points are strictly increasing and strictly inside the interval; weights
    are positive and sum to b - a.  Instances are immutable and safe to share.
    """

    points: np.ndarray
    weights: np.ndarray
    order: int

    def __post_init__(self):
        self.points.setflags(write=False)
        self.weights.setflags(write=False)


def _legendre_and_deriv(G, t):
    """P_G(t) and P_G'(t) via the three-term recurrence, vectorized in t."""
    p_prev = np.zeros_like(t)
    p = np.ones_like(t)
    for k in range(1, G + 1):
        p_prev, p = p, ((2 * k - 1) * t * p - (k - 1) * p_prev) / k
    dp = G * (t * p - p_prev) / (t * t - 1.0)
    return p, dp


def gauss_legendre(G, a, b):
    """G-point Gauss-Legendre rule mapped affinely to [a, b].

    Args:
        G: number of nodes, 1 <= G <= 64.
        a, b: interval endpoints, a < b.

    Raises:
        QuadratureOrderError: G above the supported cap.
        ValueError: G < 1 or a >= b.
    """
    if G < 1:
        raise ValueError(f"quadrature order must be >= 1, got {G}")
    if G > MAX_ORDER:
        raise QuadratureOrderError(f"order {G} exceeds the supported cap {MAX_ORDER}")
    if not b > a:
        raise ValueError(f"interval must satisfy a < b, got ({a}, {b})")

    if G == 1:
        t = np.array([0.0])
        w = np.array([2.0])
    else:
        # roots in (0, 1]; the rest follow by symmetry
        k = np.arange(G // 2)
        t = np.cos(np.pi * (k + 0.75) / (G + 0.5))
        for _ in range(100):
            p, dp = _legendre_and_deriv(G, t)
            dt = p / dp
            t = t - dt
            if np.max(np.abs(dt)) < 1e-15:
                break
        _, dp = _legendre_and_deriv(G, t)
        w_half = 2.0 / ((1.0 - t * t) * dp * dp)
        if G % 2:
            p0, dp0 = _legendre_and_deriv(G, np.array([0.0]))
            t = np.concatenate([-t, [0.0], t[::-1]])
            w = np.concatenate([w_half, 2.0 / (dp0 * dp0), w_half[::-1]])
        else:
            t = np.concatenate([-t, t[::-1]])
            w = np.concatenate([w_half, w_half[::-1]])

    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return QuadratureRule(points=mid + half * t, weights=half * w, order=G)


def integrate(f, rule):
    """Apply the rule: sum of w_k f(x_k).

    f is called once per node with a float argument; exceptions it raises
    propagate unchanged.
    """
    return float(sum(w * f(float(x)) for x, w in zip(rule.points, rule.weights)))


def default_order(degree):
    """Assembly default: max(24, 2n) keeps 2G-1 >= 3n with margin, so every
    polynomial integrand that assembly produces is integrated exactly."""
    return max(24, 2 * degree)
