"""Bernstein polynomial basis on an arbitrary interval, with exact derivatives.

The degree-n basis over [a, b] is

    B_i(x) = C(n, i) (x - a)^i (b - x)^(n-i) / (b - a)^n,   i = 0..n.

The interior members i = 1..n-1 vanish at both endpoints, which makes them
the trial space for two-point problems whose endpoint values are carried by
a separate offset polynomial.  Derivatives are closed-form (product rule on
the two power factors), never finite differences, so Galerkin integrands
built from them stay exact polynomials.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

MAX_DEGREE = 30

# slack for quadrature nodes that land a round-off outside the interval
_CLAMP_TOL = 1e-12


def _binom(n, i):
    """Binomial coefficient by the multiplicative formula, in floating point."""
    i = min(i, n - i)
    out = 1.0
    for t in range(1, i + 1):
        out *= (n - i + t) / t
    return out


def _falling(m, r):
    """Falling factorial m (m-1) ... (m-r+1); zero when r > m."""
    out = 1.0
    for t in range(r):
        out *= m - t
    return out


@dataclass(frozen=True)
class BernsteinBasis:
    """Degree and interval of a Bernstein family.

    Attributes:
        degree: polynomial degree n, 3 <= n <= 30.
        interval: (a, b) with a < b.
    """

    degree: int
    interval: tuple

    def __post_init__(self):
        n = self.degree
        a, b = self.interval
        if not isinstance(n, int) or n < 3:
            raise ValueError(f"degree must be an integer >= 3, got {n!r}")
        if n > MAX_DEGREE:
            raise ValueError(f"degree {n} exceeds the supported cap {MAX_DEGREE}")
        if not (np.isfinite(a) and np.isfinite(b) and b > a):
            raise ValueError(f"interval must satisfy a < b, got {self.interval!r}")
        object.__setattr__(self, "interval", (float(a), float(b)))

    @property
    def a(self):
        return self.interval[0]

    @property
    def b(self):
        return self.interval[1]

    def interior_indices(self):
        """Indices of the members vanishing at both endpoints: [1, ..., n-1]."""
        return list(range(1, self.degree))

    def _checked(self, x):
        """Validate x against [a, b], clamping round-off overshoot."""
        a, b = self.interval
        x = np.asarray(x, dtype=float)
        tol = _CLAMP_TOL * max(1.0, abs(a), abs(b))
        if np.any(x < a - tol) or np.any(x > b + tol):
            bad = x[(x < a - tol) | (x > b + tol)] if x.ndim else x
            raise DomainError(f"x = {bad} outside [{a}, {b}]")
        return np.clip(x, a, b)

    def _eval(self, i, x, k):
        """k-th derivative of member i at x (x validated, k >= 0)."""
        n = self.degree
        a, b = self.interval
        if i < 0 or i > n:
            return np.zeros_like(x)
        scale = _binom(n, i) / (b - a) ** n
        u = x - a
        v = b - x
        # d^k/dx^k [u^i v^(n-i)] expanded by the product rule; terms whose
        # falling factorial vanishes would otherwise raise 0 to a negative power
        total = np.zeros_like(x)
        for r in range(k + 1):
            s = k - r
            if r > i or s > n - i:
                continue
            coef = _binom(k, r) * ((-1.0) ** s) * _falling(i, r) * _falling(n - i, s)
            total = total + coef * u ** (i - r) * v ** (n - i - s)
        return scale * total

    def eval(self, i, x):
        """Value of member i at x; zero for i outside 0..n.

        x may be a scalar or an ndarray inside [a, b] (a 1e-12 overshoot is
        clamped); anything further out raises DomainError.
        """
        xv = self._checked(x)
        out = self._eval(i, xv, 0)
        return float(out) if np.isscalar(x) or out.ndim == 0 else out

    def eval_deriv(self, i, x, order):
        """Exact derivative of member i at x, order in {1, 2, 3}."""
        if order not in (1, 2, 3):
            raise ValueError(f"derivative order must be 1, 2 or 3, got {order!r}")
        xv = self._checked(x)
        out = self._eval(i, xv, order)
        return float(out) if np.isscalar(x) or out.ndim == 0 else out

    def interior_table(self, x, order=0):
        """Matrix of interior members at the points x.

        Returns shape (n-1, len(x)); row j-1 holds the order-th derivative of
        member j.  Used by the assembly routines, which need all members at
        all quadrature nodes at once.
        """
        xv = self._checked(np.atleast_1d(x))
        return np.array([self._eval(j, xv, order) for j in self.interior_indices()])
