"""Gauss-Legendre rules: construction, polynomial exactness, and the default
order used by the Galerkin assembly."""
import math

import numpy as np

from galbern import default_order, gauss_legendre, integrate

rule = gauss_legendre(4, 0.0, 1.0)
print("4-point rule on [0, 1]:")
for x, w in zip(rule.points, rule.weights):
    print(f"  node {x:.15f}  weight {w:.15f}")
print(f"weights sum to {np.sum(rule.weights):.15f} (the interval length)\n")

# a G-point rule integrates polynomials through degree 2G - 1 exactly
print("integrating x^k with the 4-point rule (exact through k = 7):")
for k in (6, 7, 8):
    approx = integrate(lambda x: x**k, rule)
    exact = 1.0 / (k + 1)
    print(f"  k = {k}: error {abs(approx - exact):.2e}")

print("\nsmooth non-polynomial integrands converge spectrally:")
for G in (4, 8, 16):
    err = abs(integrate(math.exp, gauss_legendre(G, 0.0, 1.0)) - (math.e - 1.0))
    print(f"  e^x with G = {G:2d}: error {err:.2e}")

print("\nassembly default order max(24, 2n) by trial degree:")
for n in (3, 5, 11, 13):
    print(f"  degree {n:2d} -> G = {default_order(n)}")
print("(keeps 2G - 1 >= 3n, so every assembled polynomial integrand is exact)")
