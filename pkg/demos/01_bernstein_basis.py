"""Tour of the Bernstein basis: values, derivatives, and the properties that
make the interior members good trial functions for two-point problems."""
import numpy as np

from galbern import BernsteinBasis

basis = BernsteinBasis(5, (0.0, 1.0))
print(f"degree {basis.degree} family on {basis.interval}")
print(f"interior (endpoint-vanishing) members: {basis.interior_indices()}\n")

print("values of all six members at x = 0.3:")
for i in range(6):
    print(f"  B_{i}(0.3) = {basis.eval(i, 0.3):.6f}")

xs = np.linspace(0.0, 1.0, 1000)
total = sum(basis.eval(i, xs) for i in range(6))
print(f"\npartition of unity: max |sum - 1| over 1000 points = {np.max(np.abs(total - 1)):.2e}")

print("\ninterior members vanish at both ends:")
for i in basis.interior_indices():
    print(f"  B_{i}(0) = {basis.eval(i, 0.0):.1e}   B_{i}(1) = {basis.eval(i, 1.0):.1e}")

print("\nclosed-form derivatives up to third order (member 2 at x = 0.4):")
for order in (1, 2, 3):
    print(f"  order {order}: {basis.eval_deriv(2, 0.4, order):+.6f}")

# the family is interval-invariant: a member on [a, b] is the unit-interval
# member evaluated at the mapped coordinate
shifted = BernsteinBasis(5, (-2.0, 3.0))
x = 0.5  # maps to t = 0.5 on [0, 1]
print("\ninterval invariance, member 3 at the midpoint:")
print(f"  on [-2, 3]: {shifted.eval(3, x):.12f}")
print(f"  on [0, 1]:  {basis.eval(3, (x + 2) / 5):.12f}")
