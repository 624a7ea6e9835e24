"""
Jordan products, U operators and isotopes
=========================================

"""
import numpy as np

from jbstar import ModelDescriptor, build_model, random_element, random_unitary
from jbstar.algebra import (
    involution,
    jordan_product,
    triple_from_product,
    triple_product,
    u_operator,
    unitary_isotope,
)
from jbstar.checks import corrupted_ops, run_identity_suite

# Complex symmetric 3x3 matrices are closed under a o b = (ab + ba)/2
# but not under the matrix product.
S3 = build_model(ModelDescriptor.symmetric(3))
a = random_element(S3, seed=1)
b = random_element(S3, seed=2)
print("a o b symmetric:", np.allclose(jordan_product(a, b).data, jordan_product(a, b).data.swapaxes(-1, -2)))
print("ab symmetric:   ", np.allclose(a.data @ b.data, (a.data @ b.data).swapaxes(-1, -2)))

# U_a(x) = a x a stays inside, so does the triple product
x = random_element(S3, seed=3)
print("||U_a(a*)|| - ||a||^3 =", u_operator(a, involution(a)).norm() - a.norm() ** 3)

# The isotope M(u) has a different product and involution but the same
# triple product.
u = random_unitary(S3, seed=4, scale=2.0)
Mu = unitary_isotope(u)
t_u = triple_from_product(Mu.product, Mu.star, a, b, x)
print("triple product of M(u) vs M:", (t_u - triple_product(a, b, x)).norm())

# The full identity suite, then the same suite with a broken involution
for result in run_identity_suite(S3, samples=50, seed=0):
    print(f"  {result.name:34s} {result.max_residual:.1e}  {'ok' if result.passed else 'FAIL'}")

broken = run_identity_suite(S3, samples=10, seed=0, ops=corrupted_ops("involution"))
print("checks caught by a transpose-only involution:", [r.name for r in broken if not r.passed])
