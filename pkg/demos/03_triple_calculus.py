"""
Triple functional calculus and the generalized inverse
======================================================

"""
import numpy as np

from jbstar import ModelDescriptor, build_model
from jbstar.algebra import q_operator, triple_product
from jbstar.spectral import (
    generalized_inverse,
    is_positive_invertible_in_peirce2,
    random_regular,
    range_tripotent,
    triple_functional_calculus,
    triple_spectrum,
)

M = build_model(ModelDescriptor.full(3))

# A rank-two element: its triple spectrum is the set of nonzero singular values
a = random_regular(M, seed=11, deficiency=1)
print("triple spectrum:", np.round(triple_spectrum(a).values, 4))

# Cube root through the calculus: {r, r, r} = a
r = triple_functional_calculus(np.cbrt, a)
print("cube root residual:", (triple_product(r, r, r) - a).norm())

# a-dagger inverts a on its range: Q(a)(a-dagger) = a
ad = generalized_inverse(a)
print("Q(a) a-dagger - a:", (q_operator(a, ad) - a).norm())
print("matches pinv(a)* :", np.allclose(ad.data[0], np.linalg.pinv(a.data[0]).conj().T))

# The range tripotent is the partial isometry of the polar decomposition
e = range_tripotent(a).e
print("{e,e,e} - e:", (triple_product(e, e, e) - e).norm())
print("a positive invertible in the Peirce-2 part of e:", is_positive_invertible_in_peirce2(a, e))
