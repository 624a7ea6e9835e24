"""
Unitaries on the circle: windings and U-chain certificates
==========================================================

"""
import numpy as np

from jbstar import ModelDescriptor, build_model, random_unitary
from jbstar.algebra import u_operator
from jbstar.unitary import in_principal_component, winding_number

# C(T, S_2): continuous maps from the circle into symmetric 2x2 matrices,
# sampled at 256 points.
M = build_model(ModelDescriptor.circle(ModelDescriptor.symmetric(2), N=256))

# The unitary w(lambda) = diag(lambda, 1) winds once and so cannot be
# reached from 1 by a chain of U operators.
w = M.from_function(lambda z: np.diag([z, 1.0]))
print("winding of w:", winding_number(w))
print("verdict for w:", in_principal_component(w).status)

# A random unitary exp(ih) is certified principal by an explicit chain
# u = U_{exp(ih_n)} ... U_{exp(ih_1)}(1).
u = random_unitary(M, seed=7, scale=3.0)
verdict = in_principal_component(u)
print("verdict for u:", verdict.status, "| chain length", len(verdict.certificate.hs),
      "| reconstruction error", f"{verdict.error:.1e}")

# U operators by principal unitaries do not change the component
for k in (-2, 0, 1, 3):
    base = M.from_function(lambda z, k=k: np.diag([z ** k, 1.0]))
    moved = u_operator(u, base)
    print(f"winding {k:+d} -> {winding_number(moved):+d} after U_u")
