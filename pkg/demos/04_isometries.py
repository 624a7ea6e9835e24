"""
Decomposing isometries between unitary sets
===========================================

"""
import numpy as np

from jbstar import ModelDescriptor as D, build_model, distance, random_unitary
from jbstar.isometry import (
    build_nonextendable_example,
    decompose_isometry,
    random_structured_isometry,
)

# A random structured isometry on M_2 + S_2 + C: central projection,
# Jordan *-automorphism and up to three exponential prefactors.
M = build_model(D.direct_sum(D.full(2), D.symmetric(2), D.full(1)))
delta = random_structured_isometry(M, seed=5)
print("prefactors:", len(delta.prefactors), "| p diagonal:", np.round(delta.p.data[0].diagonal().real, 3))

# Treat it as a black box on unitaries and rebuild it from one-parameter groups
rec = decompose_isometry(lambda u: delta(u), M)
print("recovered p diagonal:", np.round(rec.p.data[0].diagonal().real, 3))
rng = np.random.default_rng(0)
err = max(distance(rec(u), delta(u)) for u in (random_unitary(M, rng, 2.0) for _ in range(50)))
print("round trip on 50 unitaries:", f"{err:.1e}")

# On the circle the unitary set is disconnected, and gluing U_1 on the
# principal component to U_{exp(0.7i)} elsewhere gives an isometry that no
# single real-linear map extends.
ex = build_nonextendable_example(D.circle(D.full(1)))
print(ex.verify(pairs=40))
