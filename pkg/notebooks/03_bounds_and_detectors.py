"""
Complementarity bounds on random states
=======================================

For two mutually unbiased observables, the realism of both together
can never exceed the information still missing about the subsystem.
Random two-qubit states never break this, and mixing the measured
qubit completely makes it tight.
"""

import numpy as np

from qrealism import interferometer as itf
from qrealism.qmath import DensityOperator, random_density
from qrealism.realism import bound_incompatible, nonseparability_gap, realism

AB = (("A", 2), ("B", 2))
rng = np.random.default_rng(1)
w, p = itf.wave_particle_observables(0.4, "A")

margins = [bound_incompatible(random_density(AB, rng, rank=r), w, p).margin for r in (1, 2, 4) * 100]
print(f"smallest slack over 300 states: {min(margins):.3e}")

rho_b = random_density((("B", 2),), rng)
tight = DensityOperator(np.kron(np.eye(2) / 2, rho_b.matrix), AB)
print(f"slack for I/2 (x) rho_B: {bound_incompatible(tight, w, p).margin:.1e}")

# non-separability (extra irrealism caused by correlations) is at least
# as large as the discord
g = nonseparability_gap(random_density(AB, rng, rank=1), p)
print(f"gap {g.gap:.4f} >= discord {g.discord:.4f}")

# a which-path detector: once it has fired, its particle observable is
# fully real and its wave observable not at all
model = itf.detector_model(theta=0.0)
for k in (0, 1):
    wk, pk = itf.detector_observables(k)
    print(f"detector D{k}: R_P = {realism(model.varsigma, pk):.3f}, R_W = {abs(realism(model.varsigma, wk)):.3f}")
