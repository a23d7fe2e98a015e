"""
Realism of an observable
========================

How much does a state already look as if an observable had a definite
value? Dephase in the observable's eigenbasis and count the entropy that
appears. No new entropy means the value was already "real".
"""

import numpy as np

from qrealism import DensityOperator, ProjectiveObservable, irrealism, realism
from qrealism.realism import discord, mutual_information

AB = (("A", 2), ("B", 2))

# |+> on A and |0> on B: definite in the X basis, maximally undefined in Z
plus_zero = DensityOperator.from_ket(np.kron([1, 1], [1, 0]) / np.sqrt(2), AB)
z_a = ProjectiveObservable.from_basis("A", [[1, 0], [0, 1]])
x_a = ProjectiveObservable.from_basis("A", [[1, 1], [1, -1]])

print("|+>|0>   realism of Z_A:", round(realism(plus_zero, z_a), 6))
print("|+>|0>   realism of X_A:", round(realism(plus_zero, x_a), 6))

# entanglement hides every local value: a Bell pair has zero realism for
# both bases, and the missing bit shows up as correlations
bell = DensityOperator.from_ket(np.array([1, 0, 0, 1]) / np.sqrt(2), AB)
print("Bell     irrealism of Z_A:", round(irrealism(bell, z_a), 6))
print("Bell     mutual information:", round(mutual_information(bell), 6))
print("Bell     discord (A measured):", round(discord(bell, "A").value, 6))

# the classical mixture of |00> and |11> keeps the correlations but makes
# Z_A real again
mix = DensityOperator(np.diag([0.5, 0, 0, 0.5]), AB)
print("mixture  realism of Z_A:", round(realism(mix, z_a), 6))
print("mixture  discord:", round(discord(mix, "A").value, 6))
