"""
States, gates and entanglement
==============================

Build density matrices, evolve them with Hadamard and CNOT, and check
purity along the way.
"""

import numpy as np

from qchsh.states import (
    CNOT,
    HADAMARD,
    KET0,
    PHI_PLUS,
    Ensemble,
    density_from_ensemble,
    evolve,
    is_pure,
    max_mixed,
    pure_density,
)

# a single qubit in |0>, rotated by the Hadamard gate into |+>
rho0 = pure_density(KET0)
rho_plus = evolve(HADAMARD, rho0)
print("H |0><0| H^+ =\n", np.round(rho_plus.mat.real, 6))

# two different ensembles give the same mixed state
a = density_from_ensemble(Ensemble(((0.5, KET0), (0.5, [[0], [1]]))))
print("equal mixture of |0>, |1> is 1/2 * identity:", np.allclose(a.mat, max_mixed(2).mat))
print("is it pure?", is_pure(a))

# H on the first qubit then CNOT turns |00> into the Bell state Phi+
bell_circuit = CNOT @ np.kron(HADAMARD, np.eye(2))
rho00 = pure_density(np.kron(KET0, KET0))
rho_bell = evolve(bell_circuit, rho00)
print("circuit output equals Phi+:", np.allclose(rho_bell.mat, pure_density(PHI_PLUS).mat))
print("Bell state is pure:", is_pure(rho_bell))
