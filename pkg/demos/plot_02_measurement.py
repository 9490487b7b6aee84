"""
Projective measurements
=======================

Turn an observable into a projective measurement, read off outcome
probabilities, collapse the state and correlate two qubits.
"""

import numpy as np

from qchsh.measurement import collapse, expect_value, joint_distribution, make_pm, outcome_probs, sample_outcome
from qchsh.rng import RngState
from qchsh.states import KET0, PAULI_Z, PHI_PLUS, PLUS, pure_density

z = make_pm(PAULI_Z)
print("outcome values of Z:", z.values)

plus = pure_density(PLUS)
print("P(+1), P(-1) on |+>:", outcome_probs(plus, z))
print("<Z> on |+>:", expect_value(plus, z))

# after observing +1 the state is |0><0|
after = collapse(plus, z.outcomes[0].projector)
print("post-measurement state:\n", np.round(after.mat.real, 6))

# measuring Z on both halves of Phi+ gives perfectly correlated outcomes
joint = joint_distribution(pure_density(PHI_PLUS), z, z)
for a, b, p in joint.entries:
    print(f"  P({a:+.0f}, {b:+.0f}) = {p:.3f}")

# sampling is deterministic in the generator state
state = RngState(seed=2024)
draws = []
for _ in range(10):
    (a, b), state = sample_outcome(joint, state)
    draws.append((int(a), int(b)))
print("ten joint draws:", draws)
print("never anti-correlated:", all(a == b for a, b in draws))
print("single-qubit <Z> on |0>:", expect_value(pure_density(KET0), z))
