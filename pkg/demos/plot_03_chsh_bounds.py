"""
CHSH bounds
===========

The CHSH expectation under four hypotheses: a local hidden-variable model,
a separable state, a commuting pair of observables, and no hypothesis at
all, where the quantum maximum 2 sqrt 2 is reached.
"""

import numpy as np

from qchsh import random_instances as ri
from qchsh.chsh import ChshConfig, canonical_config, check_bound, chsh_expect, norm_chain, separable_example
from qchsh.lhv import classical_max, lhv_from_separable

cfg, singlet = canonical_config()
print("canonical value on the singlet:", chsh_expect(cfg, singlet))

rep = check_bound(cfg, singlet, "general")
print(f"general bound {rep.applicable_bound:.6f}, margin {rep.margin:.2e}")

# the norm argument behind the general bound
chain = norm_chain(cfg)
print("||S||^2 =", chain["norm_S_squared"], "<= 4 + ||[A0,A1]|| ||[B0,B1]|| =",
      4 + chain["norm_comm_A"] * chain["norm_comm_B"])

rep = check_bound(cfg, separable_example(), "separable")
print("separable |+>|+>:", rep.expectation, "bound", rep.applicable_bound)

a0, _, b0, b1 = cfg.local
rep = check_bound(ChshConfig.local_tensor(a0, a0, b0, b1), singlet, "commuting")
print("A1 = A0 on the singlet:", rep.expectation, "bound", rep.applicable_bound)

print("best deterministic classical strategy:", classical_max())

# random separable states never beat 2, and their hidden-variable models agree
rng = np.random.default_rng(0)
worst = 0.0
for _ in range(200):
    local = ri.random_local_config(rng, 2, 2)
    model = lhv_from_separable(ri.random_separable_decomposition(rng, 2, 2), local)
    assert model.check()
    worst = max(worst, abs(model.chsh_value()))
print(f"largest |C| over 200 random separable models: {worst:.4f}")
