# Preferences, bases and voter states.
#
# Run with: python walkthroughs/01_preferences_and_states.py

import numpy as np

from qvote import quantum as q
from qvote.prefs import CandidateSet, Mode, Relation, enumerate_basis, parse_order

# %% A preference is a weak order: tiers of tied candidates, best first.
w = parse_order("c>b=a>d")
print(w)                       # canonical text sorts within tiers: c>a=b>d
print(w.relation("a", "b"))    # Relation.EQ
print(w.relation("c", "d"))    # Relation.GT

# %% Bases. Strict mode keeps the M! rankings, weak mode every weak order.
cands = CandidateSet.first(3)
strict = enumerate_basis(cands, Mode.STRICT)
weak = enumerate_basis(cands, Mode.WEAK)
print(strict.dim, weak.dim)    # 6 13
print(strict.labels)

# subspace of orders ranking a above b
print([strict.labels[i] for i in strict.subspace_indices("a", "b", Relation.GT)])

# %% A voter's quantum preference is a state on the basis.
amps = np.zeros(strict.dim, dtype=complex)
amps[strict.index("a>b>c")] = 0.6
amps[strict.index("c>b>a")] = 0.8j
voter = q.StateVector(amps, strict.dim)
rho = voter.density()
print(np.round(rho.matrix[[0, 5]][:, [0, 5]], 3))

# dephasing keeps the populations and forgets the coherence
print(np.round(q.phase_damp(rho).diag(), 3))

# %% Two voters: tensor them, then recover each by partial trace.
other = q.ket(strict.dim, strict.index("b>a>c"))
joint = q.tensor([voter, other])
print(joint.dim)                                   # 36
print(np.allclose(q.partial_trace(joint, 0).matrix, rho.matrix))

# Born sampling is seeded; PCG64 makes draws portable across platforms.
rng = np.random.Generator(np.random.PCG64(2016))
draws = q.sample(voter, rng, size=10)
print([strict.labels[i] for i in draws])
