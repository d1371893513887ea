# QMR3 and entanglement as a voting tactic.

from collections import Counter

import numpy as np

from qvote import quantum as q
from qvote.constitutions import Profile, default_basis, qmr3_distribution, qmr3_sample
from qvote.prefs import format_order
from qvote.tactics import TacticSpec, build_opposition_pair, compare_tactics, describe_joint

basis = default_basis(3)
alpha, beta = "a>b>c", "c>b>a"
rng = np.random.Generator(np.random.PCG64(7))

# %% Three independent voters, each leaning 2:1 towards alpha.
coeff = {alpha: np.sqrt(2 / 3), beta: np.sqrt(1 / 3)}
independent = TacticSpec("product_profile", basis, per_voter=[coeff] * 3)
print(qmr3_distribution(independent.build()))       # beta wins 7/27 of the time

# %% The same three voters sharing a W-type state: exactly one defects.
coordinated = TacticSpec("w_analog", basis, preferred=alpha, other=beta)
prof = coordinated.build()
print(Counter(format_order(qmr3_sample(prof, rng)) for _ in range(2000)))

cmp = compare_tactics(independent, coordinated, qmr3_distribution)
print("total variation:", round(cmp.tv_distance, 6))

# %% Opposition: the second voter always casts the reverse of the first.
state = build_opposition_pair(basis, {alpha: 1 / np.sqrt(2), beta: 1 / np.sqrt(2)})
print(describe_joint(state, basis))
pairs = Counter()
for t in q.sample(state, rng, size=1000):
    i, j = q.decode_joint(int(t), basis.dim, 2)
    pairs[(basis.labels[int(i)], basis.labels[int(j)])] += 1
print(pairs)

# each voter alone looks like a fair coin between alpha and beta
print(np.round(q.partial_trace(state, 1).diag(), 3))
print(qmr3_distribution(Profile(basis, joint=state)))
