# QMR2: voters in superposition, and interference between their terms.

import numpy as np

from qvote import quantum as q
from qvote.constitutions import Profile, Revote, default_basis, qmr2

basis = default_basis(3)
s = 1 / np.sqrt(2)


def vote(terms):
    v = np.zeros(basis.dim, dtype=complex)
    for label, amp in terms.items():
        v[basis.index(label)] = amp
    return q.StateVector(v, basis.dim)


# %% One decided voter and two split voters.
profile = Profile(basis, (
    vote({"a>b>c": 1}),
    vote({"b>a>c": s, "a>c>b": s}),
    vote({"b>a>c": s, "c>b>a": s}),
))
out = qmr2(profile)
print({k: round(v, 4) for k, v in out.distribution.items()})   # bac 2/3, abc 1/6, acb 1/6

# %% Flip one sign. The two routes to b>a>c now cancel.
cancelling = Profile(basis, (
    vote({"a>b>c": 1}),
    vote({"b>a>c": s, "a>c>b": s}),
    vote({"b>a>c": -s, "c>b>a": s}),
))
out = qmr2(cancelling)
print(np.round(out.state.amplitudes, 4))
print({k: round(v, 4) for k, v in out.distribution.items()})

# %% Total cancellation forces a revote.
try:
    qmr2(Profile(basis, (vote({"a>b>c": 1}), vote({"c>b>a": s, "c>a>b": -s}))))
except Revote as exc:
    print("revote, |Xi| =", exc.xi.norm())
