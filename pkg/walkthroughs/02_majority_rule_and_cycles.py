# Classical majority rule, its cycles, and how QMR resolves them.

from qvote.constitutions import CycleError, Profile, classical_mr, default_basis, qmr, qmr_basis_term
from qvote.graphs import build_majority_digraph, format_sccs, tarjan_scc
from qvote.prefs import orders_from
from qvote.properties import basis_profiles, run_all

# %% Two voters over four candidates. Tied pairwise counts give edges both ways.
votes = orders_from(["b>a>c>d", "a>c>b>d"])
g = build_majority_digraph(votes)
print(sorted(g.edges))
print(g.two_way_pairs())           # [('a', 'b'), ('b', 'c')]
print(format_sccs(tarjan_scc(g)))  # ({a,b,c}, {d})

# %% QMR mixes over orders that respect the component order and the
# pairs every voter agrees on (here a>c and everyone>d).
basis4 = default_basis(4)
rho = qmr_basis_term(votes, basis4)
print({basis4.labels[i]: round(p, 4) for i, p in enumerate(rho.diag()) if p > 0})

# In the weak basis the tied orders a=b>c>d and a>b=c>d join in.
weak4 = default_basis(4, "weak")
rho = qmr_basis_term(votes, weak4)
print({weak4.labels[i]: round(p, 4) for i, p in enumerate(rho.diag()) if p > 0})

# %% The three-voter Condorcet cycle: classical majority rule has no answer.
cyclic = orders_from(["a>b>c", "c>a>b", "b>c>a"])
try:
    classical_mr(cyclic)
except CycleError as exc:
    print("classical:", exc, exc.report.involved_pairs)
print("tie-breaking policy:", classical_mr(cyclic, "all_equal"))

# QMR answers with the maximally mixed preference.
basis3 = default_basis(3)
print(qmr(Profile.from_orders(basis3, cyclic)).distribution)

# %% Exhaustive postulate checks over all 6^3 basis profiles.
for report in run_all(qmr, basis_profiles(basis3, 3)):
    print(report.format_text())

# QIIA fails for the same reason classical majority rule violates IIA:
# moving c around can create or break a cycle through a and b without
# changing anyone's a-versus-b ranking.
family = basis_profiles(basis3, 3)
for k in (12, 22):
    prof = family[k]
    combo = prof.orders_of(int(prof.joint_probabilities().argmax()))
    print(k, [str(w) for w in combo], format_sccs(tarjan_scc(build_majority_digraph(combo))),
          qmr(prof).distribution)
