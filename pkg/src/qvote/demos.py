"""Named reproductions of the worked examples, used by ``qvote demo``.

Each demo prints expected and computed values with the tolerance used and
returns whether every comparison held.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import quantum as q
from .constitutions import (
    Profile,
    Revote,
    classical_mr,
    default_basis,
    qmr,
    qmr2,
    qmr3_distribution,
    qmr3_sample,
    qmr_basis_term,
)
from .graphs import build_majority_digraph, format_sccs, tarjan_emission, tarjan_scc
from .prefs import format_order, orders_from, reverse_order
from .properties import arrow_disproof, describe_counterexample
from .tactics import TacticSpec, build_opposition_pair, build_party_line, build_w_analog, compare_tactics, split_voters_profile

ALPHA, BETA = "a>b>c", "c>b>a"
S2 = 1 / np.sqrt(2)


class Checker:
    def __init__(self, out, demo: str):
        self.out = out
        self.demo = demo
        self.ok = True

    def value(self, name: str, expected: float, computed: float, tol: float) -> None:
        good = abs(expected - computed) <= tol
        self.ok &= good
        self.out.text(f"  [{'ok' if good else 'MISMATCH'}] {name}: expected {expected:.12f}, computed {computed:.12f} (tol {tol:g})")
        self.out.record({
            "record": "compare", "demo": self.demo, "name": name, "expected": float(expected),
            "computed": float(computed), "tolerance": tol, "ok": bool(good),
        })

    def fact(self, name: str, expected, computed) -> None:
        good = expected == computed
        self.ok &= good
        self.out.text(f"  [{'ok' if good else 'MISMATCH'}] {name}: expected {expected}, computed {computed}")
        self.out.record({
            "record": "compare", "demo": self.demo, "name": name, "expected": str(expected),
            "computed": str(computed), "ok": bool(good),
        })

    def distribution(self, expected: dict[str, float], computed: dict[str, float], tol: float) -> None:
        for k in sorted(set(expected) | set(computed)):
            self.value(f"Pr[{k}]", expected.get(k, 0.0), computed.get(k, 0.0), tol)


def _samples(args, default: int) -> int:
    return args.samples if getattr(args, "samples", None) else default


def _seed(args, default: int = 2016) -> int:
    s = getattr(args, "seed", None)
    return default if s is None else s


def demo_majority_digraph(out, args) -> bool:
    """Majority digraph and SCCs of the votes b>a>c>d, a>c>b>d."""
    c = Checker(out, "majority-digraph")
    votes = orders_from(["b>a>c>d", "a>c>b>d"])
    g = build_majority_digraph(votes)
    out.text("edges: " + " ".join(f"{u}->{v}" for u, v in sorted(g.edges)))
    c.fact("two-way pairs", [("a", "b"), ("b", "c")], g.two_way_pairs())
    c.fact("Tarjan emission order", "({d}, {a,b,c})", format_sccs(tuple(tarjan_emission(g.nodes, g.successors))))
    c.fact("preference order", "({a,b,c}, {d})", format_sccs(tarjan_scc(g)))
    if getattr(args, "dot", False):
        out.text(g.to_dot("majority"))
    return c.ok


def demo_basis_term(out, args) -> bool:
    """QMR's basis term for b>a>c>d, a>c>b>d (uniform over the surviving orders)."""
    c = Checker(out, "basis-term")
    mode = getattr(args, "mode", "strict")
    basis = default_basis(4, mode)
    rho = qmr_basis_term(orders_from(["b>a>c>d", "a>c>b>d"]), basis)
    computed = {basis.labels[i]: p for i, p in enumerate(rho.diag()) if p > 1e-15}
    if mode == "strict":
        expected = dict.fromkeys(["a>b>c>d", "b>a>c>d", "a>c>b>d"], 1 / 3)
    else:
        expected = dict.fromkeys(["a>b>c>d", "b>a>c>d", "a>c>b>d", "a=b>c>d", "a>b=c>d"], 1 / 5)
    c.distribution(expected, computed, q.EXACT_TOL)
    c.value("off-diagonal norm", 0.0, float(np.abs(rho.matrix - np.diag(rho.matrix.diagonal())).max()), q.EXACT_TOL)
    return c.ok


def demo_arrow_disproof(out, args) -> bool:
    """QMR on the cyclic profile, plus the four postulate checks on the exhaustive family."""
    c = Checker(out, "arrow-disproof")
    mode = getattr(args, "mode", "strict")
    rec = arrow_disproof(mode)
    dim = 6 if mode == "strict" else 13
    for k, v in sorted(rec.distribution.items()):
        c.value(f"Pr[{k}]", 1 / dim, v, q.EXACT_TOL)
    c.fact("dictators on the cyclic profile", [], rec.cyclic_dictatorship.dictators)
    for r in rec.family_reports:
        c.fact(f"{r.name} on {r.family}", "pass", "pass" if r.passed else "fail")
        if r.counterexample is not None:
            out.text(f"    counterexample: {describe_counterexample(r.counterexample)}")
    for rec_line in rec.to_records():
        if rec_line["record"] == "arrow_disproof":
            out.record(rec_line)
    out.text("disproof holds" if rec.holds else "disproof not certified: " + "; ".join(rec.failures))
    return c.ok


def _pure(basis, amps: dict[str, complex]) -> q.StateVector:
    v = np.zeros(basis.dim, dtype=complex)
    for k, a in amps.items():
        v[basis.index(k)] = a
    return q.StateVector(v, basis.dim)


def interference_profile(basis=None) -> Profile:
    basis = basis or default_basis(3)
    return Profile(basis, (
        _pure(basis, {"a>b>c": 1}),
        _pure(basis, {"b>a>c": S2, "a>c>b": S2}),
        _pure(basis, {"b>a>c": S2, "c>b>a": S2}),
    ))


def cancellation_profile(basis=None) -> Profile:
    basis = basis or default_basis(3)
    return Profile(basis, (
        _pure(basis, {"a>b>c": 1}),
        _pure(basis, {"b>a>c": S2, "a>c>b": S2}),
        _pure(basis, {"b>a>c": -S2, "c>b>a": S2}),
    ))


def revote_profile(basis=None) -> Profile:
    """Two voters whose interfering terms cancel: a>b>c and (c>b>a - c>a>b)/sqrt2."""
    basis = basis or default_basis(3)
    return Profile(basis, (_pure(basis, {"a>b>c": 1}), _pure(basis, {"c>b>a": S2, "c>a>b": -S2})))


def demo_interference(out, args) -> bool:
    """QMR2 on the interference profile: society's distribution {bac: 2/3, abc: 1/6, acb: 1/6}."""
    c = Checker(out, "interference")
    res = qmr2(interference_profile())
    c.distribution({"b>a>c": 2 / 3, "a>b>c": 1 / 6, "a>c>b": 1 / 6}, res.distribution, q.EXACT_TOL)
    basis = res.basis
    xi = res.xi.amplitudes
    for k, v in {"b>a>c": 1.0, "a>b>c": 0.5, "a>c>b": 0.5}.items():
        c.value(f"Xi[{k}]", v, float(xi[basis.index(k)].real), q.EXACT_TOL)
    return c.ok


def demo_cancellation(out, args) -> bool:
    """QMR2 with one flipped sign: the relative phase removes b>a>c; output (|abc> - |acb>)/sqrt2."""
    c = Checker(out, "cancellation")
    res = qmr2(cancellation_profile())
    basis = res.basis
    expected = np.zeros(basis.dim, dtype=complex)
    expected[basis.index("a>b>c")] = S2
    expected[basis.index("a>c>b")] = -S2
    c.fact("equal up to global phase (tol 1e-12)", True, q.equal_up_to_phase(res.state.amplitudes, expected))
    c.value("Pr[b>a>c]", 0.0, res.distribution.get("b>a>c", 0.0), q.EXACT_TOL)
    c.distribution({"a>b>c": 0.5, "a>c>b": 0.5}, res.distribution, q.EXACT_TOL)
    return c.ok


def demo_revote(out, args) -> bool:
    """A two-voter pure profile whose QMR2 terms cancel exactly."""
    c = Checker(out, "revote")
    try:
        qmr2(revote_profile())
        c.fact("revote", True, False)
    except Revote as exc:
        c.fact("revote", True, True)
        c.value("|Xi|", 0.0, exc.xi.norm(), q.EXACT_TOL)
    return c.ok


def demo_w_state(out, args) -> bool:
    """QMR3 on the W-type entangled state never elects the minority order."""
    c = Checker(out, "w-state")
    basis = default_basis(3)
    prof = Profile(basis, joint=build_w_analog(basis, ALPHA, BETA))
    dist = qmr3_distribution(prof)
    c.value(f"Pr[{BETA}] (exact)", 0.0, dist.get(BETA, 0.0), 0.0)
    c.value(f"Pr[{ALPHA}] (exact)", 1.0, dist.get(ALPHA, 0.0), q.EXACT_TOL)
    n = _samples(args, 10_000)
    rng = np.random.Generator(np.random.PCG64(_seed(args)))
    hits = sum(format_order(qmr3_sample(prof, rng)) == BETA for _ in range(n))
    c.fact(f"{BETA} in {n} samples", 0, hits)
    return c.ok


def demo_split_voters(out, args) -> bool:
    """QMR3 on three independent sqrt(2/3)|alpha> + sqrt(1/3)|beta> voters."""
    c = Checker(out, "split-voters")
    basis = default_basis(3)
    prof = split_voters_profile(basis, ALPHA, BETA)
    dist = qmr3_distribution(prof)
    c.value(f"Pr[{BETA}] (exact)", 7 / 27, dist.get(BETA, 0.0), q.EXACT_TOL)
    c.value(f"Pr[{ALPHA}] (exact)", 20 / 27, dist.get(ALPHA, 0.0), q.EXACT_TOL)
    n = _samples(args, 10_000)
    rng = np.random.Generator(np.random.PCG64(_seed(args)))
    hits = sum(format_order(qmr3_sample(prof, rng)) == BETA for _ in range(n))
    c.value(f"Pr[{BETA}] (empirical, {n} samples)", 7 / 27, hits / n, 0.014)
    return c.ok


def demo_opposition(out, args) -> bool:
    """Joint samples of the opposition pair are always (order, reversed order)."""
    c = Checker(out, "opposition")
    basis = default_basis(3)
    state = build_opposition_pair(basis, {ALPHA: S2, BETA: S2})
    n = _samples(args, 1_000)
    rng = np.random.Generator(np.random.PCG64(_seed(args)))
    idx = q.sample(state, rng, size=n)
    good = 0
    for t in idx:
        i, j = q.decode_joint(int(t), basis.dim, 2)
        good += basis.orders[int(j)] == reverse_order(basis.orders[int(i)])
    c.fact("anti-correlated pairs", f"{n}/{n}", f"{good}/{n}")
    return c.ok


def demo_party_line(out, args) -> bool:
    """QMR3 on the GHZ-type party line reproduces the leader's weights."""
    c = Checker(out, "party-line")
    basis = default_basis(3)
    weights = {ALPHA: 0.6, "b>a>c": 0.3, BETA: 0.1}
    state = build_party_line(basis, {k: np.sqrt(v) for k, v in weights.items()}, 3)
    c.distribution(weights, qmr3_distribution(Profile(basis, joint=state)), q.EXACT_TOL)
    return c.ok


def demo_compare(out, args) -> bool:
    """Total-variation distance between the product and W-type tactics under QMR3."""
    c = Checker(out, "compare")
    basis = default_basis(3)
    coeff = {ALPHA: np.sqrt(2 / 3), BETA: np.sqrt(1 / 3)}
    prod = TacticSpec("product_profile", basis, per_voter=[coeff] * 3)
    w = TacticSpec("w_analog", basis, preferred=ALPHA, other=BETA)
    cmp = compare_tactics(prod, w, qmr3_distribution)
    c.value("TV distance", 7 / 27, cmp.tv_distance, q.EXACT_TOL)
    return c.ok


def demo_classical_limit(out, args) -> bool:
    """QMR equals classical majority rule on acyclic strict basis profiles without ties."""
    c = Checker(out, "classical-limit")
    basis = default_basis(3)
    checked = agree = 0
    for combo in itertools.product(basis.orders, repeat=3):
        g = build_majority_digraph(combo)
        if g.two_way_pairs() or any(len(s) > 1 for s in tarjan_scc(g)):
            continue
        checked += 1
        dist = qmr(Profile.from_orders(basis, combo)).distribution
        expected = format_order(classical_mr(combo))
        agree += dist == {expected: 1.0}
    c.fact("point masses equal to classical majority", f"{checked}/{checked}", f"{agree}/{checked}")
    return c.ok


DEMOS = {
    "majority-digraph": (demo_majority_digraph, demo_majority_digraph.__doc__),
    "basis-term": (demo_basis_term, demo_basis_term.__doc__),
    "arrow-disproof": (demo_arrow_disproof, demo_arrow_disproof.__doc__),
    "interference": (demo_interference, demo_interference.__doc__),
    "cancellation": (demo_cancellation, demo_cancellation.__doc__),
    "revote": (demo_revote, demo_revote.__doc__),
    "w-state": (demo_w_state, demo_w_state.__doc__),
    "split-voters": (demo_split_voters, demo_split_voters.__doc__),
    "opposition": (demo_opposition, demo_opposition.__doc__),
    "party-line": (demo_party_line, demo_party_line.__doc__),
    "compare": (demo_compare, demo_compare.__doc__),
    "classical-limit": (demo_classical_limit, demo_classical_limit.__doc__),
}
