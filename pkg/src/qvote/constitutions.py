"""Voting constitutions: classical majority rule, QMR, QMR2 and QMR3.

Every quantum constitution here takes a :class:`Profile` and returns a
:class:`SocietyOutcome`. QMR and QMR3 are classical in effect (QMR dephases
its inputs, QMR3 measures them), so their outputs are diagonal.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from . import quantum as q
from .graphs import MajorityDigraph, SccList, block_rank, build_majority_digraph, tarjan_scc
from .prefs import (
    CandidateSet,
    Mode,
    PreferenceBasis,
    PreferenceError,
    Relation,
    WeakOrder,
    enumerate_basis,
    format_order,
    parse_order,
    subspace_indices,
)

log = logging.getLogger(__name__)

# probabilities below this are float noise, not outcomes
_NOISE = 1e-15


class Revote(Exception):
    """QMR2's interference cancelled every term; society has to vote again."""

    def __init__(self, xi: q.StateVector):
        super().__init__("revote required: society's unnormalized state has zero norm")
        self.xi = xi


class NonPureInput(ValueError):
    pass


@dataclass(frozen=True)
class CycleReport:
    scc_partition: SccList
    involved_pairs: tuple[tuple[str, str], ...]

    def __bool__(self) -> bool:
        return any(len(c) > 1 for c in self.scc_partition)


class CycleError(Exception):
    def __init__(self, report: CycleReport):
        comps = ", ".join("{" + ",".join(sorted(c)) + "}" for c in report.scc_partition if len(c) > 1)
        super().__init__(f"majority relation is cyclic over {comps}")
        self.report = report


@dataclass(frozen=True, eq=False)
class Profile:
    """Society's input: one state per voter, or one joint state.

    Exactly one of ``voters`` and ``joint`` is set.
    """

    basis: PreferenceBasis
    voters: tuple[q.State, ...] | None = None
    joint: q.State | None = None

    def __post_init__(self) -> None:
        if (self.voters is None) == (self.joint is None):
            raise ValueError("a profile needs either a voter list or a joint state, not both")
        if self.voters is not None:
            voters = tuple(self.voters)
            if not voters:
                raise ValueError("a profile needs at least one voter")
            for s in voters:
                if s.n_voters != 1 or s.d != self.basis.dim:
                    raise q.StateError(f"voter state does not live on the {self.basis.dim}-dim basis")
            object.__setattr__(self, "voters", voters)
        elif self.joint.d != self.basis.dim:
            raise q.StateError(f"joint state does not live on the {self.basis.dim}-dim basis")

    @classmethod
    def from_orders(cls, basis: PreferenceBasis, orders: Sequence[WeakOrder | str]) -> "Profile":
        """Classical-limit profile: voter ``i`` submits the basis ket of ``orders[i]``."""
        return cls(basis, tuple(q.ket(basis.dim, basis.index(o)) for o in orders))

    @property
    def n_voters(self) -> int:
        return len(self.voters) if self.voters is not None else self.joint.n_voters

    @property
    def is_product(self) -> bool:
        return self.voters is not None

    @property
    def is_pure(self) -> bool:
        states = self.voters if self.voters is not None else (self.joint,)
        return all(isinstance(s, q.StateVector) for s in states)

    def marginals(self) -> list[q.DensityOperator]:
        if self.voters is not None:
            return [q.as_density(s) for s in self.voters]
        return q.marginals(self.joint)

    def voter_probabilities(self) -> list[np.ndarray]:
        """Born distribution of each voter's marginal."""
        if self.voters is not None:
            return [q.born_distribution(s) for s in self.voters]
        return [q.born_distribution(m) for m in self.marginals()]

    def joint_vector(self) -> q.StateVector:
        if not self.is_pure:
            raise NonPureInput("profile contains mixed states")
        if self.voters is not None:
            return q.tensor(self.voters)
        return self.joint

    def joint_probabilities(self) -> np.ndarray:
        """Born distribution over the product basis (voter 0 most significant)."""
        if self.voters is not None:
            p = np.ones(1)
            for pi in self.voter_probabilities():
                p = np.multiply.outer(p, pi).reshape(-1)
            return p
        return q.born_distribution(self.joint)

    def orders_of(self, joint_index: int) -> tuple[WeakOrder, ...]:
        idx = q.decode_joint(joint_index, self.basis.dim, self.n_voters)
        return tuple(self.basis.orders[int(i)] for i in idx)


@dataclass(frozen=True, eq=False)
class SocietyOutcome:
    basis: PreferenceBasis
    state: q.State
    xi: q.StateVector | None = None

    @property
    def probabilities(self) -> np.ndarray:
        return q.born_distribution(self.state)

    @property
    def distribution(self) -> dict[str, float]:
        """Society's classical preference distribution, keyed by canonical order text."""
        return {
            self.basis.labels[i]: float(p) for i, p in enumerate(self.probabilities) if p > _NOISE
        }

    @property
    def density(self) -> q.DensityOperator:
        return q.as_density(self.state)


Constitution = Callable[[Profile], SocietyOutcome]


def consistent_mask(basis: PreferenceBasis, sccs: SccList) -> np.ndarray:
    """Basis orders that rank every member of an earlier SCC strictly above every later one.

    Within an SCC any arrangement admitted by the basis is allowed.
    """
    labels = basis.candidates.labels
    pos = {c: k for k, c in enumerate(labels)}
    blocks = block_rank(sccs)
    ranks = basis.rank_matrix
    mask = np.ones(basis.dim, dtype=bool)
    for a, b in itertools.permutations(labels, 2):
        if blocks[a] < blocks[b]:
            mask &= ranks[:, pos[a]] < ranks[:, pos[b]]
    return mask


def unanimous_pairs(votes: Sequence[WeakOrder]) -> list[tuple[str, str]]:
    """Ordered pairs ``(a, b)`` that every vote ranks ``a > b``."""
    labels = sorted(votes[0].candidates)
    return [
        (a, b)
        for a, b in itertools.permutations(labels, 2)
        if all(w.relation(a, b) is Relation.GT for w in votes)
    ]


def qmr_basis_term(orders: Sequence[WeakOrder], basis: PreferenceBasis) -> q.DensityOperator:
    """QMR's output on a product of preference-basis states.

    Builds the majority digraph, mixes uniformly over every order consistent
    with the SCC block order, then projects onto each unanimously held pair.
    """
    orders = [parse_order(o, basis.candidates) if isinstance(o, str) else o for o in orders]
    sccs = tarjan_scc(build_majority_digraph(orders))
    mask = consistent_mask(basis, sccs)
    xi: q.State = q.DensityOperator.diagonal(mask / mask.sum())
    for a, b in unanimous_pairs(orders):
        # a unanimous pair always survives: voter 1's order arranged by block is a witness
        xi = q.project_renormalize(xi, subspace_indices(basis, a, b, Relation.GT))
    return xi


@lru_cache(maxsize=200_000)
def _block_mask(basis: PreferenceBasis, key: tuple[int, ...]) -> np.ndarray:
    # depends only on the multiset of votes, so callers pass a sorted key
    votes = [basis.orders[i] for i in key]
    mask = consistent_mask(basis, tarjan_scc(build_majority_digraph(votes)))
    mask.setflags(write=False)
    return mask


@lru_cache(maxsize=200_000)
def _term_weights(basis: PreferenceBasis, key: tuple[int, ...]) -> np.ndarray:
    mask = _block_mask(basis, key).copy()
    ranks = basis.rank_matrix
    vote_ranks = ranks[list(key)]
    m = ranks.shape[1]
    for ia in range(m):
        for ib in range(m):
            if ia != ib and np.all(vote_ranks[:, ia] < vote_ranks[:, ib]):
                mask &= ranks[:, ia] < ranks[:, ib]
    assert mask.any(), "unanimity projection emptied the mixture"
    w = mask / mask.sum()
    w.setflags(write=False)
    return w


def qmr_weights(probabilities: Sequence[np.ndarray], basis: PreferenceBasis) -> np.ndarray:
    """Diagonal of QMR's output for independent voters with the given basis weights."""
    supports = [np.flatnonzero(p > _NOISE) for p in probabilities]
    out = np.zeros(basis.dim)
    for combo in itertools.product(*supports):
        weight = 1.0
        for p, i in zip(probabilities, combo):
            weight *= p[i]
        out += weight * _term_weights(basis, tuple(sorted(int(i) for i in combo)))
    return out


def qmr(profile: Profile) -> SocietyOutcome:
    """Quantum majority rule.

    Each voter's marginal is dephased, then QMR's basis-term map is applied
    to every product of basis states and the results are mixed with the
    product weights. Entanglement between voters is discarded.
    """
    probs = [q.phase_damp(m).diag() for m in profile.marginals()]
    w = qmr_weights(probs, profile.basis)
    return SocietyOutcome(profile.basis, q.DensityOperator.diagonal(w))


def qmr2(profile: Profile) -> SocietyOutcome:
    """Interference variant of QMR, defined on pure profiles only.

    Each product-basis term of the joint state is sent to an equal-amplitude
    superposition over the orders consistent with its SCC block order; the
    terms are summed with their amplitudes and the result is normalized.
    No unanimity projection is applied. Raises :class:`Revote` when the sum
    cancels completely.
    """
    if not profile.is_pure:
        raise NonPureInput("QMR2 accepts pure states only")
    basis = profile.basis
    psi = profile.joint_vector().amplitudes
    xi = np.zeros(basis.dim, dtype=complex)
    n = profile.n_voters
    for t in np.flatnonzero(np.abs(psi) > _NOISE):
        key = tuple(sorted(int(i) for i in q.decode_joint(int(t), basis.dim, n)))
        mask = _block_mask(basis, key)
        xi += psi[t] * mask / np.sqrt(mask.sum())
    xi_vec = q.StateVector(xi, basis.dim, normalized=False)
    if np.vdot(xi, xi).real <= q.SUPPORT_THRESHOLD:
        raise Revote(xi_vec)
    return SocietyOutcome(basis, xi_vec.normalize(), xi=xi_vec)


def _plurality_winners(orders: Sequence[int]) -> list[int]:
    counts: dict[int, int] = {}
    for o in orders:
        counts[o] = counts.get(o, 0) + 1
    top = max(counts.values())
    return sorted(o for o, c in counts.items() if c == top)


def qmr3_distribution(profile: Profile) -> dict[str, float]:
    """Exact outcome distribution of QMR3: measure all voters, take the plurality order.

    Ties between the most frequent orders are broken uniformly.
    """
    basis = profile.basis
    n = profile.n_voters
    joint = profile.joint_probabilities()
    out = np.zeros(basis.dim)
    for t in np.flatnonzero(joint > _NOISE):
        idx = q.decode_joint(int(t), basis.dim, n)
        winners = _plurality_winners([int(i) for i in idx])
        for wi in winners:
            out[wi] += joint[t] / len(winners)
    return {basis.labels[i]: float(p) for i, p in enumerate(out) if p > _NOISE}


def qmr3_sample(profile: Profile, rng: np.random.Generator) -> WeakOrder:
    """One QMR3 election: measure every voter, tally, break plurality ties uniformly."""
    basis = profile.basis
    if profile.is_product:
        outcomes = [int(q.sample(s, rng)) for s in profile.voters]
    else:
        t = int(q.sample(profile.joint, rng))
        outcomes = [int(i) for i in q.decode_joint(t, basis.dim, profile.n_voters)]
    winners = _plurality_winners(outcomes)
    pick = winners[0] if len(winners) == 1 else winners[int(rng.integers(len(winners)))]
    return basis.orders[pick]


def qmr3(profile: Profile) -> SocietyOutcome:
    """QMR3 as a constitution: society's state is the classical mixture of its outcomes."""
    basis = profile.basis
    dist = qmr3_distribution(profile)
    w = np.zeros(basis.dim)
    for label, p in dist.items():
        w[basis.index(label)] = p
    return SocietyOutcome(basis, q.DensityOperator.diagonal(w))


def majority_relation(votes: Sequence[WeakOrder], a: str, b: str) -> Relation:
    gt = sum(w.relation(a, b) is Relation.GT for w in votes)
    lt = sum(w.relation(a, b) is Relation.LT for w in votes)
    if gt > lt:
        return Relation.GT
    if lt > gt:
        return Relation.LT
    return Relation.EQ


def cycle_report(g: MajorityDigraph, sccs: SccList) -> CycleReport:
    blocks = block_rank(sccs)
    sizes = {i: len(c) for i, c in enumerate(sccs)}
    involved = tuple(
        sorted((u, v) for u, v in g.edges if blocks[u] == blocks[v] and sizes[blocks[u]] > 1)
    )
    return CycleReport(sccs, involved)


def classical_mr(votes: Sequence[WeakOrder], cycle_policy: str = "error") -> WeakOrder:
    """Classical pairwise majority rule.

    Returns the majority relation when it is a weak order (tied counts become
    ties). Otherwise ``cycle_policy="error"`` raises :class:`CycleError` and
    ``"all_equal"`` ties together the members of each cyclic SCC.
    """
    if cycle_policy not in ("error", "all_equal"):
        raise ValueError(f"unknown cycle policy {cycle_policy!r}")
    g = build_majority_digraph(votes)
    sccs = tarjan_scc(g)
    # the majority relation is a weak order iff every SCC is internally all-tied
    consistent = all(
        majority_relation(votes, a, b) is Relation.EQ
        for comp in sccs
        for a, b in itertools.combinations(sorted(comp), 2)
    )
    if not consistent and cycle_policy == "error":
        raise CycleError(cycle_report(g, sccs))
    return WeakOrder(sccs)


def classical_mr_constitution(cycle_policy: str = "all_equal") -> Constitution:
    """Classical majority rule lifted to classical-limit profiles.

    Each voter must be (up to phase) a single preference-basis element.
    Society's output is the basis state of the majority order, which must be
    admitted by the profile's basis.
    """

    def constitution(profile: Profile) -> SocietyOutcome:
        basis = profile.basis
        votes = []
        for p in profile.voter_probabilities():
            hits = np.flatnonzero(p > 1 - q.STATE_TOL)
            if hits.size != 1:
                raise ValueError("classical majority rule needs basis-state votes")
            votes.append(basis.orders[int(hits[0])])
        result = classical_mr(votes, cycle_policy)
        return SocietyOutcome(basis, q.basis_density(basis.dim, basis.index(result)))

    constitution.__name__ = f"classical_mr[{cycle_policy}]"
    return constitution


def dephased_voter(i: int) -> Constitution:
    """Society adopts voter ``i``'s dephased marginal. A dictatorship by construction."""

    def constitution(profile: Profile) -> SocietyOutcome:
        return SocietyOutcome(profile.basis, q.phase_damp(profile.marginals()[i]))

    constitution.__name__ = f"dephased_voter[{i}]"
    return constitution


def constant(order: WeakOrder | str) -> Constitution:
    """Always outputs one fixed basis state, whatever the votes."""

    def constitution(profile: Profile) -> SocietyOutcome:
        basis = profile.basis
        return SocietyOutcome(basis, q.basis_density(basis.dim, basis.index(order)))

    constitution.__name__ = f"constant[{order}]"
    return constitution


CONSTITUTIONS: dict[str, Constitution] = {
    "qmr": qmr,
    "qmr2": qmr2,
    "qmr3": qmr3,
    "classical-mr": classical_mr_constitution("all_equal"),
}


def default_basis(m: int, mode: Mode | str = Mode.STRICT) -> PreferenceBasis:
    return enumerate_basis(CandidateSet.first(m), mode)


__all__ = [
    "CycleError",
    "CycleReport",
    "NonPureInput",
    "PreferenceError",
    "Profile",
    "Revote",
    "SocietyOutcome",
    "classical_mr",
    "classical_mr_constitution",
    "consistent_mask",
    "format_order",
    "qmr",
    "qmr2",
    "qmr3",
    "qmr3_distribution",
    "qmr3_sample",
    "qmr_basis_term",
]
