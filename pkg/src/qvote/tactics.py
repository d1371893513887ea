"""Strategic-voting states: superposed votes, opposition pairs, party lines and W-type states."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Mapping, Union

import numpy as np

from . import quantum as q
from .constitutions import Profile, SocietyOutcome
from .prefs import PreferenceBasis, PreferenceError, WeakOrder, format_order, parse_order, reverse_order

log = logging.getLogger(__name__)

Coefficients = Mapping[Union[str, WeakOrder], complex]

KINDS = ("pure_vote", "opposition_pair", "party_line", "w_analog", "product_profile")


def _resolve(basis: PreferenceBasis, order: str | WeakOrder) -> int:
    return basis.index(parse_order(order, basis.candidates) if isinstance(order, str) else order)


def _amplitudes(basis: PreferenceBasis, coeffs: Coefficients) -> np.ndarray:
    """Dense amplitude vector from an order -> coefficient map, normalized.

    Coefficients whose squared magnitudes do not sum to one are rescaled with a
    warning rather than rejected.
    """
    amps = np.zeros(basis.dim, dtype=complex)
    for order, c in coeffs.items():
        amps[_resolve(basis, order)] += complex(c)
    norm2 = float(np.sum(np.abs(amps) ** 2))
    if norm2 <= q.SUPPORT_THRESHOLD:
        raise q.StateError("coefficients are all zero")
    if abs(norm2 - 1.0) > q.EXACT_TOL:
        log.warning("coefficients have squared norm %.12g; normalizing", norm2)
        amps /= np.sqrt(norm2)
    return amps


def build_pure_vote(basis: PreferenceBasis, coeffs: Coefficients) -> q.StateVector:
    return q.StateVector(_amplitudes(basis, coeffs), basis.dim)


def build_opposition_pair(basis: PreferenceBasis, bob_coeffs: Coefficients) -> q.StateVector:
    """Two-voter state in which the second voter always holds the reverse of the first's order."""
    amps = _amplitudes(basis, bob_coeffs)
    d = basis.dim
    joint = np.zeros(d * d, dtype=complex)
    for i in np.flatnonzero(amps):
        j = basis.index(reverse_order(basis.orders[i]))
        joint[q.encode_joint((i, j), d)] += amps[i]
    return q.StateVector(joint, d, 2)


def build_party_line(basis: PreferenceBasis, coeffs: Coefficients, members: int = 3) -> q.StateVector:
    """GHZ-like state: every member measures the same order."""
    if members < 2:
        raise ValueError("a party line needs at least two members")
    amps = _amplitudes(basis, coeffs)
    d = basis.dim
    joint = np.zeros(d**members, dtype=complex)
    for i in np.flatnonzero(amps):
        joint[q.encode_joint((i,) * members, d)] = amps[i]
    return q.StateVector(joint, d, members)


def build_w_analog(basis: PreferenceBasis, preferred: str | WeakOrder, other: str | WeakOrder, members: int = 3) -> q.StateVector:
    """Equal superposition of the ``members`` placements of a single ``other`` among ``preferred`` votes."""
    a, b = _resolve(basis, preferred), _resolve(basis, other)
    if a == b:
        raise ValueError("preferred and other orders must differ")
    d = basis.dim
    joint = np.zeros(d**members, dtype=complex)
    for k in range(members):
        idx = [a] * members
        idx[k] = b
        joint[q.encode_joint(idx, d)] = 1 / np.sqrt(members)
    return q.StateVector(joint, d, members)


def build_product_profile(basis: PreferenceBasis, per_voter_coeffs: list[Coefficients]) -> Profile:
    if not per_voter_coeffs:
        raise ValueError("need at least one voter")
    return Profile(basis, tuple(build_pure_vote(basis, c) for c in per_voter_coeffs))


@dataclass
class TacticSpec:
    """Declarative description of a voting tactic, buildable into a :class:`Profile`.

    ``coeffs`` is the order -> amplitude map shared by all kinds except
    ``w_analog`` (which uses ``preferred``/``other``) and ``product_profile``
    (which uses ``per_voter``).
    """

    kind: str
    basis: PreferenceBasis
    coeffs: dict = field(default_factory=dict)
    members: int = 3
    preferred: str | None = None
    other: str | None = None
    per_voter: list = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown tactic kind {self.kind!r}; expected one of {KINDS}")

    def build(self) -> Profile:
        b = self.basis
        if self.kind == "pure_vote":
            return Profile(b, (build_pure_vote(b, self.coeffs),))
        if self.kind == "opposition_pair":
            return Profile(b, joint=build_opposition_pair(b, self.coeffs))
        if self.kind == "party_line":
            return Profile(b, joint=build_party_line(b, self.coeffs, self.members))
        if self.kind == "w_analog":
            if self.preferred is None or self.other is None:
                raise ValueError("w_analog needs 'preferred' and 'other' orders")
            return Profile(b, joint=build_w_analog(b, self.preferred, self.other, self.members))
        return build_product_profile(b, self.per_voter)


@dataclass
class TacticComparison:
    first: dict[str, float]
    second: dict[str, float]
    tv_distance: float


def _as_distribution(result) -> dict[str, float]:
    if isinstance(result, SocietyOutcome):
        return result.distribution
    return dict(result)


def total_variation(p: Mapping[str, float], r: Mapping[str, float]) -> float:
    keys = set(p) | set(r)
    return 0.5 * sum(abs(p.get(k, 0.0) - r.get(k, 0.0)) for k in keys)


def compare_tactics(spec_a: TacticSpec, spec_b: TacticSpec, constitution: Callable[[Profile], object]) -> TacticComparison:
    """Outcome distributions of two tactics under one constitution and their TV distance.

    ``constitution`` may return a :class:`SocietyOutcome` or a plain
    order -> probability mapping (as :func:`qmr3_distribution` does).
    """
    pa, pb = spec_a.build(), spec_b.build()
    if pa.basis != pb.basis:
        raise PreferenceError("tactics are over different preference bases")
    if pa.n_voters != pb.n_voters:
        raise ValueError(f"tactics have different voter counts ({pa.n_voters} vs {pb.n_voters})")
    da = _as_distribution(constitution(pa))
    db = _as_distribution(constitution(pb))
    return TacticComparison(da, db, total_variation(da, db))


def split_voters_profile(basis: PreferenceBasis, alpha: str, beta: str) -> Profile:
    """Three independent voters, each sqrt(2/3)|alpha> + sqrt(1/3)|beta>."""
    c = {alpha: np.sqrt(2 / 3), beta: np.sqrt(1 / 3)}
    return build_product_profile(basis, [c, c, c])


def describe_joint(state: q.StateVector, basis: PreferenceBasis, tol: float = 1e-15) -> list[tuple[tuple[str, ...], complex]]:
    """Nonzero product-basis terms of a joint vector as (orders, amplitude)."""
    out = []
    for t in np.flatnonzero(np.abs(state.amplitudes) > tol):
        idx = q.decode_joint(int(t), basis.dim, state.n_voters)
        out.append((tuple(format_order(basis.orders[int(i)]) for i in idx), complex(state.amplitudes[t])))
    return out
