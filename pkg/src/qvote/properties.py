"""Checkers for the quantum analogs of Arrow's postulates.

The postulates quantify over every state, which cannot be enumerated. Each
checker therefore runs a constitution over an explicit, finite profile family
and certifies only that the family holds no counterexample. Reports name the
family they were produced on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import quantum as q
from .constitutions import Constitution, Profile, SocietyOutcome, qmr
from .prefs import CandidateSet, Mode, PreferenceBasis, Relation, WeakOrder, enumerate_basis

RELATIONS = (Relation.GT, Relation.LT, Relation.EQ)


@dataclass(frozen=True)
class SupportPattern:
    """``triples[(a, b)] = (on a>b, on a<b, on a=b)`` for every ordered pair."""

    triples: dict[tuple[str, str], tuple[bool, bool, bool]]

    def __getitem__(self, pair: tuple[str, str]) -> tuple[bool, bool, bool]:
        return self.triples[pair]

    def supports(self, a: str, b: str, rel: Relation = Relation.GT) -> bool:
        return self.triples[(a, b)][RELATIONS.index(rel)]


def support_pattern(rho: q.State, basis: PreferenceBasis, threshold: float = q.SUPPORT_THRESHOLD) -> SupportPattern:
    p = q.born_distribution(rho)
    triples = {}
    for a, b in basis.candidates.ordered_pairs():
        col = basis.relation_table[(a, b)]
        weight = dict.fromkeys(RELATIONS, 0.0)
        for pi, r in zip(p, col):
            weight[r] += pi
        triples[(a, b)] = tuple(weight[r] > threshold for r in RELATIONS)
    return SupportPattern(triples)


@dataclass
class Counterexample:
    profile_index: int
    profile: Profile
    pair: tuple[str, str] | None
    detail: str
    other_index: int | None = None
    other_profile: Profile | None = None


@dataclass
class PropertyReport:
    name: str
    passed: bool
    family: str
    n_profiles: int
    counterexample: Counterexample | None = None
    voter_verdicts: dict[int, bool] = field(default_factory=dict)
    witnesses: dict[int, Counterexample] = field(default_factory=dict)
    note: str = ""

    @property
    def dictators(self) -> list[int]:
        return [i for i, v in self.voter_verdicts.items() if v]

    def to_record(self) -> dict:
        rec = {
            "record": "property",
            "property": self.name,
            "passed": self.passed,
            "family": self.family,
            "profiles": self.n_profiles,
        }
        if self.counterexample is not None:
            rec["counterexample"] = _counterexample_record(self.counterexample)
        if self.voter_verdicts:
            rec["dictators"] = [i + 1 for i in self.dictators]
        if self.note:
            rec["note"] = self.note
        return rec

    def format_text(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        lines = [f"{self.name}: {status} ({self.n_profiles} profiles, family {self.family})"]
        if self.voter_verdicts:
            for i, v in sorted(self.voter_verdicts.items()):
                verdict = "dictator" if v else "not a dictator"
                lines.append(f"  voter {i + 1}: {verdict}")
                if not v and i in self.witnesses:
                    lines.append(f"    witness: {describe_counterexample(self.witnesses[i])}")
        if self.counterexample is not None:
            lines.append(f"  counterexample: {describe_counterexample(self.counterexample)}")
        if self.note:
            lines.append(f"  note: {self.note}")
        return "\n".join(lines)


def describe_profile(profile: Profile) -> str:
    basis = profile.basis
    if profile.voters is not None:
        parts = []
        for s in profile.voters:
            p = q.born_distribution(s)
            support = [basis.labels[i] for i in np.flatnonzero(p > q.SUPPORT_THRESHOLD)]
            kind = "pure" if isinstance(s, q.StateVector) else "mixed"
            parts.append(support[0] if len(support) == 1 else f"{kind}[{' + '.join(support)}]")
        return "{" + ", ".join(parts) + "}"
    p = q.born_distribution(profile.joint)
    terms = [
        ",".join(str(o) for o in profile.orders_of(int(t))) for t in np.flatnonzero(p > q.SUPPORT_THRESHOLD)
    ]
    return "joint[" + " + ".join(terms) + "]"


def describe_counterexample(cx: Counterexample) -> str:
    s = f"profile #{cx.profile_index} {describe_profile(cx.profile)}"
    if cx.other_profile is not None:
        s += f" vs #{cx.other_index} {describe_profile(cx.other_profile)}"
    if cx.pair is not None:
        s += f", pair {cx.pair[0]}{cx.pair[1]}"
    return s + f": {cx.detail}"


def _counterexample_record(cx: Counterexample) -> dict:
    rec = {"index": cx.profile_index, "profile": describe_profile(cx.profile), "detail": cx.detail}
    if cx.pair is not None:
        rec["pair"] = f"{cx.pair[0]}{cx.pair[1]}"
    if cx.other_profile is not None:
        rec["other_index"] = cx.other_index
        rec["other_profile"] = describe_profile(cx.other_profile)
    return rec


@dataclass
class Evaluation:
    """A constitution's output on one profile with the support data the checkers need."""

    index: int
    profile: Profile
    outcome: SocietyOutcome | None
    voters: list[SupportPattern]
    society: SupportPattern | None
    error: str | None = None


def evaluate(constitution: Constitution, profiles: Iterable[Profile]) -> list[Evaluation]:
    out = []
    for k, profile in enumerate(profiles):
        basis = profile.basis
        voters = [support_pattern(m, basis) for m in profile.marginals()]
        try:
            outcome = constitution(profile)
        except Exception as exc:  # noqa: BLE001 - a failing constitution is a finding, not a crash
            out.append(Evaluation(k, profile, None, voters, None, f"{type(exc).__name__}: {exc}"))
            continue
        try:
            society = support_pattern(outcome.state, basis)
        except q.StateError as exc:
            out.append(Evaluation(k, profile, outcome, voters, None, f"invalid output: {exc}"))
            continue
        out.append(Evaluation(k, profile, outcome, voters, society))
    return out


def _family_name(profiles) -> str:
    return getattr(profiles, "name", "explicit")


def _evaluations(constitution, profiles) -> tuple[list[Evaluation], str]:
    if isinstance(profiles, list) and profiles and isinstance(profiles[0], Evaluation):
        return profiles, "precomputed"
    name = _family_name(profiles)
    return evaluate(constitution, profiles), name


def _errored(name: str, family: str, evals: list[Evaluation]) -> PropertyReport | None:
    for e in evals:
        if e.society is None:
            cx = Counterexample(e.index, e.profile, None, e.error or "no output")
            return PropertyReport(name, False, family, len(evals), cx)
    return None


def check_unanimity(constitution: Constitution, profiles) -> PropertyReport:
    """(i) all voters support a>b => society does; (ii) no voter does => society doesn't."""
    evals, family = _evaluations(constitution, profiles)
    bad = _errored("unanimity", family, evals)
    if bad:
        return bad
    for e in evals:
        for a, b in e.profile.basis.candidates.ordered_pairs():
            voter_support = [v.supports(a, b) for v in e.voters]
            society = e.society.supports(a, b)
            if all(voter_support) and not society:
                cx = Counterexample(e.index, e.profile, (a, b), f"every voter supports {a}>{b}, society does not")
                return PropertyReport("unanimity", False, family, len(evals), cx)
            if not any(voter_support) and society:
                cx = Counterexample(e.index, e.profile, (a, b), f"no voter supports {a}>{b}, society does")
                return PropertyReport("unanimity", False, family, len(evals), cx)
    return PropertyReport("unanimity", True, family, len(evals))


def check_qiia(constitution: Constitution, profiles) -> PropertyReport:
    """Society's support triple on (a, b) must be a function of the voters' triples on (a, b)."""
    evals, family = _evaluations(constitution, profiles)
    bad = _errored("qiia", family, evals)
    note = "functional dependence checked over the generated family only"
    if bad:
        bad.note = note
        return bad
    pairs = evals[0].profile.basis.candidates.pairs() if evals else []
    for a, b in pairs:
        seen: dict[tuple, Evaluation] = {}
        for e in evals:
            key = tuple(v[(a, b)] for v in e.voters)
            first = seen.setdefault(key, e)
            if first.society[(a, b)] != e.society[(a, b)]:
                detail = (
                    f"identical voter support on ({a},{b}) but society's triple "
                    f"{_triple(first.society[(a, b)])} vs {_triple(e.society[(a, b)])}"
                )
                cx = Counterexample(first.index, first.profile, (a, b), detail, e.index, e.profile)
                return PropertyReport("qiia", False, family, len(evals), cx, note=note)
    return PropertyReport("qiia", True, family, len(evals), note=note)


def _triple(t: tuple[bool, bool, bool]) -> str:
    return "".join(sym for sym, on in zip("><=", t) if on) or "-"


def check_transitivity(constitution: Constitution, profiles) -> PropertyReport:
    """Every output must be a valid state on the preference basis.

    Support on basis elements implies a transitive preference on measurement,
    so what is actually checked is dimension, normalization and positivity.
    """
    evals, family = _evaluations(constitution, profiles)
    for e in evals:
        if e.outcome is None:
            return PropertyReport("transitivity", False, family, len(evals), Counterexample(e.index, e.profile, None, e.error))
        problem = output_problem(e.outcome, e.profile.basis)
        if problem:
            cx = Counterexample(e.index, e.profile, None, problem)
            return PropertyReport("transitivity", False, family, len(evals), cx)
    return PropertyReport("transitivity", True, family, len(evals))


def output_problem(outcome: SocietyOutcome, basis: PreferenceBasis) -> str | None:
    state = outcome.state
    if state.n_voters != 1 or state.dim != basis.dim:
        return f"output has dimension {state.dim}, basis has {basis.dim}"
    if isinstance(state, q.StateVector):
        n = state.norm()
        if abs(n - 1.0) > q.STATE_TOL:
            return f"output vector has norm {n:.12g}"
        return None
    return q.density_problem(np.asarray(state.matrix))


def check_dictatorship(constitution: Constitution, profiles) -> PropertyReport:
    """Per-voter verdicts: voter i is a dictator iff society supports a>b exactly when i does.

    The report passes when no voter is a dictator over the family.
    """
    evals, family = _evaluations(constitution, profiles)
    bad = _errored("non-dictatorship", family, evals)
    if bad:
        return bad
    n = evals[0].profile.n_voters if evals else 0
    verdicts: dict[int, bool] = {}
    witnesses: dict[int, Counterexample] = {}
    for i in range(n):
        verdicts[i] = True
        for e in evals:
            hit = None
            for a, b in e.profile.basis.candidates.ordered_pairs():
                mine, theirs = e.voters[i].supports(a, b), e.society.supports(a, b)
                if mine and not theirs:
                    hit = Counterexample(e.index, e.profile, (a, b), f"voter {i + 1} supports {a}>{b}, society does not")
                elif theirs and not mine:
                    hit = Counterexample(e.index, e.profile, (a, b), f"society supports {a}>{b}, voter {i + 1} does not")
                if hit:
                    break
            if hit:
                verdicts[i] = False
                witnesses[i] = hit
                break
    return PropertyReport(
        "non-dictatorship", not any(verdicts.values()), family, len(evals),
        voter_verdicts=verdicts, witnesses=witnesses,
    )


class ProfileFamily:
    """A named, re-iterable, finite sequence of profiles."""

    def __init__(self, name: str, profiles: Sequence[Profile]):
        self.name = name
        self._profiles = list(profiles)

    def __iter__(self) -> Iterator[Profile]:
        return iter(self._profiles)

    def __len__(self) -> int:
        return len(self._profiles)

    def __getitem__(self, k: int) -> Profile:
        return self._profiles[k]

    def __add__(self, other: "ProfileFamily") -> "ProfileFamily":
        return ProfileFamily(f"{self.name}+{other.name}", self._profiles + other._profiles)


def basis_profiles(
    basis: PreferenceBasis, n_voters: int, orders: Sequence[WeakOrder] | None = None
) -> ProfileFamily:
    """Every classical-limit profile whose votes are drawn from ``orders`` (default: the whole basis)."""
    orders = list(basis.orders if orders is None else orders)
    profiles = [Profile.from_orders(basis, combo) for combo in itertools.product(orders, repeat=n_voters)]
    return ProfileFamily(f"basis-{basis.mode.value}-M{basis.candidates.m}-N{n_voters}", profiles)


def random_mixed_profiles(basis: PreferenceBasis, n_voters: int, count: int, seed: int) -> ProfileFamily:
    """Seeded full-rank random mixed profiles (induced Ginibre ensemble per voter)."""
    rng = np.random.default_rng(seed)
    profiles = [
        Profile(basis, tuple(q.random_density(basis.dim, rng) for _ in range(n_voters))) for _ in range(count)
    ]
    return ProfileFamily(f"random-mixed-{basis.mode.value}-M{basis.candidates.m}-N{n_voters}-seed{seed}", profiles)


def random_pure_profiles(basis: PreferenceBasis, n_voters: int, count: int, seed: int) -> ProfileFamily:
    rng = np.random.default_rng(seed)
    profiles = [
        Profile(basis, tuple(q.random_pure(basis.dim, rng) for _ in range(n_voters))) for _ in range(count)
    ]
    return ProfileFamily(f"random-pure-{basis.mode.value}-M{basis.candidates.m}-N{n_voters}-seed{seed}", profiles)


def random_sparse_profiles(
    basis: PreferenceBasis, n_voters: int, count: int, seed: int, max_support: int = 2
) -> ProfileFamily:
    """Seeded random mixtures of at most ``max_support`` basis states per voter."""
    rng = np.random.default_rng(seed)
    profiles = []
    for _ in range(count):
        voters = []
        for _ in range(n_voters):
            k = int(rng.integers(1, max_support + 1))
            idx = rng.choice(basis.dim, size=k, replace=False)
            w = np.zeros(basis.dim)
            w[idx] = rng.dirichlet(np.ones(k))
            voters.append(q.DensityOperator.diagonal(w))
        profiles.append(Profile(basis, tuple(voters)))
    return ProfileFamily(f"random-sparse-{basis.mode.value}-M{basis.candidates.m}-N{n_voters}-seed{seed}", profiles)


def run_all(constitution: Constitution, profiles) -> list[PropertyReport]:
    """The four checks on one family, sharing a single pass of evaluations."""
    evals = evaluate(constitution, profiles)
    family = _family_name(profiles)
    reports = [
        check_transitivity(constitution, evals),
        check_unanimity(constitution, evals),
        check_qiia(constitution, evals),
        check_dictatorship(constitution, evals),
    ]
    for r in reports:
        r.family = family
    return reports


CYCLIC_PROFILE = ("a>b>c", "c>a>b", "b>c>a")


@dataclass
class ArrowDisproof:
    """Evidence bundle for the QMR counterexample to the quantum Arrow conjecture."""

    mode: str
    profile: tuple[str, ...]
    distribution: dict[str, float]
    uniform_deviation: float
    cyclic_dictatorship: PropertyReport
    family_reports: list[PropertyReport]
    failures: list[str]

    @property
    def holds(self) -> bool:
        return not self.failures

    def to_records(self) -> list[dict]:
        recs = [
            {
                "record": "arrow_disproof",
                "mode": self.mode,
                "profile": list(self.profile),
                "uniform_deviation": self.uniform_deviation,
                "holds": self.holds,
                "failures": self.failures,
            }
        ]
        recs += [
            {"record": "society", "order": k, "probability": v} for k, v in sorted(self.distribution.items())
        ]
        recs.append(self.cyclic_dictatorship.to_record())
        recs += [r.to_record() for r in self.family_reports]
        return recs

    def format_text(self) -> str:
        lines = [f"QMR on {{{', '.join(self.profile)}}} ({self.mode} basis)"]
        for k, v in sorted(self.distribution.items()):
            lines.append(f"  Pr[{k}] = {v:.12f}")
        lines.append(f"  max deviation from uniform: {self.uniform_deviation:.3e}")
        lines.append(self.cyclic_dictatorship.format_text())
        lines += [r.format_text() for r in self.family_reports]
        lines.append("disproof holds" if self.holds else "disproof NOT certified: " + "; ".join(self.failures))
        return "\n".join(lines)


class DisproofFailed(AssertionError):
    def __init__(self, record: ArrowDisproof):
        super().__init__("; ".join(record.failures))
        self.record = record


def arrow_disproof(mode: Mode | str = Mode.STRICT, n_voters: int = 3, strict: bool = False) -> ArrowDisproof:
    """Run QMR on the cyclic three-voter profile and check the four postulates.

    The postulate checks run on the exhaustive classical-limit family for
    three candidates in the given mode, with the cyclic profile included.
    With ``strict=True`` a failed expectation raises :class:`DisproofFailed`
    carrying the full record.
    """
    mode = Mode(mode)
    basis = enumerate_basis(CandidateSet.first(3), mode)
    cyclic = Profile.from_orders(basis, CYCLIC_PROFILE)
    outcome = qmr(cyclic)
    p = outcome.probabilities
    deviation = float(np.max(np.abs(p - 1.0 / basis.dim)))
    failures = []
    if deviation > q.EXACT_TOL:
        failures.append(f"society's mixture is not uniform (deviation {deviation:.3e})")

    cyc = check_dictatorship(qmr, ProfileFamily("cyclic-profile", [cyclic]))
    if cyc.dictators:
        failures.append(f"voter(s) {[i + 1 for i in cyc.dictators]} dictate on the cyclic profile")

    family = basis_profiles(basis, n_voters)
    reports = run_all(qmr, family)
    for r in reports:
        if not r.passed:
            failures.append(f"{r.name} fails on {r.family}")
    record = ArrowDisproof(mode.value, CYCLIC_PROFILE, outcome.distribution, deviation, cyc, reports, failures)
    if strict and failures:
        raise DisproofFailed(record)
    return record
