"""Classical preferences: weak orders over a candidate set and the bases they span.

A weak order is stored as a tuple of tiers (frozensets of candidate labels),
most preferred tier first. Its canonical text form joins tier members with
``=`` (sorted) and tiers with ``>``, e.g. ``"c>a=b>d"``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

_RESERVED = set("<>=,")


class PreferenceError(ValueError):
    """Raised for malformed orders, unknown candidates, and similar input errors."""


class Relation(enum.Enum):
    GT = ">"
    LT = "<"
    EQ = "="

    def swap(self) -> "Relation":
        if self is Relation.GT:
            return Relation.LT
        if self is Relation.LT:
            return Relation.GT
        return self


class Mode(str, enum.Enum):
    """Which classical preferences are admitted into a basis."""

    STRICT = "strict"
    WEAK = "weak"


@dataclass(frozen=True)
class CandidateSet:
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        labels = tuple(self.labels)
        if not labels:
            raise PreferenceError("a candidate set needs at least one candidate")
        for label in labels:
            if not isinstance(label, str) or not label:
                raise PreferenceError(f"invalid candidate label {label!r}")
            if any(ch in _RESERVED or ch.isspace() for ch in label):
                raise PreferenceError(f"candidate label {label!r} contains a reserved character")
        if len(set(labels)) != len(labels):
            raise PreferenceError(f"duplicate candidate labels in {labels}")
        object.__setattr__(self, "labels", tuple(sorted(labels)))

    @classmethod
    def of(cls, *labels: str) -> "CandidateSet":
        return cls(tuple(labels))

    @classmethod
    def first(cls, m: int) -> "CandidateSet":
        """The candidates ``a, b, c, ...`` (at most 26)."""
        if not 1 <= m <= 26:
            raise PreferenceError(f"need 1 <= M <= 26, got {m}")
        return cls(tuple("abcdefghijklmnopqrstuvwxyz"[:m]))

    @property
    def m(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self.labels

    def pairs(self) -> list[tuple[str, str]]:
        """Unordered pairs as ``(a, b)`` with ``a < b`` in canonical order."""
        return list(itertools.combinations(self.labels, 2))

    def ordered_pairs(self) -> list[tuple[str, str]]:
        return list(itertools.permutations(self.labels, 2))


@dataclass(frozen=True)
class WeakOrder:
    """An ordered partition of candidates into tiers, best tier first."""

    tiers: tuple[frozenset[str], ...]
    _rank: dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        tiers = tuple(frozenset(t) for t in self.tiers)
        if not tiers:
            raise PreferenceError("a weak order needs at least one tier")
        rank: dict[str, int] = {}
        for i, tier in enumerate(tiers):
            if not tier:
                raise PreferenceError("empty tier in weak order")
            for c in tier:
                if c in rank:
                    raise PreferenceError(f"duplicate candidate {c!r}")
                rank[c] = i
        object.__setattr__(self, "tiers", tiers)
        object.__setattr__(self, "_rank", rank)

    @classmethod
    def strict(cls, labels: Iterable[str]) -> "WeakOrder":
        return cls(tuple(frozenset([c]) for c in labels))

    @property
    def candidates(self) -> frozenset[str]:
        return frozenset(self._rank)

    @property
    def is_strict(self) -> bool:
        return all(len(t) == 1 for t in self.tiers)

    def rank(self, candidate: str) -> int:
        """Tier index of ``candidate`` (0 is the most preferred tier)."""
        try:
            return self._rank[candidate]
        except KeyError:
            raise PreferenceError(f"unknown candidate {candidate!r}") from None

    def relation(self, a: str, b: str) -> Relation:
        return relation(self, a, b)

    def __str__(self) -> str:
        return format_order(self)


def relation(order: WeakOrder, a: str, b: str) -> Relation:
    """How ``order`` ranks ``a`` relative to ``b``."""
    if a == b:
        raise PreferenceError(f"relation needs two distinct candidates, got {a!r} twice")
    ra, rb = order.rank(a), order.rank(b)
    if ra < rb:
        return Relation.GT
    if ra > rb:
        return Relation.LT
    return Relation.EQ


def format_order(order: WeakOrder) -> str:
    return ">".join("=".join(sorted(tier)) for tier in order.tiers)


def parse_order(text: str, candidates: CandidateSet | None = None) -> WeakOrder:
    """Parse ``"c>a=b>d"``.

    When ``candidates`` is given the order must rank exactly those candidates.
    A string without any separator and more than one character, such as
    ``"abc"``, is read as a strict order of single-letter candidates.
    """
    text = text.strip()
    if not text:
        raise PreferenceError("empty order string")
    if ">" not in text and "=" not in text and len(text) > 1:
        if candidates is None or text not in candidates:
            text = ">".join(text)
    tiers = []
    for chunk in text.split(">"):
        members = [tok.strip() for tok in chunk.split("=")]
        if any(not tok for tok in members):
            raise PreferenceError(f"malformed order {text!r}")
        for tok in members:
            if any(ch in _RESERVED or ch.isspace() for ch in tok):
                raise PreferenceError(f"malformed token {tok!r} in {text!r}")
        if len(set(members)) != len(members):
            raise PreferenceError(f"duplicate candidate in {text!r}")
        tiers.append(frozenset(members))
    order = WeakOrder(tuple(tiers))
    if candidates is not None:
        unknown = order.candidates - set(candidates.labels)
        if unknown:
            raise PreferenceError(f"unknown candidate(s) {sorted(unknown)} in {text!r}")
        missing = set(candidates.labels) - order.candidates
        if missing:
            raise PreferenceError(f"missing candidate(s) {sorted(missing)} in {text!r}")
    return order


def reverse_order(order: WeakOrder) -> WeakOrder:
    return WeakOrder(order.tiers[::-1])


def _ordered_set_partitions(items: tuple[str, ...]) -> Iterator[tuple[frozenset[str], ...]]:
    if not items:
        yield ()
        return
    for size in range(1, len(items) + 1):
        for first in itertools.combinations(items, size):
            rest = tuple(x for x in items if x not in first)
            for tail in _ordered_set_partitions(rest):
                yield (frozenset(first),) + tail


@dataclass(frozen=True, eq=False)
class PreferenceBasis:
    """Indexed list of the admissible classical preferences.

    Orders are sorted lexicographically by their canonical text, so index
    ``i`` of a basis depends only on the candidate labels and the mode.
    """

    candidates: CandidateSet
    mode: Mode
    orders: tuple[WeakOrder, ...]

    # orders are a function of (candidates, mode); keep hashing cheap for caches
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PreferenceBasis):
            return NotImplemented
        return (self.candidates, self.mode) == (other.candidates, other.mode)

    def __hash__(self) -> int:
        return hash((self.candidates, self.mode))

    @property
    def dim(self) -> int:
        return len(self.orders)

    def __len__(self) -> int:
        return len(self.orders)

    @cached_property
    def _index(self) -> dict[WeakOrder, int]:
        return {w: i for i, w in enumerate(self.orders)}

    @cached_property
    def labels(self) -> tuple[str, ...]:
        return tuple(format_order(w) for w in self.orders)

    def index(self, order: WeakOrder | str) -> int:
        if isinstance(order, str):
            order = parse_order(order, self.candidates)
        try:
            return self._index[order]
        except KeyError:
            raise PreferenceError(f"{format_order(order)!r} is not in the {self.mode.value} basis") from None

    def order(self, index: int) -> WeakOrder:
        return self.orders[index]

    def subspace_indices(self, a: str, b: str, rel: Relation) -> tuple[int, ...]:
        return subspace_indices(self, a, b, rel)

    @cached_property
    def rank_matrix(self) -> np.ndarray:
        """``rank_matrix[i, k]``: tier of candidate ``k`` (canonical position) in order ``i``."""
        labels = self.candidates.labels
        mat = np.array([[w.rank(c) for c in labels] for w in self.orders], dtype=int)
        mat.setflags(write=False)
        return mat

    @cached_property
    def relation_table(self) -> dict[tuple[str, str], tuple[Relation, ...]]:
        """``table[(a, b)][i]`` is how basis order ``i`` ranks ``a`` against ``b``."""
        return {
            (a, b): tuple(relation(w, a, b) for w in self.orders)
            for a, b in self.candidates.ordered_pairs()
        }


def enumerate_basis(candidates: CandidateSet, mode: Mode | str = Mode.STRICT) -> PreferenceBasis:
    mode = Mode(mode)
    labels = candidates.labels
    if mode is Mode.STRICT:
        orders = [WeakOrder.strict(p) for p in itertools.permutations(labels)]
    else:
        orders = [WeakOrder(tiers) for tiers in _ordered_set_partitions(labels)]
    orders.sort(key=format_order)
    return PreferenceBasis(candidates, mode, tuple(orders))


def subspace_indices(basis: PreferenceBasis, a: str, b: str, rel: Relation) -> tuple[int, ...]:
    """Basis indices whose order ranks ``a`` against ``b`` as ``rel``."""
    if a == b:
        raise PreferenceError(f"relation needs two distinct candidates, got {a!r} twice")
    for c in (a, b):
        if c not in basis.candidates:
            raise PreferenceError(f"unknown candidate {c!r}")
    column = basis.relation_table[(a, b)]
    return tuple(i for i, r in enumerate(column) if r is rel)


def orders_from(texts: Sequence[str], candidates: CandidateSet | None = None) -> list[WeakOrder]:
    return [parse_order(t, candidates) for t in texts]
