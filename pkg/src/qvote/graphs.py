"""Pairwise-majority digraphs and their strongly connected components."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .prefs import PreferenceError, Relation, WeakOrder


@dataclass(frozen=True)
class MajorityDigraph:
    nodes: tuple[str, ...]
    edges: frozenset[tuple[str, str]]

    def __post_init__(self) -> None:
        nodes = tuple(self.nodes)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", frozenset(self.edges))
        known = set(nodes)
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop on {u!r}")
            if u not in known or v not in known:
                raise ValueError(f"edge ({u!r}, {v!r}) references an unknown node")

    def successors(self, u: str) -> list[str]:
        return [v for v in self.nodes if (u, v) in self.edges]

    def has_edge(self, u: str, v: str) -> bool:
        return (u, v) in self.edges

    def two_way_pairs(self) -> list[tuple[str, str]]:
        return sorted((u, v) for u, v in self.edges if u < v and (v, u) in self.edges)

    def to_dot(self, name: str = "majority") -> str:
        lines = [f"digraph {name} {{"]
        lines += [f'  "{u}";' for u in self.nodes]
        lines += [f'  "{u}" -> "{v}";' for u, v in sorted(self.edges)]
        lines.append("}")
        return "\n".join(lines) + "\n"


SccList = tuple[frozenset[str], ...]


def pairwise_counts(votes: Sequence[WeakOrder], a: str, b: str) -> tuple[int, int, int]:
    """Numbers of votes ranking ``a > b``, ``b > a`` and ``a = b``."""
    gt = lt = eq = 0
    for w in votes:
        r = w.relation(a, b)
        if r is Relation.GT:
            gt += 1
        elif r is Relation.LT:
            lt += 1
        else:
            eq += 1
    return gt, lt, eq


def build_majority_digraph(votes: Sequence[WeakOrder]) -> MajorityDigraph:
    """One edge toward the pairwise loser; a tied count (including 0-0) gives edges both ways.

    Votes that tie ``a`` with ``b`` count toward neither direction.
    """
    if not votes:
        raise ValueError("need at least one vote")
    nodes = tuple(sorted(votes[0].candidates))
    for w in votes[1:]:
        if w.candidates != votes[0].candidates:
            raise PreferenceError("all votes must rank the same candidates")
    edges = set()
    for i, a in enumerate(nodes):
        for b in nodes[i + 1 :]:
            gt, lt, _ = pairwise_counts(votes, a, b)
            if gt >= lt:
                edges.add((a, b))
            if lt >= gt:
                edges.add((b, a))
    return MajorityDigraph(nodes, frozenset(edges))


def tarjan_emission(nodes: Iterable[str], successors) -> list[frozenset[str]]:
    """SCCs in the order Tarjan's algorithm completes them (sinks first).

    Iterative, so recursion depth is not a concern.
    """
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    out: list[frozenset[str]] = []
    counter = 0

    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(successors(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                out.append(frozenset(comp))
    return out


def tarjan_scc(g: MajorityDigraph) -> SccList:
    """SCCs in preference order: most preferred component first."""
    return tuple(reversed(tarjan_emission(g.nodes, g.successors)))


def block_rank(sccs: SccList) -> dict[str, int]:
    return {c: i for i, comp in enumerate(sccs) for c in comp}


def scc_of_votes(votes: Sequence[WeakOrder]) -> SccList:
    return tarjan_scc(build_majority_digraph(votes))


def format_sccs(sccs: SccList) -> str:
    return "(" + ", ".join("{" + ",".join(sorted(c)) + "}" for c in sccs) + ")"
