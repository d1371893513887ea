import itertools
from math import comb, factorial

import pytest
from hypothesis import given, strategies as st

from qvote.prefs import (
    CandidateSet,
    Mode,
    PreferenceError,
    Relation,
    WeakOrder,
    enumerate_basis,
    format_order,
    parse_order,
    relation,
    reverse_order,
    subspace_indices,
)


def fubini(m):
    # a(m) = sum_k C(m, k) a(m - k), choosing the top tier first
    a = [1]
    for n in range(1, m + 1):
        a.append(sum(comb(n, k) * a[n - k] for k in range(1, n + 1)))
    return a[m]


def brute_weak_orders(labels):
    """Every rank function onto {0..k-1}, read as tiers."""
    out = set()
    m = len(labels)
    for ranks in itertools.product(range(m), repeat=m):
        used = sorted(set(ranks))
        if used != list(range(len(used))):
            continue
        tiers = tuple(frozenset(c for c, r in zip(labels, ranks) if r == t) for t in used)
        out.add(WeakOrder(tiers))
    return out


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_weak_basis_matches_brute_force(m):
    cands = CandidateSet.first(m)
    basis = enumerate_basis(cands, Mode.WEAK)
    assert basis.dim == fubini(m) == [1, 3, 13, 75][m - 1]
    assert set(basis.orders) == brute_weak_orders(cands.labels)
    assert len(set(basis.orders)) == basis.dim


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_strict_basis(m):
    basis = enumerate_basis(CandidateSet.first(m), Mode.STRICT)
    assert basis.dim == factorial(m)
    assert all(w.is_strict for w in basis.orders)


def test_single_candidate():
    basis = enumerate_basis(CandidateSet.of("a"), Mode.WEAK)
    assert basis.labels == ("a",)


def test_basis_order_is_lexicographic_and_bijective(weak3):
    assert list(weak3.labels) == sorted(weak3.labels)
    for i, w in enumerate(weak3.orders):
        assert weak3.index(w) == i
        assert weak3.index(format_order(w)) == i
    assert weak3.labels[:3] == ("a=b=c", "a=b>c", "a=c>b")


def test_candidate_set_validation():
    with pytest.raises(PreferenceError):
        CandidateSet(())
    with pytest.raises(PreferenceError):
        CandidateSet(("a", "a"))
    assert CandidateSet(("c", "a", "b")).labels == ("a", "b", "c")


def test_relation_examples():
    assert relation(parse_order("a>b=c"), "b", "c") is Relation.EQ
    assert relation(parse_order("c>a=b>d"), "c", "d") is Relation.GT
    assert relation(parse_order("a>b>c"), "c", "a") is Relation.LT


def test_relation_errors():
    w = parse_order("a>b>c")
    with pytest.raises(PreferenceError):
        relation(w, "a", "a")
    with pytest.raises(PreferenceError):
        relation(w, "a", "z")


def test_parse_examples():
    assert parse_order("c>a=b>d").tiers == (frozenset("c"), frozenset("ab"), frozenset("d"))
    assert format_order(parse_order("c>b=a>d")) == "c>a=b>d"
    assert parse_order("bac") == parse_order("b>a>c")


@pytest.mark.parametrize("text", ["a>a>b", "a>b=a", "", "a>>b", "a=>b", "a>b>", "a b>c"])
def test_parse_rejects(text):
    with pytest.raises(PreferenceError):
        parse_order(text)


def test_parse_against_candidate_set():
    cands = CandidateSet.first(3)
    with pytest.raises(PreferenceError, match="unknown"):
        parse_order("a>b>d", cands)
    with pytest.raises(PreferenceError, match="missing"):
        parse_order("a>b", cands)


def test_index_outside_strict_basis(strict3):
    with pytest.raises(PreferenceError):
        strict3.index("a=b>c")


weak_orders = st.permutations(list("abcde")).flatmap(
    lambda perm: st.lists(st.booleans(), min_size=4, max_size=4).map(
        lambda cuts: _tiers(perm, cuts)
    )
)


def _tiers(perm, cuts):
    tiers, cur = [], [perm[0]]
    for c, cut in zip(perm[1:], cuts):
        if cut:
            tiers.append(frozenset(cur))
            cur = []
        cur.append(c)
    tiers.append(frozenset(cur))
    return WeakOrder(tuple(tiers))


@given(weak_orders)
def test_round_trip(w):
    text = format_order(w)
    assert parse_order(text) == w
    assert format_order(parse_order(text)) == text


@given(weak_orders, st.sampled_from(list(itertools.permutations("abcde", 2))))
def test_relation_swap_and_reverse(w, pair):
    a, b = pair
    assert relation(w, b, a) is relation(w, a, b).swap()
    assert relation(reverse_order(w), a, b) is relation(w, b, a)


@pytest.mark.parametrize("mode", [Mode.STRICT, Mode.WEAK])
def test_subspaces_partition_basis(mode):
    basis = enumerate_basis(CandidateSet.first(4), mode)
    for a, b in basis.candidates.ordered_pairs():
        parts = [set(subspace_indices(basis, a, b, r)) for r in Relation]
        assert set().union(*parts) == set(range(basis.dim))
        assert sum(len(p) for p in parts) == basis.dim
        assert parts[0] == set(subspace_indices(basis, b, a, Relation.LT))
        assert all(relation(basis.orders[i], a, b) is Relation.GT for i in parts[0])


def test_half_of_strict_permutations(strict3):
    assert len(subspace_indices(strict3, "a", "b", Relation.GT)) == 3
    assert subspace_indices(strict3, "a", "b", Relation.EQ) == ()


def test_subspace_errors(strict3):
    with pytest.raises(PreferenceError):
        subspace_indices(strict3, "a", "a", Relation.GT)
    with pytest.raises(PreferenceError):
        subspace_indices(strict3, "a", "q", Relation.GT)
