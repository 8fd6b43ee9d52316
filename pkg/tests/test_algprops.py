import random

import pytest
from hypothesis import given, settings, strategies as st

from pmapgraph import endspace as es
from pmapgraph.algprops import (
    REl, find_noncommuting_end, forgetful, grigorchuk_generator, grigorchuk_relation_check,
    is_residually_finite, rose_generators, satisfies_tits_alternative_map, satisfies_tits_alternative_pmap,
    wreath_relation_check,
)
from pmapgraph.catalog import CATALOG
from pmapgraph.endspace import EndPoint
from pmapgraph.freegroup import FreeWord
from pmapgraph.graphmodel import parse_descriptor

SPACE = es.space_of("cantor").full
x = FreeWord.x


def g(text):
    return parse_descriptor(text)


def test_predicates():
    cantor4 = g("rank = 4\nends = cantor")
    assert (is_residually_finite(cantor4), satisfies_tits_alternative_pmap(cantor4),
            satisfies_tits_alternative_map(cantor4)) == (True, True, False)
    lochness = g("rank = inf\nends = pt!")
    assert not any(f(lochness) for f in (is_residually_finite, satisfies_tits_alternative_pmap,
                                         satisfies_tits_alternative_map))
    small = g("rank = 2\nends = sum(pt, pt, pt)")
    assert all(f(small) for f in (is_residually_finite, satisfies_tits_alternative_pmap,
                                  satisfies_tits_alternative_map))


@pytest.mark.parametrize("entry", CATALOG, ids=lambda e: e.key)
def test_predicate_coherence(entry):
    graph = entry.graph
    assert is_residually_finite(graph) == satisfies_tits_alternative_pmap(graph)
    assert satisfies_tits_alternative_map(graph) == (
        satisfies_tits_alternative_pmap(graph) and graph.ends_count("all").is_finite)


def _random_rel(rng, width=3):
    cells = [format(i, f"0{width}b") for i in range(2 ** width)]
    pieces = {}
    for c in cells:
        pieces[c] = FreeWord(((0, rng.randint(1, 3)), rng.choice([1, -1])) for _ in range(rng.randint(0, 3)))
    pieces["1" * width] = FreeWord()  # the base end is 111...
    return REl(SPACE, pieces)


def test_base_end_must_be_trivial():
    with pytest.raises(ValueError):
        REl(SPACE, {"0": FreeWord(), "1": x(1)})
    with pytest.raises(ValueError):
        REl(SPACE, {"0": x(1)})
    with pytest.raises(ValueError):
        REl(SPACE, {"0": x(1), "00": x(2), "1": FreeWord()})


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_group_axioms(seed):
    rng = random.Random(seed)
    a, b, c = (_random_rel(rng, rng.randint(1, 3)) for _ in range(3))
    one = REl.identity(SPACE)
    assert (a * b) * c == a * (b * c)
    assert one * a == a == a * one
    assert a * a.inverse() == one == a.inverse() * a


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_forgetful_is_a_homomorphism(seed):
    rng = random.Random(seed)
    a, b = _random_rel(rng), _random_rel(rng)
    base = a.base
    others = [SPACE.rightmost(format(rng.randrange(8), "03b")) for _ in range(rng.randint(0, 3))]
    ends = [base] + [p for p in dict.fromkeys(others) if p != base]
    assert forgetful(a * b, ends) == forgetful(a, ends) * forgetful(b, ends)
    assert forgetful(REl.identity(SPACE), ends).is_identity


def test_forgetful_examples():
    a = REl(SPACE, {"0": x(1), "1": FreeWord()})
    ends = [a.base, EndPoint.parse("1(0)")]
    assert forgetful(a, ends).is_identity
    with pytest.raises(ValueError):
        forgetful(a, [EndPoint.parse("(0)")])


def test_noncommuting_end():
    a = REl(SPACE, {"0": x(1), "1": FreeWord()})
    b = REl(SPACE, {"0": x(2), "1": FreeWord()})
    witness = find_noncommuting_end(a, b)
    assert witness is not None and witness.in_cylinder("0")
    c = REl(SPACE, {"0": x(1) ** 3, "1": FreeWord()})
    assert find_noncommuting_end(a, c) is None
    assert find_noncommuting_end(REl.identity(SPACE), b) is None


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_no_witness_means_cellwise_commuting(seed):
    rng = random.Random(seed)
    a, b = _random_rel(rng), _random_rel(rng)
    if find_noncommuting_end(a, b) is None:
        a2, b2 = a._pair(b)
        assert all((a2.table[c] * b2.table[c]) == (b2.table[c] * a2.table[c]) for c in a2.table)
        assert a * b == b * a
    else:
        assert a * b != b * a


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_wreath_relations(n, m):
    assert wreath_relation_check(n, m, 0)
    assert wreath_relation_check(n, m, 2)


def test_rose_generators_are_involutions():
    for s in rose_generators(3, 1):
        assert (s * s).is_identity


@pytest.mark.parametrize("depth", range(1, 6))
def test_grigorchuk_relations(depth):
    report = grigorchuk_relation_check(depth)
    assert all(report.values()), report


def test_grigorchuk_generators_are_nontrivial():
    for letter in "abcd":
        assert not grigorchuk_generator(letter, 3).is_identity
