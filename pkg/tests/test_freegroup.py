import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from pmapgraph.freegroup import (
    FreeWord, NotCertifiedFreeFactor, Substitution, corank_of_free_factor, fold, parse_word,
    smith_invariants,
)

x = FreeWord.x


def test_parse_and_print():
    assert parse_word("x3 X2 x2") == x(3)
    assert str(parse_word("a2.5 A1.0")) == "a2.5 A1.0"
    assert parse_word("1") == FreeWord()


def test_fold_examples():
    assert fold([x(1), x(2)]).rank == 2
    g = fold([x(1) * x(2), x(2)])
    assert g.rank == 2 and g.contains(x(1))
    g = fold([x(1) ** 2])
    assert g.rank == 1 and not g.contains(x(1)) and g.contains(x(1) ** -4)


def test_corank_examples():
    amb = [(0, i) for i in range(4)]
    assert corank_of_free_factor(amb, [x(0)]).corank == 3
    assert corank_of_free_factor(amb, [x(1), x(2), x(3)]).corank == 1
    report = corank_of_free_factor([(0, 0)], [x(0) ** 2])
    assert not report.certified and report.invariant_factors == (2,)
    with pytest.raises(NotCertifiedFreeFactor):
        corank_of_free_factor([(0, 0)], [x(0) ** 2], strict=True)


def test_corank_rejects_foreign_letters():
    with pytest.raises(ValueError):
        corank_of_free_factor([(0, 0)], [x(1)])


def test_substitution_examples():
    f = Substitution.make({(0, 0): x(0) * x(1)})
    assert Substitution() * f == f
    assert Substitution.shift(0, 1).apply(x(0) * x(1)) == x(1) * x(2)
    assert (f * f).of_gen((0, 0)) == x(0) * x(1) * x(1)


def _words(rng, n=4, count=3, length=4):
    out = []
    for _ in range(count):
        out.append(FreeWord(((0, rng.randint(1, n)), rng.choice([1, -1])) for _ in range(rng.randint(1, length))))
    return out


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_folding_is_confluent(seed):
    rng = random.Random(seed)
    words = _words(rng)
    ref = fold(words)
    shuffled = words[:]
    rng.shuffle(shuffled)
    other = fold(shuffled)
    assert other.canonical_form() == ref.canonical_form()
    assert other.rank == ref.rank


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_nielsen_moves_preserve_subgroup(seed):
    rng = random.Random(seed)
    words = _words(rng)
    ref = fold(words)
    moved = words[:]
    for _ in range(3):
        i, j = rng.sample(range(len(moved)), 2)
        move = rng.choice(["left", "right", "inv"])
        if move == "left":
            moved[i] = moved[j] * moved[i]
        elif move == "right":
            moved[i] = moved[i] * moved[j].inverse()
        else:
            moved[i] = moved[i].inverse()
    assert fold(moved).canonical_form() == ref.canonical_form()
    for w in words:
        assert fold(moved).contains(w)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_fold_contains_products(seed):
    rng = random.Random(seed)
    words = _words(rng)
    g = fold(words)
    w = FreeWord()
    for _ in range(4):
        w = w * rng.choice(words) ** rng.choice([1, -1])
    assert g.contains(w)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6), st.data())
def test_basis_subsets_have_rank_difference_corank(n, data):
    amb = [(0, i) for i in range(1, n + 1)]
    chosen = data.draw(st.sets(st.sampled_from(amb)))
    report = corank_of_free_factor(amb, [FreeWord.gen(g) for g in chosen])
    assert report.certified
    assert report.corank == n - len(chosen)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_substitution_is_a_homomorphism(seed):
    rng = random.Random(seed)
    f = Substitution.make({(0, i): w for i, w in enumerate(_words(rng, count=3), start=1)},
                          {0: rng.randint(-2, 2), 1: rng.randint(-2, 2)})
    u, v = _words(rng, count=2)
    assert f.apply(u * v) == f.apply(u) * f.apply(v)
    assert f.apply(u.inverse()) == f.apply(u).inverse()


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_composition_is_associative(seed):
    rng = random.Random(seed)

    def sub():
        return Substitution.make({(0, i): w for i, w in enumerate(_words(rng, count=2), start=rng.randint(0, 3))},
                                 {0: rng.randint(-1, 1)})
    f, g, h = sub(), sub(), sub()
    assert (f * g) * h == f * (g * h)
    for w in _words(rng):
        assert (f * g).apply(w) == f.apply(g.apply(w))


def _sympy_invariants(rows):
    snf = smith_normal_form(Matrix(rows), domain=ZZ)
    return sorted(abs(snf[i, i]) for i in range(min(snf.shape)) if snf[i, i] != 0)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_smith_invariants_match_sympy(m, n, data):
    rows = data.draw(st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m))
    ours = smith_invariants(rows)
    assert sorted(ours) == _sympy_invariants(rows)
    assert all(b % a == 0 for a, b in zip(ours, ours[1:]))
