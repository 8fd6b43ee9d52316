import random

import pytest
from hypothesis import given, settings, strategies as st

from pmapgraph._text import ParseError
from pmapgraph.freegroup import FreeWord, Substitution
from pmapgraph.mcgelems import (
    CompactSubst, Element, LoopShift, LoopSwap, MappingClassWord, WordMap, involution_generators, compose_word,
    element_of, nielsen_generator, parse_mapping_word, semantics,
)

a = lambda i: FreeWord.gen((0, i))


def word(*letters):
    return MappingClassWord(tuple(letters))


def test_shift_moves_loops_along_the_ladder():
    assert semantics(LoopShift(1, 1)).apply(FreeWord.gen((1, 0))) == FreeWord.gen((1, 1))


def test_shift_and_inverse_cancel():
    assert compose_word(word(LoopShift(1, 1), LoopShift(1, -1))).is_identity


def test_word_maps_multiply_records():
    w1, w2 = a(1) * a(2), a(3).inverse()
    e = compose_word(word(WordMap(w1, 2), WordMap(w2, 2)))
    assert e.record_map == {2: w1 * w2}
    assert e.subst.is_identity


def test_conjugating_a_word_map_by_a_swap():
    psi = LoopSwap(((0, 1),), ((0, 2),))
    w = a(1) * a(3)
    e = compose_word(word(psi, WordMap(w, 1), psi.inverse()))
    assert e.record_map == {1: psi.substitution().apply(w)}
    assert e.subst.is_identity


def test_transposition_example():
    t = nielsen_generator("transposition", 3, 1, 2).subst
    assert [t.of_gen((0, i)) for i in (1, 2, 3)] == [a(2), a(1), a(3)]


def test_nielsen_errors():
    with pytest.raises(IndexError):
        nielsen_generator("left", 3, 1, 1)
    with pytest.raises(IndexError):
        nielsen_generator("flip", 3, 4)
    with pytest.raises(ValueError):
        nielsen_generator("twist", 3, 1, 2)


def test_generator_validation():
    with pytest.raises(ValueError):
        LoopSwap(((0, 1),), ((0, 1),))
    with pytest.raises(ValueError):
        LoopShift(1, 0)
    with pytest.raises(ValueError):
        CompactSubst(Substitution.shift(1, 1))
    with pytest.raises(ValueError):
        CompactSubst(Substitution.make({(0, 1): a(1) * a(2)}), Substitution.make({(0, 1): a(1)}))


@pytest.mark.parametrize("n", range(1, 9))
def test_involution_generators_square_to_identity(n):
    gens = involution_generators(n)
    assert len(gens) == n + (n - 1) + (1 if n >= 2 else 0)
    for g in gens:
        assert (g.subst * g.subst).is_identity


def test_parse_mapping_word():
    w = parse_mapping_word("shift(1)^3 swap({1.0},{2.0}) wm(x1 X2, I3) left(1,2) id")
    assert [type(g).__name__ for g in w.letters] == ["LoopShift", "LoopSwap", "WordMap", "CompactSubst"]
    assert w.letters[0] == LoopShift(1, 3)
    assert w.letters[2] == WordMap(a(1) * a(2).inverse(), 3)
    assert parse_mapping_word(str(w)) == w


def test_parse_mapping_word_errors():
    for bad in ["shift(0)", "swap({1.0},{1.0})", "spin(1)", "shift(1", "wm(x1 I2)"]:
        with pytest.raises(ParseError):
            parse_mapping_word(bad)


def test_validate_against_ladders():
    with pytest.raises(ValueError):
        parse_mapping_word("shift(3)").validate(2)
    with pytest.raises(ValueError):
        parse_mapping_word("swap({4.0},{0.1})").validate(2)
    parse_mapping_word("shift(2) swap({2.0},{0.1})").validate(2)


def _random_letter(rng):
    k = rng.random()
    if k < 0.3:
        return LoopShift(rng.randint(1, 2), rng.choice([-1, 1, 2]))
    if k < 0.6:
        p, q = rng.sample([(l, i) for l in range(3) for i in range(-2, 3)], 2)
        return LoopSwap((p,), (q,))
    if k < 0.8:
        return WordMap(FreeWord(((0, rng.randint(1, 3)), rng.choice([1, -1])) for _ in range(2)), rng.randint(1, 2))
    return rng.choice(involution_generators(3))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_word_times_inverse_is_identity(seed):
    rng = random.Random(seed)
    w = word(*[_random_letter(rng) for _ in range(rng.randint(0, 6))])
    assert compose_word(w * w.inverse()).is_identity
    assert compose_word(w.inverse() * w).is_identity


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_composition_is_a_homomorphism(seed):
    rng = random.Random(seed)
    u = word(*[_random_letter(rng) for _ in range(3)])
    v = word(*[_random_letter(rng) for _ in range(3)])
    assert compose_word(u * v) == compose_word(u) * compose_word(v)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_element_product_is_associative(seed):
    rng = random.Random(seed)
    x, y, z = (element_of(_random_letter(rng)) for _ in range(3))
    assert (x * y) * z == x * (y * z)
    assert Element() * x == x == x * Element()
