import random

import pytest
from hypothesis import given, settings, strategies as st

from pmapgraph import endspace as es
from pmapgraph.cech import (
    DepthExhausted, LocallyConstantFn, basis_family, chom_rank_class, decompose_indicator, parse_function,
    structure_terms,
)
from pmapgraph.endspace import ALEPH0, Cardinal, EndPoint

CANTOR = es.space_of("cantor").full


def fn(text, space=CANTOR):
    return parse_function(space, text)


def test_cantor_basis_depth_three():
    assert basis_family(CANTOR, 3).addresses == ("0", "00", "10", "000", "100", "010", "110")


def test_finite_space_basis_has_n_minus_one_elements():
    for n in range(1, 7):
        space = es.space_of("sum(" + ", ".join(["pt"] * n) + ")").full
        assert len(basis_family(space)) == n - 1


def test_point_has_empty_basis():
    assert len(basis_family(es.space_of("pt").full, 4)) == 0


def test_decomposition_examples():
    b = basis_family(CANTOR, 3)
    assert decompose_indicator(CANTOR, "11", b).quotient_class(b) == fn("-1*[0] + -1*[10]").quotient_class(b)
    assert decompose_indicator(CANTOR, "01", b).quotient_class(b) == fn("[0] - [00]").quotient_class(b)
    assert decompose_indicator(CANTOR, "0", b).quotient_class(b) == fn("[0]")


def test_depth_exhaustion_is_reported():
    with pytest.raises(DepthExhausted):
        decompose_indicator(CANTOR, "0101", basis_family(CANTOR, 2))
    with pytest.raises(DepthExhausted):
        basis_family(CANTOR)


def test_canonical_examples():
    assert (fn("[0]") + fn("[1]")).quotient_class().is_zero
    assert fn("2*[01] + 2*[00]").canonical() == fn("2*[0]").canonical()
    f = fn("3*[010] - [1]")
    assert (f - f).is_zero


def test_evaluate_examples():
    f = fn("2*[0] + [10]")
    assert f.evaluate(EndPoint.parse("0(1)")) == 2
    assert f.evaluate(EndPoint.parse("1(0)")) == 1
    assert LocallyConstantFn.make(CANTOR, []).evaluate(EndPoint.parse("(1)")) == 0


def test_evaluate_outside_space_is_an_error():
    space = es.space_of("pt").full
    with pytest.raises(ValueError):
        LocallyConstantFn.indicator(space, "").evaluate(EndPoint.parse("(1)"))


def test_mismatched_spaces_are_rejected():
    other = es.space_of("sum(pt, pt)").full
    with pytest.raises(ValueError):
        fn("[0]") + LocallyConstantFn.indicator(other, "0")


def test_chom_rank_examples():
    assert chom_rank_class(es.space_of("sum(pt, pt, pt, pt, pt)").full) == Cardinal.finite(4)
    assert chom_rank_class(CANTOR) == ALEPH0
    assert chom_rank_class(es.space_of("pt").full) == Cardinal.finite(0)


def _cells(space, width):
    out = [""]
    for _ in range(width):
        out = [a + b for a in out for b in "01" if not space.is_empty_cylinder(a + b)]
    return out


def _points(space, width):
    return [space.rightmost(c) for c in _cells(space, width)] + space.sample_points(width)


valid_exprs = st.integers(0, 10**9).map(lambda s: es.random_expr(random.Random(s), 4))


@settings(max_examples=100, deadline=None)
@given(valid_exprs)
def test_decomposition_reproduces_indicators(e):
    space = es.space_of(e).full
    basis = basis_family(space, 4)
    points = _points(space, 5)
    for w in _cells(space, 4):
        f = LocallyConstantFn.indicator(space, w).canonical(basis)
        assert all(a == "" or a in basis.addresses for a, _ in f.terms)
        assert f.quotient_class(basis) == decompose_indicator(space, w, basis)
        for pt in points:
            assert f.evaluate(pt) == int(pt.in_cylinder(w))


@settings(max_examples=100, deadline=None)
@given(valid_exprs)
def test_structure_has_one_containing_term_and_disjoint_negatives(e):
    space = es.space_of(e).full
    basis = basis_family(space, 4)
    for w in _cells(space, 4):
        if w == "":
            continue
        pos, neg = structure_terms(space, w, basis)
        for i, a in enumerate(neg):
            assert a.startswith(pos)
            for b in neg[i + 1:]:
                assert not a.startswith(b) and not b.startswith(a)
        for pt in _points(space, 5):
            inside = pt.in_cylinder(pos) and not any(pt.in_cylinder(a) for a in neg)
            assert inside == pt.in_cylinder(w)


@settings(max_examples=100, deadline=None)
@given(valid_exprs, st.lists(st.integers(-3, 3), min_size=1, max_size=15))
def test_basis_is_independent_mod_constants(e, coeffs):
    space = es.space_of(e).full
    basis = basis_family(space, 4)
    terms = list(zip(basis.addresses, coeffs))
    f = LocallyConstantFn.make(space, terms)
    values = {f.evaluate(pt) for pt in _points(space, 6)}
    constant = len(values) <= 1
    assert constant == all(c == 0 for _, c in terms)


@settings(max_examples=100, deadline=None)
@given(valid_exprs, st.data())
def test_evaluation_is_additive(e, data):
    space = es.space_of(e).full
    cells = _cells(space, 3)
    pick = st.lists(st.tuples(st.sampled_from(cells), st.integers(-4, 4)), max_size=4)
    f = LocallyConstantFn.make(space, data.draw(pick))
    g = LocallyConstantFn.make(space, data.draw(pick))
    for pt in _points(space, 4):
        assert (f + g).evaluate(pt) == f.evaluate(pt) + g.evaluate(pt)
        assert (-f).evaluate(pt) == -f.evaluate(pt)


@settings(max_examples=100, deadline=None)
@given(valid_exprs)
def test_chom_rank_counts_finite_basis(e):
    space = es.space_of(e).full
    r = chom_rank_class(space)
    if space.is_finite():
        assert r == Cardinal.finite(len(basis_family(space)))
    else:
        assert r == ALEPH0
