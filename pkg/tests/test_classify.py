import random

import pytest
from hypothesis import given, settings, strategies as st

from pmapgraph import endspace as es
from pmapgraph.catalog import CATALOG, TABLE_GRAPHS, lookup
from pmapgraph.classify import (
    CB, CB_GENERATED, COLUMNS, LOCALLY_CB, NACell, NOT_LOCALLY_CB, NotCBGenerated, ORDER, ROWS,
    build_generating_set, classify_coarse, expected_label, expected_swap_count, h1_rank, h1_rank_via_cech,
    table_cell,
)
from pmapgraph.endspace import ALEPH0, Cardinal
from pmapgraph.graphmodel import GraphDescriptor, INF, WedgeResult, parse_descriptor, wedge_decomposition


def g(text):
    return parse_descriptor(text)


def _without_trees(entry):
    return parse_descriptor("\n".join(l for l in entry.text.splitlines() if not l.startswith("tree")))


@pytest.mark.parametrize("entry", CATALOG, ids=lambda e: e.key)
def test_catalog_labels(entry):
    assert classify_coarse(entry.graph).label == entry.label
    assert table_cell(entry.graph) == entry.cell
    assert table_cell(_without_trees(entry)) == entry.cell
    assert classify_coarse(_without_trees(entry)).label == entry.label


def test_table_covers_every_cell():
    cells = {e.cell for e in TABLE_GRAPHS}
    possible = {(c, r) for c in COLUMNS for r in ROWS if not (r == ROWS[2] and c in COLUMNS[:2])}
    assert {e.cell for e in CATALOG} == possible
    assert len(TABLE_GRAPHS) == 12 and len(cells) == 10


@pytest.mark.parametrize("entry", CATALOG, ids=lambda e: e.key)
def test_catalog_matches_table_entries(entry):
    assert expected_label(*entry.cell, lasso=entry.key == "lasso") == entry.label


@pytest.mark.parametrize("entry", CATALOG, ids=lambda e: e.key)
def test_class_ordering(entry):
    c = classify_coarse(entry.graph)
    assert not c.is_cb or c.is_cb_generated
    assert not c.is_cb_generated or c.is_locally_cb
    assert c.label == ORDER[[c.is_cb, c.is_cb_generated, c.is_locally_cb, True].index(True)]


@pytest.mark.parametrize("entry", CATALOG, ids=lambda e: e.key)
def test_cb_generation_matches_wedge_decomposition(entry):
    graph = entry.graph
    if graph.is_tree:
        return
    assert classify_coarse(graph).is_cb_generated == isinstance(wedge_decomposition(graph), WedgeResult)


def test_classification_examples():
    assert classify_coarse(lookup("lasso").graph).label == CB
    assert classify_coarse(lookup("ladder").graph).label == CB_GENERATED
    assert classify_coarse(lookup("lochness_cantor_tree").graph).label == LOCALLY_CB
    assert classify_coarse(lookup("cantor_core").graph).label == NOT_LOCALLY_CB


def test_na_cell():
    with pytest.raises(NACell):
        table_cell(g("rank = 2\nends = cantor\ntree = cantor x inf"))
    with pytest.raises(NACell):
        expected_label(COLUMNS[0], ROWS[2])


def test_h1_examples():
    assert h1_rank(lookup("lochness").graph) == Cardinal.finite(0)
    assert h1_rank(g("rank = inf\nends = sum(pt!, pt!, pt!, pt!, pt!)")) == Cardinal.finite(4)
    assert h1_rank(lookup("cantor_core").graph) == ALEPH0
    assert h1_rank(lookup("ray").graph) == Cardinal.finite(0)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_h1_matches_cech_rank(seed):
    e = es.random_expr(random.Random(seed), 4)
    rank = INF if es._has_marked(e) else 3
    graph = GraphDescriptor(rank, e)
    assert h1_rank(graph) == h1_rank_via_cech(graph)


@pytest.mark.parametrize("wedge,counts", [((2, 1, 1), (2, 1, 1)), ((0, 2, 0), (0, 1, 1)), ((1, 0, 1), (1, 0, 0))])
def test_generating_set_counts(wedge, counts):
    s = build_generating_set(wedge)
    assert (len(s.word_maps), len(s.swaps), len(s.shifts)) == counts


def test_generating_set_uses_millipede_loop_without_lochness():
    assert build_generating_set((1, 0, 1)).word_maps == (("b_{1,1}", 1),)
    assert build_generating_set((1, 1, 0)).word_maps == (("a_{1,1}", 1),)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 3), st.integers(0, 4), st.integers(0, 4))
def test_generating_set_sizes(r, l, m):
    if l + m == 0:
        with pytest.raises(NotCBGenerated):
            build_generating_set((r, l, m))
        return
    s = build_generating_set((r, l, m))
    assert len(s.swaps) == expected_swap_count(l, m)
    assert len(s.word_maps) == r
    graph = parse_descriptor("rank = inf\nends = sum(" + ", ".join(["pt"] * r + ["pt!"] * l + ["seq!(pt)"] * m) + ")")
    assert Cardinal.finite(len(s.shifts)) == h1_rank(graph)
    assert build_generating_set(graph) == s


def test_generating_set_refuses_other_graphs():
    with pytest.raises(NotCBGenerated):
        build_generating_set(lookup("cantor_core").graph)
    with pytest.raises(NotCBGenerated):
        build_generating_set(lookup("lasso").graph)
