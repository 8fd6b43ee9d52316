"""Example graphs with their expected classification table entries."""
from __future__ import annotations

from dataclasses import dataclass

from .classify import CB, CB_GENERATED, LOCALLY_CB, NOT_LOCALLY_CB
from .graphmodel import GraphDescriptor, parse_descriptor


@dataclass(frozen=True)
class CatalogEntry:
    key: str
    title: str
    text: str
    label: str
    cell: tuple  # (column, row)

    @property
    def graph(self) -> GraphDescriptor:
        return parse_descriptor(self.text, self.key)


def _e(key, title, text, label, column, row) -> CatalogEntry:
    return CatalogEntry(key, title, text, label, (column, row))


CATALOG = (
    _e("ray", "single ray", "rank = 0\nends = pt", CB, "r=0", "t=0"),
    _e("lasso", "lasso", "rank = 1\nends = pt", CB, "r in [1,inf)", "t=0"),
    _e("rank2_two_rays", "rank 2 with two rays", "rank = 2\nends = sum(pt, pt)", CB_GENERATED, "r in [1,inf)", "t=0"),
    _e("cantor_tree", "Cantor tree", "rank = 0\nends = cantor\ntree = cantor x 1", CB, "r=0", "t in [1,inf)"),
    _e("rank2_cantor_tree", "rank 2 wedge Cantor tree", "rank = 2\nends = cantor\ntree = cantor x 1",
       LOCALLY_CB, "r in [1,inf)", "t in [1,inf)"),
    _e("lochness", "Loch Ness monster", "rank = inf\nends = pt!", CB, "n=1", "t=0"),
    _e("millipede", "Millipede monster", "rank = inf\nends = seq!(pt)", CB, "n=1", "t=0"),
    _e("ladder", "two-ended ladder", "rank = inf\nends = sum(pt!, pt!)", CB_GENERATED, "n in [2,inf)", "t=0"),
    _e("ladder_cantor_tree", "two-ended ladder wedge Cantor tree", "rank = inf\nends = sum(pt!, pt!, cantor)\ntree = cantor x 1",
       LOCALLY_CB, "n in [2,inf)", "t in [1,inf)"),
    _e("lochness_cantor_tree", "Loch Ness wedge Cantor tree", "rank = inf\nends = sum(pt!, cantor)\ntree = cantor x 1",
       LOCALLY_CB, "n=1", "t in [1,inf)"),
    _e("cantor_core", "loops accumulating to a Cantor set", "rank = inf\nends = cantor!", NOT_LOCALLY_CB, "n=inf", "t=0"),
    _e("cantor_millipede", "Millipede variant with Cantor trees", "rank = inf\nends = seq!(cantor)\ntree = cantor x inf",
       NOT_LOCALLY_CB, "n=1", "t=inf"),
    # cells not covered above
    _e("lochness_cantor_millipede", "Loch Ness wedge Millipede of Cantor trees", "rank = inf\nends = sum(pt!, seq!(cantor))",
       NOT_LOCALLY_CB, "n in [2,inf)", "t=inf"),
    _e("cantor_core_cantor_tree", "Cantor core wedge Cantor tree", "rank = inf\nends = sum(cantor!, cantor)",
       NOT_LOCALLY_CB, "n=inf", "t in [1,inf)"),
    _e("cantor_core_cantor_millipede", "Cantor core wedge Millipede of Cantor trees", "rank = inf\nends = sum(cantor!, seq!(cantor))",
       NOT_LOCALLY_CB, "n=inf", "t=inf"),
)

TABLE_GRAPHS = CATALOG[:12]


def lookup(key: str) -> CatalogEntry:
    for entry in CATALOG:
        if entry.key == key:
            return entry
    raise KeyError(key)
