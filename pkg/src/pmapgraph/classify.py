"""Coarse classification of PMap(graph), Table cells, H^1 rank and generators."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from . import endspace as es
from .cech import chom_rank_class
from .endspace import ALEPH0, Cardinal
from .graphmodel import GraphDescriptor, INF, WedgeResult, t_from_standard_form, wedge_decomposition

CB = "CB"
CB_GENERATED = "CB-generated"
LOCALLY_CB = "locally CB"
NOT_LOCALLY_CB = "not locally CB"

ORDER = (CB, CB_GENERATED, LOCALLY_CB, NOT_LOCALLY_CB)


@dataclass(frozen=True)
class CoarseClass:
    label: str  # the strongest property that holds
    is_cb: bool
    is_cb_generated: bool
    is_locally_cb: bool
    notes: tuple = field(default=())

    def __str__(self) -> str:
        return self.label


def classify_coarse(g: GraphDescriptor) -> CoarseClass:
    notes = []
    if g.ends is None:
        raise ValueError("classification needs an infinite graph (with ends)")
    ends = g.ends_count("all")
    marked = g.ends_count("marked")
    accum = es.has_unmarked_accumulation(g.ends)

    # coarse boundedness
    if g.is_tree:
        cb = True
        notes.append("tree: PMap is trivial")
    elif not g.infinite_rank:
        cb = g.rank == 1 and ends == Cardinal.finite(1)
        notes.append("finite rank: CB exactly for rank one with one end" + (" (holds)" if cb else " (fails)"))
    else:
        cb = marked == Cardinal.finite(1) and not accum
        notes.append("infinite rank: CB exactly for a monster graph with finitely many rays attached"
                     + (" (holds)" if cb else " (fails)"))

    # CB generation
    if g.is_tree:
        cbg = True
    else:
        cbg = marked.is_finite and not accum
        notes.append("CB-generated iff finitely many ends accumulated by loops and no accumulation point in E \\ E_l"
                     + (" (holds)" if cbg else " (fails)"))

    # local coarse boundedness
    if not g.infinite_rank:
        lcb = True
        notes.append("finite rank: locally CB")
    else:
        exceeds = es.tree_part_exceeds(g.ends)
        lcb = marked.is_finite and not exceeds
        notes.append("locally CB iff finitely many ends accumulated by loops and finitely many tree parts with infinite end spaces"
                     + (" (holds)" if lcb else " (fails)"))

    label = CB if cb else CB_GENERATED if cbg else LOCALLY_CB if lcb else NOT_LOCALLY_CB
    return CoarseClass(label, cb, cb or cbg, cb or cbg or lcb, tuple(notes))


# ---------------------------------------------------------------- classification table cells

class NACell(ValueError):
    """The requested combination does not occur for locally finite graphs."""


COLUMNS = ("r=0", "r in [1,inf)", "n=1", "n in [2,inf)", "n=inf")
ROWS = ("t=0", "t in [1,inf)", "t=inf")


def t_class(g: GraphDescriptor) -> str:
    """'0', 'finite' (meaning [1, inf)) or 'inf'."""
    explicit = t_from_standard_form(g)
    if explicit is not None:
        return explicit
    if not g.infinite_rank:
        return "0" if g.ends_count("all").is_finite else "finite"
    if not es.has_unmarked_accumulation(g.ends):
        return "0"
    return "inf" if es.tree_part_exceeds(g.ends) else "finite"


def table_cell(g: GraphDescriptor) -> tuple[str, str]:
    t = t_class(g)
    row = {"0": ROWS[0], "finite": ROWS[1], "inf": ROWS[2]}[t]
    if not g.infinite_rank:
        if t == "inf":
            raise NACell("finite rank with infinitely many infinite-ended tree components is not locally finite")
        return (COLUMNS[0] if g.rank == 0 else COLUMNS[1]), row
    marked = g.ends_count("marked")
    if not marked.is_finite:
        col = COLUMNS[4]
    elif marked.n == 1:
        col = COLUMNS[2]
    else:
        col = COLUMNS[3]
    return col, row


def expected_label(column: str, row: str, lasso: bool = False) -> str:
    """The entry of the classification table for a cell."""
    if row == ROWS[2] and column in COLUMNS[:2]:
        raise NACell(f"({column}, {row}) is not a cell")
    if column == COLUMNS[0]:
        return CB
    if column == COLUMNS[1]:
        return (CB if lasso else CB_GENERATED) if row == ROWS[0] else LOCALLY_CB
    if column == COLUMNS[4] or row == ROWS[2]:
        return NOT_LOCALLY_CB
    if row == ROWS[1]:
        return LOCALLY_CB
    return CB if column == COLUMNS[2] else CB_GENERATED


# ---------------------------------------------------------------- H^1

def h1_rank(g: GraphDescriptor) -> Cardinal:
    """Rank of H^1(PMap; Z): 0 for at most one marked end, n - 1 for n of them."""
    n = g.ends_count("marked")
    if not n.is_finite:
        return ALEPH0
    return Cardinal.finite(max(0, n.n - 1))


def h1_rank_via_cech(g: GraphDescriptor) -> Cardinal:
    if g.ends is None:
        return Cardinal.finite(0)
    return chom_rank_class(es.space_of(g.ends).marked)


# ---------------------------------------------------------------- generating sets

class NotCBGenerated(ValueError):
    pass


@dataclass(frozen=True)
class GeneratingSet:
    """Symbolic generating set: the neighbourhood V_K plus W, B and H."""

    wedge: tuple  # (r, l, m)
    word_maps: tuple  # ((loop name, interval), ...)
    swaps: tuple  # ((loop name, loop name), ...)
    shifts: tuple  # basis indices

    def __str__(self) -> str:
        r, l, m = self.wedge
        lines = [f"K: wedge point of rays={r} lochness={l} millipedes={m}",
                 "V_K: maps totally supported away from K"]
        lines.append("W: " + (", ".join(f"wm({w}, I{i})" for w, i in self.word_maps) or "none"))
        lines.append("B: " + (", ".join(f"swap({a}, {b})" for a, b in self.swaps) or "none"))
        lines.append("H: " + (", ".join(f"shift({i})" for i in self.shifts) or "none"))
        return "\n".join(lines)


def build_generating_set(g: GraphDescriptor | tuple) -> GeneratingSet:
    """Generators for a CB-generated PMap of infinite rank, from wedge data (r, l, m)."""
    if isinstance(g, GraphDescriptor):
        if not g.infinite_rank:
            raise NotCBGenerated("the generating set is built for infinite rank")
        if not classify_coarse(g).is_cb_generated:
            raise NotCBGenerated("PMap is not CB-generated")
        w = wedge_decomposition(g)
        assert isinstance(w, WedgeResult)
        r, l, m = w.raw.rays, w.raw.loch_ness, w.raw.millipedes
    else:
        r, l, m = g
        if l + m == 0:
            raise NotCBGenerated("infinite rank needs a Loch Ness or Millipede summand")
    first = "a_{1,1}" if l else "b_{1,1}"
    word_maps = tuple((first, i) for i in range(1, r + 1))
    loops = [f"a_{{{i},1}}" for i in range(1, l + 1)] + [f"b_{{{j},1}}" for j in range(1, m + 1)]
    swaps = tuple((loops[i], loops[j]) for i in range(len(loops)) for j in range(i + 1, len(loops)))
    shifts = tuple(range(1, l + m))
    return GeneratingSet((r, l, m), word_maps, swaps, shifts)


def expected_swap_count(l: int, m: int) -> int:
    return comb(l, 2) + comb(m, 2) + l * m
