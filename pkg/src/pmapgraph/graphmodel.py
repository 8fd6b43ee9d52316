"""Graph descriptors, characteristic triples and wedge-sum normal forms."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from . import endspace as es
from .endspace import ALEPH0, Cardinal, Expr, Pt, Seq, Sum, CantorSet, cardinality_class
from ._text import ParseError, Scanner

INF = math.inf


class InvalidGraph(ValueError):
    pass


class NotFiniteType(ValueError):
    pass


@dataclass(frozen=True)
class TreeComponent:
    ends: Expr
    multiplicity: float  # positive int or INF

    def __str__(self) -> str:
        mult = "inf" if self.multiplicity == INF else str(self.multiplicity)
        return f"{es.to_text(self.ends)} x {mult}"


@dataclass(frozen=True)
class GraphDescriptor:
    """Rank (int or INF), end space, optional standard-form tree components.

    ``ends`` may be None for a finite graph (no ends at all).
    """

    rank: float
    ends: Expr | None
    trees: tuple = field(default=())
    name: str = ""

    def __post_init__(self):
        if self.rank != INF and (not isinstance(self.rank, int) or self.rank < 0):
            raise InvalidGraph(f"rank must be a nonnegative integer or inf, got {self.rank!r}")
        if self.ends is None:
            if self.rank == INF:
                raise InvalidGraph("an infinite-rank graph has ends")
            return
        report = es.validate(self.ends)
        if not report.ok:
            raise InvalidGraph(f"invalid end space: {report}")
        marked = cardinality_class(self.ends, "marked")
        if self.rank == INF and marked == es.ZERO:
            raise InvalidGraph("infinite rank needs an end accumulated by loops")
        if self.rank != INF and marked != es.ZERO:
            raise InvalidGraph("finite rank cannot have ends accumulated by loops")
        for t in self.trees:
            if es._has_marked(t.ends):
                raise InvalidGraph(f"tree component {t} carries loops")

    @property
    def infinite_rank(self) -> bool:
        return self.rank == INF

    @property
    def is_tree(self) -> bool:
        return self.rank == 0

    def ends_count(self, which: str = "all") -> Cardinal:
        if self.ends is None:
            return es.ZERO
        return cardinality_class(self.ends, which)

    def __str__(self) -> str:
        rank = "inf" if self.rank == INF else str(self.rank)
        ends = es.to_text(self.ends) if self.ends is not None else "none"
        lines = [f"rank = {rank}", f"ends = {ends}"] + [f"tree = {t}" for t in self.trees]
        return "\n".join(lines)


def parse_descriptor(text: str, name: str = "") -> GraphDescriptor:
    """Line format: ``rank = <n|inf>``, ``ends = <expr>``, ``tree = <expr> x <mult|inf>``.

    Blank lines and ``#`` comments are ignored.  A missing ``ends`` line means a
    finite graph.
    """
    rank = None
    ends = None
    trees = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value'", lineno, 1)
        key, _, value = line.partition("=")
        key = key.strip()
        col = line.index("=") + 2
        if key not in ("rank", "ends", "tree"):
            raise ParseError(f"unknown key {key!r}", lineno, 1)
        if key in ("rank", "ends") and key in seen:
            raise ParseError(f"duplicate key {key!r}", lineno, 1)
        seen.add(key)
        try:
            if key == "rank":
                rank = _parse_rank(value)
            elif key == "ends":
                ends = es.parse(value)
            else:
                trees.append(_parse_tree(value))
        except ParseError as err:
            # value errors are relative to the value; anchor them in the file
            raise ParseError(err.message, lineno, col + err.column - 1) from None
    if rank is None:
        raise ParseError("missing 'rank' line", 1, 1)
    return GraphDescriptor(rank, ends, tuple(trees), name)


def _parse_rank(value: str) -> float:
    sc = Scanner(value)
    sc.skip_ws()
    if sc.accept("inf"):
        sc.finish()
        return INF
    start = sc.pos
    n = sc.integer()
    if n < 0:
        raise sc.error("rank must be nonnegative", start)
    sc.finish()
    return n


def _parse_tree(value: str) -> TreeComponent:
    sc = Scanner(value)
    expr = es.parse_expr_prefix(sc)
    sc.expect("x")
    sc.skip_ws()
    if sc.accept("inf"):
        mult = INF
    else:
        start = sc.pos
        mult = sc.integer()
        if mult < 1:
            raise sc.error("multiplicity must be positive", start)
    sc.finish()
    return TreeComponent(expr, mult)


def load_descriptor(path: str | Path) -> GraphDescriptor:
    p = Path(path)
    return parse_descriptor(p.read_text(encoding="utf-8"), p.stem)


# ---------------------------------------------------------------- triples

@dataclass(frozen=True)
class Triple:
    rank: float
    ends: Cardinal
    marked: Cardinal

    def __str__(self) -> str:
        rank = "inf" if self.rank == INF else str(self.rank)
        return f"({rank}, {self.ends}, {self.marked})"


def characteristic_triple(g: GraphDescriptor) -> Triple:
    return Triple(g.rank, g.ends_count("all"), g.ends_count("marked"))


# ---------------------------------------------------------------- wedge sums

@dataclass(frozen=True)
class Wedge:
    """Multiplicities of rays, Loch Ness monsters, Millipedes and loops."""

    rays: int = 0
    loch_ness: int = 0
    millipedes: int = 0
    loops: int = 0

    def canonical(self) -> "Wedge":
        """Rays are absorbed into a Millipede when there is one."""
        if self.millipedes:
            return Wedge(0, self.loch_ness, self.millipedes, self.loops)
        return self

    def descriptor(self) -> GraphDescriptor:
        """A graph realising this wedge (Millipede = seq!(pt))."""
        parts = [Pt(False)] * self.rays + [Pt(True)] * self.loch_ness + [Seq(Pt(False), True)] * self.millipedes
        if self.loch_ness or self.millipedes:
            rank = INF
        else:
            rank = self.loops
        ends = None if not parts else (parts[0] if len(parts) == 1 else Sum(tuple(parts)))
        return GraphDescriptor(rank, ends)

    def __str__(self) -> str:
        return f"rays={self.rays} lochness={self.loch_ness} millipedes={self.millipedes} loops={self.loops}"


@dataclass(frozen=True)
class NotDecomposable:
    reason: str

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        return f"not decomposable: {self.reason}"


@dataclass(frozen=True)
class WedgeResult:
    raw: Wedge
    canonical: Wedge

    def __str__(self) -> str:
        return f"raw {self.raw}; canonical {self.canonical}"


def _count_summands(e: Expr) -> tuple[int, int, int]:
    if isinstance(e, Pt):
        return (0, 1, 0) if e.loops else (1, 0, 0)
    if isinstance(e, Seq):
        return (0, 0, 1)
    if isinstance(e, CantorSet):
        raise AssertionError("a Cantor set never appears in a finite wedge")
    r = l = m = 0
    for p in e.parts:
        a, b, c = _count_summands(p)
        r, l, m = r + a, l + b, m + c
    return r, l, m


def wedge_decomposition(g: GraphDescriptor) -> WedgeResult | NotDecomposable:
    ends = g.ends_count("all")
    if not g.infinite_rank:
        if not ends.is_finite:
            return NotDecomposable("finite rank with infinitely many ends")
        if g.rank == 0 and ends.n == 0:
            return NotDecomposable("the empty graph")
        raw = Wedge(rays=ends.n, loops=g.rank)
        return WedgeResult(raw, raw.canonical())
    marked = g.ends_count("marked")
    if not marked.is_finite:
        return NotDecomposable("infinitely many ends accumulated by loops")
    if es.has_unmarked_accumulation(g.ends):
        return NotDecomposable("an end not accumulated by loops is an accumulation point")
    r, l, m = _count_summands(g.ends)
    raw = Wedge(r, l, m, 0)
    return WedgeResult(raw, raw.canonical())


# ---------------------------------------------------------------- finite type

@dataclass(frozen=True)
class PMapType:
    kind: str  # "trivial", "Out", "Aut", "semidirect"
    n: int = 0
    e: int = 0

    def __str__(self) -> str:
        if self.kind == "trivial":
            return "1"
        if self.kind == "Out":
            return f"Out(F_{self.n})"
        if self.kind == "Aut":
            return f"Aut(F_{self.n})"
        return f"F_{self.n}^{self.e - 1} x| Aut(F_{self.n})"


def pmap_isomorphism_type(g: GraphDescriptor) -> PMapType:
    if g.is_tree:
        return PMapType("trivial")
    if g.infinite_rank:
        raise NotFiniteType("infinite rank: no finite-type description")
    ends = g.ends_count("all")
    if not ends.is_finite:
        raise NotFiniteType("infinitely many ends: no finite-type description")
    n, e = int(g.rank), ends.n
    if e == 0:
        return PMapType("Out", n, 0)
    if e == 1:
        return PMapType("Aut", n, 1)
    return PMapType("semidirect", n, e)


def t_from_standard_form(g: GraphDescriptor) -> str | None:
    """Class of the number of tree components with infinite end spaces."""
    if not g.trees:
        return None
    count = 0.0
    for t in g.trees:
        if not cardinality_class(t.ends).is_finite:
            count += t.multiplicity
    if count == 0:
        return "0"
    return "inf" if count == INF else "finite"
