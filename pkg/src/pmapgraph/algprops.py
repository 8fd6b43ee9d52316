"""Residual finiteness, Tits alternative, the group R of locally constant
loop-valued maps on the ends, and finite witnesses for wreath products and
the Grigorchuk group."""
from __future__ import annotations

from dataclasses import dataclass

from .endspace import EmbeddedSpace, EndPoint, space_of
from .flux import Clopen, _cells_under
from .freegroup import FreeWord, Substitution
from .graphmodel import GraphDescriptor
from .mcgelems import involution_generators


# ---------------------------------------------------------------- predicates

def is_residually_finite(g: GraphDescriptor) -> bool:
    return not g.infinite_rank


def satisfies_tits_alternative_pmap(g: GraphDescriptor) -> bool:
    return not g.infinite_rank


def satisfies_tits_alternative_map(g: GraphDescriptor) -> bool:
    return not g.infinite_rank and g.ends_count("all").is_finite


# ---------------------------------------------------------------- the group R

class REl:
    """Locally constant map from the ends to a free group, trivial at a base end.

    Stored as a word for every nonempty cylinder of a fixed width.
    """

    def __init__(self, space: EmbeddedSpace, pieces, base: EndPoint | None = None):
        self.space = space
        self.base = base if base is not None else space.rightmost("")
        pieces = list(pieces.items() if isinstance(pieces, dict) else pieces)
        width = max((len(a) for a, _ in pieces), default=0)
        table: dict[str, FreeWord] = {}
        for addr, w in pieces:
            for cell in _cells_under(space, addr, width):
                if cell in table:
                    raise ValueError(f"pieces overlap at [{cell}]")
                table[cell] = w
        missing = _cells_under(space, "", width) - set(table)
        if missing:
            raise ValueError(f"pieces do not cover the ends: missing {sorted(missing)}")
        self.width = width
        self.table = table
        if self.at(self.base):
            raise ValueError("the base end must map to the identity")

    @staticmethod
    def identity(space: EmbeddedSpace, base: EndPoint | None = None) -> "REl":
        return REl(space, {"": FreeWord()}, base)

    def refine(self, width: int) -> "REl":
        if width <= self.width:
            return self
        pieces = {}
        for addr, w in self.table.items():
            for cell in _cells_under(self.space, addr, width):
                pieces[cell] = w
        return REl(self.space, pieces, self.base)

    def _pair(self, other: "REl") -> tuple["REl", "REl"]:
        if other.space is not self.space or other.base != self.base:
            raise ValueError("elements of different groups")
        w = max(self.width, other.width)
        return self.refine(w), other.refine(w)

    def __mul__(self, other: "REl") -> "REl":
        a, b = self._pair(other)
        return REl(self.space, {c: a.table[c] * b.table[c] for c in a.table}, self.base)

    def inverse(self) -> "REl":
        return REl(self.space, {c: w.inverse() for c, w in self.table.items()}, self.base)

    def at(self, p: EndPoint) -> FreeWord:
        if not self.space.contains(p):
            raise ValueError(f"{p} is not an end")
        return self.table[p.head(self.width)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, REl):
            return NotImplemented
        a, b = self._pair(other)
        return a.table == b.table

    def __hash__(self):
        return 0

    def cells(self) -> list[tuple[str, FreeWord]]:
        return sorted(self.table.items())

    def __repr__(self) -> str:
        return "REl(" + ", ".join(f"[{c}]: {w}" for c, w in self.cells()) + ")"


@dataclass(frozen=True)
class FiniteREl:
    """Restriction of an REl to finitely many ends."""

    values: tuple  # ((EndPoint, FreeWord), ...) in the order of the chosen ends

    def __mul__(self, other: "FiniteREl") -> "FiniteREl":
        if [p for p, _ in self.values] != [p for p, _ in other.values]:
            raise ValueError("restrictions to different end sets")
        return FiniteREl(tuple((p, u * v) for (p, u), (_, v) in zip(self.values, other.values)))

    @property
    def is_identity(self) -> bool:
        return all(not w for _, w in self.values)


def forgetful(a: REl, ends: list[EndPoint]) -> FiniteREl:
    """Forget every end outside ``ends`` (which must contain the base end)."""
    if a.base not in ends:
        raise ValueError("the chosen ends must include the base end")
    return FiniteREl(tuple((p, a.at(p)) for p in ends))


def find_noncommuting_end(a: REl, b: REl) -> EndPoint | None:
    """An end where the two words fail to commute, or None."""
    a, b = a._pair(b)
    for cell in sorted(a.table):
        if not a.table[cell].commutes_with(b.table[cell]):
            return a.space.rightmost(cell)
    return None


# ---------------------------------------------------------------- wreath products

def relabel(s: Substitution, mapping: dict) -> Substitution:
    """Transport a substitution along a renaming of generators."""
    def move(w: FreeWord) -> FreeWord:
        return FreeWord((mapping.get(g, g), e) for g, e in w.letters)
    return Substitution.make({mapping.get(g, g): move(w) for g, w in s.images})


def rose_generators(n: int, i: int) -> list[Substitution]:
    """The involutions generating Aut(F_n) acting on rose i, whose k-th petal
    is position i of ladder k."""
    mapping = {(0, k): (k, i) for k in range(1, n + 1)}
    return [relabel(g.subst, mapping) for g in involution_generators(n)]


def rose_shift(n: int, m: int = 1) -> Substitution:
    return Substitution.make(shifts={k: m for k in range(1, n + 1)})


def wreath_relation_check(n: int, m: int, i: int = 0) -> bool:
    """h^m g = g' h^m for each generator g of rose i and its copy g' on rose i + m."""
    hm = rose_shift(n, m)
    here = rose_generators(n, i)
    there = rose_generators(n, i + m)
    return all(hm * g == g2 * hm for g, g2 in zip(here, there))


# ---------------------------------------------------------------- Grigorchuk group

def _grig(letter: str, word: str) -> str:
    """Action of a, b, c, d on a finite binary string."""
    out = []
    for pos, bit in enumerate(word):
        if letter == "a":
            out.append("1" if bit == "0" else "0")
            out.append(word[pos + 1:])
            break
        if letter == "1":
            out.append(word[pos:])
            break
        if bit == "0":
            nxt = {"b": "a", "c": "a", "d": "1"}[letter]
        else:
            nxt = {"b": "c", "c": "d", "d": "b"}[letter]
        out.append(bit)
        letter = nxt
    return "".join(out)


def grigorchuk_generator(letter: str, depth: int) -> Substitution:
    """Permutation of the loops at the leaves of the trees T_1, ..., T_depth
    (leaf w of T_j is the loop at position int(w) on ladder j)."""
    images = {}
    for j in range(1, depth + 1):
        for x in range(2 ** j):
            w = format(x, f"0{j}b")
            v = _grig(letter, w)
            images[(j, x)] = FreeWord.gen((j, int(v, 2)))
    return Substitution.make(images)


def grigorchuk_relation_check(depth: int) -> dict[str, bool]:
    a, b, c, d = (grigorchuk_generator(x, depth) for x in "abcd")
    ad = a * d
    return {
        "a^2": (a * a).is_identity,
        "b^2": (b * b).is_identity,
        "c^2": (c * c).is_identity,
        "d^2": (d * d).is_identity,
        "bcd": (b * c * d).is_identity,
        "bc=cb": b * c == c * b,
        "(ad)^4": (ad * ad * ad * ad).is_identity,
    }
