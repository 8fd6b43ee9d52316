"""Generators of the pure mapping class group and their action.

Elements are modelled on a grid of loops: ladder 0 is the core and ladder
i >= 1 is a bi-infinite row of loops running between the two ends attached
to basis element A_i.  A mapping class is recorded as a pair (R, s): ``s`` is
the substitution induced on the loop generators and ``R`` maps an interval
id to the word carried along it by word maps.  Products follow

    (R1, s1) * (R2, s2) = (R1 * s1(R2), s1 o s2)

so that word maps on a common interval multiply and conjugating a word map
by a core-supported map applies that map to its word.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Union

from .freegroup import FreeWord, Gen, IDENTITY_SUBST, Substitution, gen_name, parse_word
from ._text import Scanner


# ---------------------------------------------------------------- generators

@dataclass(frozen=True)
class LoopSwap:
    """Swap the loops in ``a`` with those in ``b`` (index-sorted pairing)."""

    a: tuple
    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(sorted(self.a)))
        object.__setattr__(self, "b", tuple(sorted(self.b)))
        if len(self.a) != len(self.b):
            raise ValueError("loop swap needs equal-sized sets")
        if set(self.a) & set(self.b):
            raise ValueError("loop swap needs disjoint sets")
        if not self.a:
            raise ValueError("loop swap needs nonempty sets")

    def substitution(self) -> Substitution:
        images = {}
        for x, y in zip(self.a, self.b):
            images[x] = FreeWord.gen(y)
            images[y] = FreeWord.gen(x)
        return Substitution.make(images)

    def inverse(self) -> "LoopSwap":
        return self

    def __str__(self) -> str:
        def fmt(s):
            return "{" + ",".join(f"{l}.{p}" for l, p in s) + "}"
        return f"swap({fmt(self.a)},{fmt(self.b)})"


@dataclass(frozen=True)
class WordMap:
    """Drag the interval ``interval`` around the loop word ``word``."""

    word: FreeWord
    interval: int

    def substitution(self) -> Substitution:
        return IDENTITY_SUBST

    def inverse(self) -> "WordMap":
        return WordMap(self.word.inverse(), self.interval)

    def __str__(self) -> str:
        return f"wm({self.word}, I{self.interval})"


@dataclass(frozen=True)
class LoopShift:
    """Primitive shift along ladder ``ladder`` raised to ``exponent``."""

    ladder: int
    exponent: int = 1

    def __post_init__(self):
        if self.exponent == 0:
            raise ValueError("shift exponent must be nonzero")
        if self.ladder < 1:
            raise ValueError("shifts run along ladders 1, 2, ...")

    def substitution(self) -> Substitution:
        return Substitution.shift(self.ladder, self.exponent)

    def inverse(self) -> "LoopShift":
        return LoopShift(self.ladder, -self.exponent)

    def __str__(self) -> str:
        return f"shift({self.ladder})" + ("" if self.exponent == 1 else f"^{self.exponent}")


@dataclass(frozen=True)
class CompactSubst:
    """A substitution with finite support; its inverse must be known."""

    subst: Substitution
    inv: Substitution | None = None
    label: str = "subst"

    def __post_init__(self):
        if self.subst.shifts:
            raise ValueError("compact substitutions cannot shift a ladder")
        if self.inv is not None:
            gens = self.subst.support() | self.inv.support()
            if not all((self.subst * self.inv).of_gen(g) == FreeWord.gen(g) and
                       (self.inv * self.subst).of_gen(g) == FreeWord.gen(g) for g in gens):
                raise ValueError(f"{self.label}: supplied inverse does not invert")

    def substitution(self) -> Substitution:
        return self.subst

    def inverse(self) -> "CompactSubst":
        if self.inv is None:
            if (self.subst * self.subst).is_identity:
                return self
            raise ValueError(f"{self.label}: no inverse supplied")
        return CompactSubst(self.inv, self.subst, self.label + "^-1")

    def __str__(self) -> str:
        return self.label


Generator = Union[LoopSwap, WordMap, LoopShift, CompactSubst]


# ---------------------------------------------------------------- elements

@dataclass(frozen=True)
class Element:
    """A mapping class as (word-map record, loop substitution)."""

    record: tuple = ()  # sorted ((interval, FreeWord), ...), no identity entries
    subst: Substitution = IDENTITY_SUBST

    @staticmethod
    def make(record: dict, subst: Substitution) -> "Element":
        return Element(tuple(sorted((i, w) for i, w in record.items() if w)), subst)

    @property
    def record_map(self) -> dict:
        return dict(self.record)

    def __mul__(self, other: "Element") -> "Element":
        rec = self.record_map
        for i, w in other.record:
            rec[i] = rec.get(i, FreeWord()) * self.subst.apply(w)
        return Element.make(rec, self.subst * other.subst)

    @property
    def is_identity(self) -> bool:
        return not self.record and self.subst.is_identity


ONE = Element()


def element_of(g: Generator) -> Element:
    if isinstance(g, WordMap):
        return Element.make({g.interval: g.word}, IDENTITY_SUBST)
    return Element((), g.substitution())


def semantics(g: Generator) -> Substitution:
    return g.substitution()


# ---------------------------------------------------------------- words

@dataclass(frozen=True)
class MappingClassWord:
    """Product g1 g2 ... gk, read as the composite g1 o g2 o ... o gk."""

    letters: tuple = ()

    def __mul__(self, other: "MappingClassWord") -> "MappingClassWord":
        return MappingClassWord(self.letters + other.letters)

    def inverse(self) -> "MappingClassWord":
        return MappingClassWord(tuple(g.inverse() for g in reversed(self.letters)))

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return " ".join(str(g) for g in self.letters) if self.letters else "id"

    def validate(self, ladders: int) -> None:
        """Check every generator against a model with ladders 1..ladders."""
        for g in self.letters:
            if isinstance(g, LoopShift) and not 1 <= g.ladder <= ladders:
                raise ValueError(f"{g}: no ladder {g.ladder} (model has {ladders})")
            gens: set = set()
            if isinstance(g, LoopSwap):
                gens = set(g.a) | set(g.b)
            elif isinstance(g, CompactSubst):
                gens = g.subst.support()
            elif isinstance(g, WordMap):
                gens = g.word.generators()
            bad = [x for x in gens if not 0 <= x[0] <= ladders]
            if bad:
                raise ValueError(f"{g}: loops {bad} are not in the model")


def compose_word(word: MappingClassWord) -> Element:
    out = ONE
    for g in word.letters:
        out = out * element_of(g)
    return out


# ---------------------------------------------------------------- Nielsen moves

def _core(i: int) -> Gen:
    return (0, i)


def _check(n: int, *idx: int) -> None:
    for i in idx:
        if not 1 <= i <= n:
            raise IndexError(f"index {i} outside 1..{n}")
    if len(idx) == 2 and idx[0] == idx[1]:
        raise IndexError("Nielsen moves need distinct indices")


def nielsen_generator(kind: str, n: int, i: int, j: int | None = None) -> CompactSubst:
    """Nielsen automorphisms of <a_1..a_n> on the core loops (0, 1..n).

    kinds: ``flip`` a_i -> a_i^-1; ``transposition`` a_i <-> a_j;
    ``left`` a_i -> a_j a_i; ``right`` a_i -> a_i a_j.
    """
    a = lambda k: FreeWord.gen(_core(k))
    if kind == "flip":
        _check(n, i)
        s = Substitution.make({_core(i): a(i).inverse()})
        return CompactSubst(s, s, f"flip({i})")
    if j is None:
        raise ValueError(f"{kind} needs two indices")
    _check(n, i, j)
    if kind == "transposition":
        s = Substitution.make({_core(i): a(j), _core(j): a(i)})
        return CompactSubst(s, s, f"transp({i},{j})")
    if kind == "left":
        return CompactSubst(Substitution.make({_core(i): a(j) * a(i)}),
                            Substitution.make({_core(i): a(j).inverse() * a(i)}), f"left({i},{j})")
    if kind == "right":
        return CompactSubst(Substitution.make({_core(i): a(i) * a(j)}),
                            Substitution.make({_core(i): a(i) * a(j).inverse()}), f"right({i},{j})")
    raise ValueError(f"unknown Nielsen move {kind!r}")


def involution_generators(n: int) -> list[CompactSubst]:
    """Involutions generating Aut(F_n): flips, adjacent transpositions, and
    flip(2) composed with left(1,2)."""
    out = [nielsen_generator("flip", n, i) for i in range(1, n + 1)]
    out += [nielsen_generator("transposition", n, i, i + 1) for i in range(1, n)]
    if n >= 2:
        t = nielsen_generator("flip", n, 2).subst * nielsen_generator("left", n, 1, 2).subst
        out.append(CompactSubst(t, t, "flip(2)left(1,2)"))
    return out


# ---------------------------------------------------------------- text form

_LOOP = re.compile(r"\s*(-?\d+)\.(-?\d+)\s*")


def _loop_set(sc: Scanner) -> tuple:
    sc.expect("{")
    out = []
    if not sc.accept("}"):
        while True:
            m = _LOOP.match(sc.text, sc.pos)
            if m is None:
                raise sc.error("expected a loop like 1.0")
            out.append((int(m.group(1)), int(m.group(2))))
            sc.pos = m.end()
            if sc.accept("}"):
                break
            sc.expect(",")
    return tuple(out)


def parse_mapping_word(text: str, n_core: int = 8) -> MappingClassWord:
    """Read ``shift(1)^3 swap({1.0},{2.0}) wm(x1 x2, I3)``.

    Also accepted: ``flip(i)``, ``transp(i,j)``, ``left(i,j)``, ``right(i,j)``
    on the core loops, and ``id``.
    """
    sc = Scanner(text)
    letters: list[Generator] = []
    while not sc.at_end():
        start = sc.pos
        name = sc.word()
        if name == "id":
            continue
        sc.expect("(")
        if name == "shift":
            ladder = sc.integer()
            sc.expect(")")
            exp = sc.integer() if sc.accept("^") else 1
            try:
                letters.append(LoopShift(ladder, exp))
            except ValueError as err:
                raise sc.error(str(err), start) from None
        elif name == "swap":
            a = _loop_set(sc)
            sc.expect(",")
            b = _loop_set(sc)
            sc.expect(")")
            try:
                letters.append(LoopSwap(a, b))
            except ValueError as err:
                raise sc.error(str(err), start) from None
        elif name == "wm":
            body_start = sc.pos
            comma = sc.text.find(",", body_start)
            if comma < 0:
                raise sc.error("wm needs a word and an interval")
            try:
                w = parse_word(sc.text[body_start:comma])
            except Exception as err:
                raise sc.error(f"bad word in wm: {err}", body_start) from None
            sc.pos = comma + 1
            sc.expect("I")
            interval = sc.integer()
            sc.expect(")")
            letters.append(WordMap(w, interval))
        elif name in ("flip", "transp", "left", "right"):
            i = sc.integer()
            j = None
            if sc.accept(","):
                j = sc.integer()
            sc.expect(")")
            kind = {"transp": "transposition"}.get(name, name)
            try:
                letters.append(nielsen_generator(kind, max(n_core, i, j or 0), i, j))
            except (ValueError, IndexError) as err:
                raise sc.error(str(err), start) from None
        else:
            raise sc.error(f"unknown generator {name!r}", start)
    return MappingClassWord(tuple(letters))


def format_word(word: MappingClassWord) -> str:
    return str(word)


def loop_name(g: Gen) -> str:
    return gen_name(g)
