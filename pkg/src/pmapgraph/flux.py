"""Flux homomorphisms on the ladder model.

For a clopen set C of marked ends, the flux of a mapping class f counts how
many loops f pushes into the C side.  Two independent routes compute it:

* ``flux_fast`` reads the shift exponents of the word and pairs them with the
  basis coefficients of the indicator of C;
* ``flux_oracle`` builds finite pieces A_m, A_n of the fundamental group on
  the ladder grid and returns cork(A_m, A_n) - cork(A_m, f(A_n)) by
  Stallings folding.

Ladder i runs from the end ``minus_end(i)`` (position -> -inf) to
``plus_end(i)`` (position -> +inf); its plus end lies in A_i and its minus end
does not, so the primitive shift along ladder i has flux 1 through A_i.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .cech import BasisFamily, DepthExhausted, LocallyConstantFn, basis_family
from .endspace import EmbeddedSpace, EndPoint, EndSpace, space_of
from .freegroup import FreeWord, corank_of_free_factor
from .mcgelems import (
    CompactSubst, LoopShift, LoopSwap, MappingClassWord, WordMap, compose_word, nielsen_generator,
)
from ._text import Scanner


class AdmissibilityFailure(RuntimeError):
    """The window pair did not certify as admissible; enlarge it."""


# ---------------------------------------------------------------- clopens

@dataclass(frozen=True)
class Clopen:
    """Finite union of cylinders of the marked space, stored as the set of
    nonempty cells of a fixed width."""

    space: EmbeddedSpace
    width: int
    cells: frozenset

    @staticmethod
    def of_cylinders(space: EmbeddedSpace, addresses) -> "Clopen":
        addresses = list(addresses)
        width = max((len(a) for a in addresses), default=0)
        cells = set()
        for a in addresses:
            cells |= _cells_under(space, a, width)
        return Clopen(space, width, frozenset(cells))

    @staticmethod
    def empty(space: EmbeddedSpace) -> "Clopen":
        return Clopen(space, 0, frozenset())

    @staticmethod
    def full(space: EmbeddedSpace) -> "Clopen":
        return Clopen.of_cylinders(space, [""])

    def refine(self, width: int) -> "Clopen":
        if width <= self.width:
            return self
        cells = set()
        for a in self.cells:
            cells |= _cells_under(self.space, a, width)
        return Clopen(self.space, width, frozenset(cells))

    def _pair(self, other: "Clopen") -> tuple["Clopen", "Clopen"]:
        if other.space is not self.space:
            raise ValueError("clopens live on different spaces")
        w = max(self.width, other.width)
        return self.refine(w), other.refine(w)

    def __or__(self, other: "Clopen") -> "Clopen":
        a, b = self._pair(other)
        return Clopen(self.space, a.width, a.cells | b.cells)

    def __and__(self, other: "Clopen") -> "Clopen":
        a, b = self._pair(other)
        return Clopen(self.space, a.width, a.cells & b.cells)

    def __sub__(self, other: "Clopen") -> "Clopen":
        a, b = self._pair(other)
        return Clopen(self.space, a.width, a.cells - b.cells)

    def complement(self) -> "Clopen":
        return Clopen.full(self.space).refine(self.width) - self

    def disjoint(self, other: "Clopen") -> bool:
        return not (self & other).cells

    def issubset(self, other: "Clopen") -> bool:
        return not (self - other).cells

    @property
    def is_empty(self) -> bool:
        return not self.cells

    def __eq__(self, other) -> bool:
        if not isinstance(other, Clopen):
            return NotImplemented
        a, b = self._pair(other)
        return a.cells == b.cells

    def __hash__(self) -> int:
        return hash(self.refine(max(self.width, 8)).cells)

    def contains(self, p: EndPoint) -> bool:
        return self.space.contains(p) and p.head(self.width) in self.cells

    def indicator(self) -> LocallyConstantFn:
        return LocallyConstantFn.make(self.space, [(a, 1) for a in self.cells])

    def __str__(self) -> str:
        if not self.cells:
            return "{}"
        return " + ".join(f"[{a}]" for a in sorted(self.cells))


def _cells_under(space: EmbeddedSpace, address: str, width: int) -> set:
    frontier = [address] if not space.is_empty_cylinder(address) else []
    while frontier and len(frontier[0]) < width:
        frontier = [c for a in frontier for c in space.children(a)]
    return set(frontier)


# ---------------------------------------------------------------- ladder model

class LadderModel:
    """Grid of loops attached to the marked ends of a graph."""

    def __init__(self, ends, depth: int | None = None):
        self.endspace: EndSpace = space_of(ends)
        self.space = self.endspace.marked
        if self.space.is_empty:
            raise ValueError("the ladder model needs at least one end accumulated by loops")
        self.basis: BasisFamily = basis_family(self.space, depth)
        self.root = self.space.rightmost("")
        self.plus: list[EndPoint] = []
        self.minus: list[EndPoint] = []
        known = set(self.basis.addresses)
        for addr in self.basis.addresses:
            self.plus.append(self.space.rightmost(addr))
            w = addr[:-1]
            u = next((w[:k] for k in range(len(w), 0, -1) if w[:k] in known), "")
            self.minus.append(self.space.rightmost(u))

    @property
    def ladders(self) -> int:
        return len(self.basis)

    def plus_end(self, i: int) -> EndPoint:
        return self.plus[i - 1]

    def minus_end(self, i: int) -> EndPoint:
        return self.minus[i - 1]

    def basis_clopen(self, i: int) -> Clopen:
        return Clopen.of_cylinders(self.space, [self.basis.address(i)])

    def parse_clopen(self, text: str) -> Clopen:
        """``[01] + [A2]``: cylinders by address or basis element; ``{}`` is empty."""
        sc = Scanner(text)
        if sc.accept("{}"):
            sc.finish()
            return Clopen.empty(self.space)
        addrs = []
        while True:
            sc.expect("[")
            if sc.accept("A"):
                i = sc.integer()
                try:
                    addrs.append(self.basis.address(i))
                except IndexError as err:
                    raise sc.error(str(err)) from None
            else:
                start = sc.pos
                while sc.pos < len(sc.text) and sc.text[sc.pos] in "01":
                    sc.pos += 1
                addrs.append(sc.text[start:sc.pos])
            sc.expect("]")
            if sc.at_end():
                break
            if not (sc.accept("+") or sc.accept("|")):
                raise sc.error("expected '+' between cylinders")
        return Clopen.of_cylinders(self.space, addrs)

    def check_word(self, word: MappingClassWord) -> None:
        word.validate(self.ladders)


# ---------------------------------------------------------------- fast route

def indicator_coefficients(model: LadderModel, clopen: Clopen) -> dict[int, int]:
    """Basis coefficients of the indicator of ``clopen`` modulo constants."""
    cls = clopen.indicator().quotient_class(model.basis)
    return {model.basis.index(a): c for a, c in cls.terms}


def flux_fast(model: LadderModel, word: MappingClassWord, clopen: Clopen) -> int:
    coef = indicator_coefficients(model, clopen)
    total = 0
    for g in word.letters:
        if isinstance(g, LoopShift):
            if not 1 <= g.ladder <= model.ladders:
                raise ValueError(f"{g}: no ladder {g.ladder}")
            total += g.exponent * coef.get(g.ladder, 0)
    return total


def flux_vector(model: LadderModel, word: MappingClassWord) -> tuple[int, ...]:
    """Projection onto the product of the basis fluxes."""
    return tuple(flux_fast(model, word, model.basis_clopen(i)) for i in range(1, model.ladders + 1))


def section(model: LadderModel, v) -> MappingClassWord:
    """Product of primitive shifts realising the flux vector ``v``."""
    if isinstance(v, dict):
        items = sorted(v.items())
    else:
        items = list(enumerate(v, start=1))
    letters = []
    for i, k in items:
        if not 1 <= i <= model.ladders:
            raise ValueError(f"flux index {i} outside 1..{model.ladders}")
        if k:
            letters.append(LoopShift(i, k))
    return MappingClassWord(tuple(letters))


def split_decompose(model: LadderModel, word: MappingClassWord) -> tuple[tuple, MappingClassWord]:
    """(flux vector, residual) with word = residual * section(vector)."""
    v = flux_vector(model, word)
    residual = word * section(model, v).inverse()
    rv = flux_vector(model, residual)
    if any(rv):
        raise AssertionError(f"residual {residual} has nonzero flux {rv}")
    return v, residual


# ---------------------------------------------------------------- corank oracle

@dataclass(frozen=True)
class OracleReport:
    flux: int
    m: int
    n: int
    cork_identity: int
    cork_image: int


def _height_rule(model: LadderModel, clopen: Clopen, k: int):
    """Return height(g): None on the far side of the cut, else the distance
    into the C side (0 at the cut)."""
    rules = {}
    for i in range(1, model.ladders + 1):
        rules[i] = (clopen.contains(model.plus_end(i)), clopen.contains(model.minus_end(i)))
    root_in = clopen.contains(model.root)

    def height(g):
        l, p = g
        if l == 0:
            return 1 + abs(p - k) if root_in else None
        plus_in, minus_in = rules[l]
        if plus_in and minus_in:
            return 1 + abs(p - k)
        if plus_in:
            return p - k if p >= k else None
        if minus_in:
            return k - 1 - p if p < k else None
        return None

    return height


def flux_oracle_report(model: LadderModel, word: MappingClassWord, clopen: Clopen,
                       extra: int = 0, offset: int = 0) -> OracleReport:
    model.check_word(word)
    sigma = compose_word(word).subst
    support = sigma.support()
    reach = max((abs(p - offset) + 1 for _, p in support), default=0)
    drift = sum(abs(s) for _, s in sigma.shifts)
    drift = max(drift, sum(abs(g.exponent) for g in word.letters if isinstance(g, LoopShift)))
    n = reach + extra
    m = n + drift + reach + 1 + extra
    return windowed_flux(model, sigma, clopen, m, n, offset, drift)


def windowed_flux(model: LadderModel, sigma, clopen: Clopen, m: int, n: int,
                  offset: int = 0, drift: int | None = None) -> OracleReport:
    """cork(A_m, A_n) - cork(A_m, sigma(A_n)) computed on a finite region."""
    if m <= n:
        raise ValueError("an admissible pair needs m > n")
    if drift is None:
        drift = sum(abs(s) for _, s in sigma.shifts)
    height = _height_rule(model, clopen, offset)
    radius = m + 1
    ladders = range(0, model.ladders + 1)

    def in_a(g, level):
        h = height(g)
        return h is None or h <= level

    region = [(l, p) for l in ladders for p in range(offset - radius, offset + radius + 1)]
    region_set = set(region)
    ambient = [g for g in region if in_a(g, m)]
    ambient_set = set(ambient)
    wide = [(l, p) for l in ladders
            for p in range(offset - radius - drift - 1, offset + radius + drift + 2)]

    a_n = [FreeWord.gen(g) for g in region if in_a(g, n)]
    images = []
    for g in wide:
        if not in_a(g, n):
            continue
        w = sigma.apply(FreeWord.gen(g))
        if len(w) == 1 and w.letters[0][0] not in region_set:
            continue
        stray = w.generators() - ambient_set
        if stray:
            raise AdmissibilityFailure(
                f"image of {g} leaves A_{m} (letters {sorted(stray)}); enlarge the window")
        images.append(w)
    before = corank_of_free_factor(ambient, a_n)
    after = corank_of_free_factor(ambient, images)
    if not (before.certified and after.certified):
        raise AdmissibilityFailure(f"window (m={m}, n={n}) not certified: {before}, {after}; enlarge the window")
    return OracleReport(before.corank - after.corank, m, n, before.corank, after.corank)


def flux_oracle(model: LadderModel, word: MappingClassWord, target, extra: int = 0, offset: int = 0) -> int:
    """Corank flux through a clopen, or through basis element A_i for an int."""
    clopen = model.basis_clopen(target) if isinstance(target, int) else target
    return flux_oracle_report(model, word, clopen, extra, offset).flux


# ---------------------------------------------------------------- algebra of fluxes

def _flux(model, word, clopen, route):
    return flux_oracle(model, word, clopen) if route == "oracle" else flux_fast(model, word, clopen)


def flux_of_complement(model, word, c: Clopen, route: str = "fast") -> tuple[int, int]:
    return _flux(model, word, c.complement(), route), -_flux(model, word, c, route)


def flux_of_disjoint_union(model, word, a: Clopen, b: Clopen, route: str = "fast") -> tuple[int, int]:
    if not a.disjoint(b):
        raise ValueError(f"{a} and {b} are not disjoint")
    return _flux(model, word, a | b, route), _flux(model, word, a, route) + _flux(model, word, b, route)


def flux_of_difference(model, word, outer: Clopen, inner: Clopen, route: str = "fast") -> tuple[int, int]:
    if not inner.issubset(outer):
        raise ValueError(f"{inner} is not contained in {outer}")
    return _flux(model, word, outer - inner, route), _flux(model, word, outer, route) - _flux(model, word, inner, route)


def flux_of_empty_and_full(model, word, route: str = "fast") -> tuple[int, int]:
    return (_flux(model, word, Clopen.empty(model.space), route),
            _flux(model, word, Clopen.full(model.space), route))


# ---------------------------------------------------------------- random inputs

def random_word(rng: random.Random, ladders: int, length: int, n_core: int = 3, span: int = 3) -> MappingClassWord:
    """Random word over shifts, swaps, word maps and core Nielsen moves."""

    def loop():
        return (rng.randint(0, ladders), rng.randint(-span, span))

    letters = []
    for _ in range(length):
        kind = rng.random()
        if kind < 0.45 and ladders:
            letters.append(LoopShift(rng.randint(1, ladders), rng.choice([-2, -1, 1, 1, 2])))
        elif kind < 0.7:
            a = loop()
            b = loop()
            while b == a:
                b = loop()
            letters.append(LoopSwap((a,), (b,)))
        elif kind < 0.85:
            w = FreeWord([((0, rng.randint(1, n_core)), rng.choice([1, -1])) for _ in range(rng.randint(1, 3))])
            letters.append(WordMap(w, rng.randint(1, 3)))
        else:
            i, j = rng.sample(range(1, n_core + 1), 2)
            letters.append(nielsen_generator(rng.choice(["flip", "transposition", "left", "right"]), n_core, i, j))
    return MappingClassWord(tuple(letters))


def random_clopen(rng: random.Random, model: LadderModel, width: int = 3) -> Clopen:
    cells = sorted(_cells_under(model.space, "", width))
    chosen = [c for c in cells if rng.random() < 0.5]
    return Clopen.of_cylinders(model.space, chosen) if chosen else Clopen.empty(model.space)
