"""Free groups on a grid of generators, substitutions, and Stallings folding.

A generator is a pair ``(ladder, position)``.  Ladder 0 holds the plain
alphabet x_i; the text form ``a2.5`` names ladder 2, position 5.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

from ._text import Scanner

Gen = tuple  # (ladder, position)


def gen_name(g: Gen) -> str:
    return f"x{g[1]}" if g[0] == 0 else f"a{g[0]}.{g[1]}"


def _reduce(letters: Iterable[tuple[Gen, int]]) -> tuple:
    out: list[tuple[Gen, int]] = []
    for g, e in letters:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


class FreeWord:
    """Freely reduced word; letters are (generator, +1 or -1)."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[tuple[Gen, int]] = ()):
        self.letters = _reduce(letters)
        self._hash = hash(self.letters)

    @staticmethod
    def gen(g: Gen, e: int = 1) -> "FreeWord":
        sign = 1 if e > 0 else -1
        return FreeWord([(g, sign)] * abs(e))

    @staticmethod
    def x(i: int, e: int = 1) -> "FreeWord":
        return FreeWord.gen((0, i), e)

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return FreeWord(self.letters + other.letters)

    def inverse(self) -> "FreeWord":
        return FreeWord((g, -e) for g, e in reversed(self.letters))

    def __pow__(self, k: int) -> "FreeWord":
        base = self if k >= 0 else self.inverse()
        return FreeWord(base.letters * abs(k))

    def __eq__(self, other) -> bool:
        return isinstance(other, FreeWord) and self.letters == other.letters

    def __hash__(self) -> int:
        return self._hash

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def generators(self) -> set:
        return {g for g, _ in self.letters}

    def exponent_sums(self) -> dict:
        out: dict = {}
        for g, e in self.letters:
            out[g] = out.get(g, 0) + e
        return out

    def commutes_with(self, other: "FreeWord") -> bool:
        return self * other == other * self

    def __repr__(self) -> str:
        return f"FreeWord({str(self)!r})"

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        parts = []
        for g, e in self.letters:
            name = gen_name(g)
            parts.append(name if e > 0 else name[0].upper() + name[1:])
        return " ".join(parts)


IDENTITY = FreeWord()

_LETTER = re.compile(r"([xXaA])(-?\d+)(?:\.(-?\d+))?")


def parse_word(text: str) -> FreeWord:
    """``x3 X2 x-1`` or ``a2.5 A1.0``; uppercase letters are inverses, ``1`` is the identity."""
    sc = Scanner(text)
    letters = []
    while not sc.at_end():
        m = _LETTER.match(text, sc.pos)
        if m is None:
            if text.startswith("1", sc.pos) and not letters:
                sc.pos += 1
                continue
            raise sc.error("expected a generator like x3, X2 or a1.4")
        kind, a, b = m.groups()
        if kind in "xX":
            if b is not None:
                raise sc.error("x generators take a single index")
            g = (0, int(a))
        else:
            if b is None:
                raise sc.error("a generators need ladder.position")
            g = (int(a), int(b))
        letters.append((g, 1 if kind.islower() else -1))
        sc.pos = m.end()
    return FreeWord(letters)


# ---------------------------------------------------------------- substitutions

@dataclass(frozen=True)
class Substitution:
    """Endomorphism of the free group on the grid.

    Generators listed in ``images`` go to the given words; every other generator
    (l, p) goes to (l, p + shifts[l]).
    """

    images: tuple = ()  # sorted ((gen, FreeWord), ...)
    shifts: tuple = ()  # sorted ((ladder, amount), ...)

    @staticmethod
    def make(images: dict | None = None, shifts: dict | None = None) -> "Substitution":
        sh = {l: s for l, s in (shifts or {}).items() if s}
        imgs = {}
        for g, w in (images or {}).items():
            default = FreeWord.gen((g[0], g[1] + sh.get(g[0], 0)))
            if w != default:
                imgs[g] = w
        return Substitution(tuple(sorted(imgs.items())), tuple(sorted(sh.items())))

    @staticmethod
    def shift(ladder: int, amount: int) -> "Substitution":
        return Substitution.make(shifts={ladder: amount})

    @property
    def image_map(self) -> dict:
        m = self.__dict__.get("_imap")
        if m is None:
            m = dict(self.images)
            object.__setattr__(self, "_imap", m)
        return m

    @property
    def shift_map(self) -> dict:
        return dict(self.shifts)

    def of_gen(self, g: Gen) -> FreeWord:
        w = self.image_map.get(g)
        if w is not None:
            return w
        s = self.shift_map.get(g[0], 0)
        return FreeWord.gen((g[0], g[1] + s))

    def apply(self, w: FreeWord) -> FreeWord:
        letters: list = []
        for g, e in w.letters:
            img = self.of_gen(g)
            letters.extend(img.letters if e > 0 else img.inverse().letters)
        return FreeWord(letters)

    __call__ = apply

    def compose(self, other: "Substitution") -> "Substitution":
        """self o other: apply ``other`` first."""
        osh = other.shift_map
        keys = set(other.image_map)
        for g in self.image_map:
            pre = (g[0], g[1] - osh.get(g[0], 0))
            if pre not in other.image_map:
                keys.add(pre)
        shifts = dict(osh)
        for l, s in self.shifts:
            shifts[l] = shifts.get(l, 0) + s
        images = {g: self.apply(other.of_gen(g)) for g in keys}
        return Substitution.make(images, shifts)

    def __mul__(self, other: "Substitution") -> "Substitution":
        return self.compose(other)

    @property
    def is_identity(self) -> bool:
        return not self.images and not self.shifts

    def support(self) -> set:
        """Generators that appear as explicit keys or inside explicit images."""
        out = set(self.image_map)
        for w in self.image_map.values():
            out |= w.generators()
        return out

    def window(self) -> dict:
        """Per-ladder [lo, hi] bounds of the explicit part."""
        out: dict = {}
        for l, p in self.support():
            lo, hi = out.get(l, (p, p))
            out[l] = (min(lo, p), max(hi, p))
        return out

    def __str__(self) -> str:
        parts = [f"{gen_name(g)} -> {w}" for g, w in self.images]
        parts += [f"ladder {l} shifted by {s}" for l, s in self.shifts]
        return "; ".join(parts) if parts else "identity"


IDENTITY_SUBST = Substitution()


def agree_on(f: Substitution, g: Substitution, gens: Iterable[Gen]) -> bool:
    return all(f.of_gen(x) == g.of_gen(x) for x in gens)


# ---------------------------------------------------------------- folding

class FoldedGraph:
    """Stallings graph of a finitely generated subgroup, base vertex 0."""

    def __init__(self):
        self._parent: list[int] = []
        self._out: list[dict] = []
        self._in: list[dict] = []
        self._new()

    def _new(self) -> int:
        self._parent.append(len(self._parent))
        self._out.append({})
        self._in.append({})
        return len(self._parent) - 1

    def find(self, v: int) -> int:
        root = v
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[v] != root:
            self._parent[v], v = root, self._parent[v]
        return root

    def _merge(self, a: int, b: int) -> None:
        pending = [(a, b)]
        while pending:
            a, b = pending.pop()
            a, b = self.find(a), self.find(b)
            if a == b:
                continue
            if len(self._out[a]) + len(self._in[a]) < len(self._out[b]) + len(self._in[b]):
                a, b = b, a
            self._parent[b] = a
            for table in (self._out, self._in):
                moved, table[b] = table[b], {}
                for g, t in moved.items():
                    if g in table[a]:
                        pending.append((table[a][g], t))
                    else:
                        table[a][g] = t

    def _edge(self, u: int, g: Gen, v: int) -> None:
        u, v = self.find(u), self.find(v)
        if g in self._out[u]:
            self._merge(self._out[u][g], v)
            return
        if g in self._in[v]:
            self._merge(self._in[v][g], u)
            return
        self._out[u][g] = v
        self._in[v][g] = u

    def add_word(self, w: FreeWord) -> None:
        cur = 0
        n = len(w.letters)
        for i, (g, e) in enumerate(w.letters):
            cur = self.find(cur)
            table = self._out if e > 0 else self._in
            if g in table[cur]:
                nxt = table[cur][g]
                if i == n - 1:
                    self._merge(nxt, 0)
                cur = nxt
                continue
            nxt = 0 if i == n - 1 else self._new()
            if e > 0:
                self._edge(cur, g, nxt)
            else:
                self._edge(nxt, g, cur)
            cur = nxt

    def vertices(self) -> list[int]:
        return [v for v in range(len(self._parent)) if self._parent[v] == v]

    def edges(self) -> list[tuple[int, Gen, int]]:
        out = []
        for v in self.vertices():
            for g, t in self._out[v].items():
                out.append((v, g, self.find(t)))
        return out

    @property
    def rank(self) -> int:
        return len(self.edges()) - len(self.vertices()) + 1

    def contains(self, w: FreeWord) -> bool:
        cur = self.find(0)
        for g, e in w.letters:
            table = self._out if e > 0 else self._in
            nxt = table[cur].get(g)
            if nxt is None:
                return False
            cur = self.find(nxt)
        return cur == self.find(0)

    def canonical_form(self) -> tuple:
        """Relabel vertices by breadth-first search from the base, following
        edges in sorted label order; two folded graphs are isomorphic as rooted
        labelled graphs iff their canonical forms agree."""
        base = self.find(0)
        order = {base: 0}
        queue = [base]
        for v in queue:
            steps = sorted([(g, 1, self.find(t)) for g, t in self._out[v].items()]
                           + [(g, -1, self.find(t)) for g, t in self._in[v].items()])
            for _, _, t in steps:
                if t not in order:
                    order[t] = len(order)
                    queue.append(t)
        return tuple(sorted((order[u], g, order[t]) for u, g, t in self.edges()))


def fold(words: Iterable[FreeWord]) -> FoldedGraph:
    graph = FoldedGraph()
    for w in words:
        if w:
            graph.add_word(w)
    return graph


def subgroup_rank(graph: FoldedGraph) -> int:
    return graph.rank


# ---------------------------------------------------------------- Smith normal form

def smith_invariants(rows: list[list[int]]) -> list[int]:
    """Nonzero invariant factors of an integer matrix (d1 | d2 | ...)."""
    a = [list(r) for r in rows if any(r)]
    if not a:
        return []
    m, n = len(a), len(a[0])
    out = []
    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero absolute value in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        a[t], a[i] = a[i], a[t]
        for r in a:
            r[t], r[j] = r[j], r[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    for r in a:
                        r[j] -= q * r[t]
                if a[t][j]:
                    dirty = True
            if not dirty:
                # the pivot must divide the rest of the block
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p), None)
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            # move the smallest remaining entry of row/column t to the pivot
            cands = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]]
            cands += [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
            _, i, j = min(cands)
            a[t], a[i] = a[i], a[t]
            for r in a:
                r[t], r[j] = r[j], r[t]
        out.append(abs(a[t][t]))
        t += 1
    return out


# ---------------------------------------------------------------- corank

class NotCertifiedFreeFactor(ValueError):
    """The subgroup failed the abelian free-factor test."""


@dataclass(frozen=True)
class CorankReport:
    corank: int
    subgroup_rank: int
    certified: bool
    invariant_factors: tuple = field(default=())

    def __str__(self) -> str:
        status = "certified" if self.certified else "NotCertifiedFreeFactor"
        return f"corank {self.corank} ({status})"


def abelian_rows(words: Iterable[FreeWord], order: dict) -> list[list[int]]:
    rows = []
    for w in words:
        row = [0] * len(order)
        for g, e in w.letters:
            row[order[g]] += e
        rows.append(row)
    return rows


def corank_of_free_factor(ambient: Iterable[Gen], words: Iterable[FreeWord], strict: bool = False) -> CorankReport:
    """Rank of the ambient free group minus the rank of the subgroup, with the
    abelian test: a free factor of rank k maps onto a rank-k direct summand."""
    ambient = list(dict.fromkeys(ambient))
    amb = set(ambient)
    words = [w for w in words if w]
    for w in words:
        stray = w.generators() - amb
        if stray:
            raise ValueError(f"word {w} uses generators outside the ambient set: {sorted(stray)}")
    rank = fold(words).rank
    # single-generator words are already basis elements: peel them off before SNF
    singles = {w.letters[0][0] for w in words if len(w) == 1}
    rest = []
    for w in words:
        if len(w) == 1:
            continue
        rest.append(FreeWord((g, e) for g, e in w.letters if g not in singles))
    cols = sorted({g for w in rest for g in w.generators()})
    order = {g: i for i, g in enumerate(cols)}
    factors = tuple([1] * len(singles) + smith_invariants(abelian_rows(rest, order)))
    certified = all(d == 1 for d in factors) and len(factors) == rank
    report = CorankReport(len(ambient) - rank, rank, certified, factors)
    if strict and not certified:
        raise NotCertifiedFreeFactor(f"subgroup is not certified as a free factor: invariant factors {factors}, rank {rank}")
    return report
