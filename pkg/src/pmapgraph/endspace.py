"""End spaces as closed subsets of the Cantor set.

An end space is written as a small expression tree:

    pt, pt!            one end (``!`` marks it as accumulated by loops)
    sum(e1, ..., ek)   finite disjoint union
    seq(e), seq!(e)    countably many copies of e converging to one limit end
    cantor, cantor!    a Cantor set of ends

Each expression is embedded into 2^N structurally, and that embedding is
compiled into a finite automaton over {0, 1}: the state reached after reading
a prefix w describes the cylinder C_w intersected with the space.  Cylinder
emptiness, point membership and "rightmost point" queries all run on that
automaton.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Union

from ._text import ParseError, Scanner


# ---------------------------------------------------------------- cardinals

@dataclass(frozen=True, order=True)
class Cardinal:
    """Cardinality class: a finite count, aleph-0 or the continuum."""

    level: int  # 0 finite, 1 countable, 2 uncountable
    n: int = 0

    @staticmethod
    def finite(n: int) -> "Cardinal":
        return Cardinal(0, n)

    @property
    def is_finite(self) -> bool:
        return self.level == 0

    def __add__(self, other: "Cardinal") -> "Cardinal":
        if self.is_finite and other.is_finite:
            return Cardinal.finite(self.n + other.n)
        return max(self, other)

    def __str__(self) -> str:
        if self.level == 0:
            return str(self.n)
        return "aleph0" if self.level == 1 else "continuum"


ALEPH0 = Cardinal(1)
CONTINUUM = Cardinal(2)
ZERO = Cardinal.finite(0)


# ---------------------------------------------------------------- syntax

@dataclass(frozen=True)
class Pt:
    loops: bool = False


@dataclass(frozen=True)
class Sum:
    parts: tuple = ()


@dataclass(frozen=True)
class Seq:
    body: "Expr"
    loops: bool = False


@dataclass(frozen=True)
class CantorSet:
    loops: bool = False


Expr = Union[Pt, Sum, Seq, CantorSet]


def to_text(e: Expr) -> str:
    if isinstance(e, Pt):
        return "pt!" if e.loops else "pt"
    if isinstance(e, CantorSet):
        return "cantor!" if e.loops else "cantor"
    if isinstance(e, Seq):
        return ("seq!(" if e.loops else "seq(") + to_text(e.body) + ")"
    return "sum(" + ", ".join(to_text(p) for p in e.parts) + ")"


def parse(text: str) -> Expr:
    """Parse the textual grammar; raises ParseError with line and column."""
    sc = Scanner(text)
    e = _parse_expr(sc)
    sc.finish()
    return e


def _parse_expr(sc: Scanner) -> Expr:
    sc.skip_ws()
    start = sc.pos
    name = sc.word()
    bang = sc.text.startswith("!", sc.pos)
    if bang:
        sc.pos += 1
    if name == "pt":
        return Pt(bang)
    if name == "cantor":
        return CantorSet(bang)
    if name == "seq":
        sc.expect("(")
        body = _parse_expr(sc)
        sc.expect(")")
        return Seq(body, bang)
    if name == "sum" and not bang:
        sc.expect("(")
        parts = []
        if not sc.accept(")"):
            parts.append(_parse_expr(sc))
            while sc.accept(","):
                parts.append(_parse_expr(sc))
            sc.expect(")")
        return Sum(tuple(parts))
    raise sc.error(f"unknown constructor {name + ('!' if bang else '')!r}", start)


def parse_expr_prefix(sc: Scanner) -> Expr:
    """Parse one expression from an existing scanner (used by other grammars)."""
    return _parse_expr(sc)


# ---------------------------------------------------------------- validation

@dataclass(frozen=True)
class Violation:
    path: str
    message: str


@dataclass(frozen=True)
class ValidityReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "; ".join(f"{v.path}: {v.message}" for v in self.violations)


class InvalidExpression(ValueError):
    pass


def _has_marked(e: Expr) -> bool:
    if isinstance(e, (Pt, CantorSet)):
        return e.loops
    if isinstance(e, Seq):
        return e.loops or _has_marked(e.body)
    return any(_has_marked(p) for p in e.parts)


def validate(e: Expr) -> ValidityReport:
    found: list[Violation] = []

    def walk(x: Expr, path: str) -> None:
        if isinstance(x, Sum):
            if not x.parts:
                found.append(Violation(path, "empty union"))
            for i, p in enumerate(x.parts):
                walk(p, f"{path}/sum[{i}]")
        elif isinstance(x, Seq):
            if not x.loops and _has_marked(x.body):
                found.append(Violation(path, "marked ends accumulate onto an unmarked limit; E_l is not closed"))
            walk(x.body, f"{path}/seq")
        elif not isinstance(x, (Pt, CantorSet)):
            found.append(Violation(path, f"not an end-space expression: {x!r}"))

    walk(e, "")
    return ValidityReport(tuple(Violation(v.path or "/", v.message) for v in found))


def require_valid(e: Expr) -> None:
    report = validate(e)
    if not report.ok:
        raise InvalidExpression(str(report))


# ---------------------------------------------------------------- predicates

def cardinality_class(e: Expr, which: str = "all") -> Cardinal:
    """Cardinality of all ends, the marked ends or the unmarked ends."""
    if which not in ("all", "marked", "unmarked"):
        raise ValueError(f"unknown filter {which!r}")

    def keep(loops: bool) -> bool:
        return which == "all" or (loops == (which == "marked"))

    def count(x: Expr) -> Cardinal:
        if isinstance(x, Pt):
            return Cardinal.finite(1) if keep(x.loops) else ZERO
        if isinstance(x, CantorSet):
            return CONTINUUM if keep(x.loops) else ZERO
        if isinstance(x, Seq):
            inner = count(x.body)
            copies = ZERO if inner == ZERO else max(inner, ALEPH0)
            return copies + (Cardinal.finite(1) if keep(x.loops) else ZERO)
        total = ZERO
        for p in x.parts:
            total = total + count(p)
        return total

    return count(e)


def has_unmarked_accumulation(e: Expr) -> bool:
    """True iff some end not accumulated by loops is an accumulation point of E."""
    if isinstance(e, Pt):
        return False
    if isinstance(e, CantorSet):
        return not e.loops
    if isinstance(e, Seq):
        return (not e.loops) or has_unmarked_accumulation(e.body)
    return any(has_unmarked_accumulation(p) for p in e.parts)


def tree_part_exceeds(e: Expr) -> bool:
    """False iff some compact open K inside E minus E_l leaves only isolated
    unmarked ends outside it."""

    def ok(x: Expr) -> bool:
        if isinstance(x, (Pt, CantorSet)):
            return True
        if isinstance(x, Seq):
            # an unmarked limit makes the whole block compact open and unmarked;
            # a marked limit forces K to miss all but finitely many copies
            return True if not x.loops else not has_unmarked_accumulation(x.body)
        return all(ok(p) for p in x.parts)

    return not ok(e)


def marked_subexpr(e: Expr) -> Expr | None:
    """An expression for E_l on its own (None when E_l is empty)."""
    if isinstance(e, (Pt, CantorSet)):
        return e if e.loops else None
    if isinstance(e, Seq):
        if not e.loops:
            return None
        body = marked_subexpr(e.body)
        return Pt(True) if body is None else Seq(body, True)
    parts = [m for m in (marked_subexpr(p) for p in e.parts) if m is not None]
    if not parts:
        return None
    return parts[0] if len(parts) == 1 else Sum(tuple(parts))


# ---------------------------------------------------------------- automaton
#
# A state is a nonempty closed subset of 2^N up to shifting; ``None`` is the
# empty set.  States are built once and shared, so derivatives only ever
# return existing objects and identity comparison is meaningful.

class Node:
    __slots__ = ()

    def step(self, bit: str) -> "Node | None":
        raise NotImplementedError


class _Const(Node):
    """The single point bbb... ."""
    __slots__ = ("bit", "loops")

    def __init__(self, bit: str, loops: bool):
        self.bit = bit
        self.loops = loops

    def step(self, bit):
        return self if bit == self.bit else None


class _Full(Node):
    __slots__ = ("loops",)

    def __init__(self, loops: bool):
        self.loops = loops

    def step(self, bit):
        return self


class _Comb(Node):
    """Copies of ``body`` under 1^n 0, limit point 111... ."""
    __slots__ = ("body", "loops")

    def __init__(self, body: Node, loops: bool):
        self.body = body
        self.loops = loops

    def step(self, bit):
        return self.body if bit == "0" else self


class _Branch(Node):
    __slots__ = ("zero", "one")

    def __init__(self, zero: "Node | None", one: "Node | None"):
        self.zero = zero
        self.one = one

    def step(self, bit):
        return self.zero if bit == "0" else self.one


def _selector(parts: list, bits: int) -> Node | None:
    if bits == 0:
        return parts[0] if parts else None
    half = 1 << (bits - 1)
    zero = _selector(parts[:half], bits - 1)
    one = _selector(parts[half:], bits - 1)
    if zero is None and one is None:
        return None
    return _Branch(zero, one)


def compile_expr(e: Expr) -> Node:
    require_valid(e)
    return _compile(e)


def _compile(e: Expr) -> Node:
    if isinstance(e, Pt):
        return _Const("0", e.loops)
    if isinstance(e, CantorSet):
        return _Full(e.loops)
    if isinstance(e, Seq):
        return _Comb(_compile(e.body), e.loops)
    nodes = [_compile(p) for p in e.parts]
    bits = (len(nodes) - 1).bit_length()
    return _selector(nodes, bits)


def _marked(node: Node | None, memo: dict) -> Node | None:
    if node is None:
        return None
    key = id(node)
    if key in memo:
        return memo[key]
    if isinstance(node, (_Const, _Full)):
        out = node if node.loops else None
    elif isinstance(node, _Comb):
        if not node.loops:
            out = None
        else:
            body = _marked(node.body, memo)
            out = _Const("1", True) if body is None else _Comb(body, True)
    else:
        zero = _marked(node.zero, memo)
        one = _marked(node.one, memo)
        out = None if zero is None and one is None else _Branch(zero, one)
    memo[key] = out
    return out


# ---------------------------------------------------------------- points

def _primitive_root(s: str) -> str:
    for d in range(1, len(s) + 1):
        if len(s) % d == 0 and s[:d] * (len(s) // d) == s:
            return s[:d]
    return s


@dataclass(frozen=True)
class EndPoint:
    """Eventually periodic binary sequence ``prefix (period)^inf``, normalized."""

    prefix: str
    period: str

    def __post_init__(self):
        if not self.period or set(self.prefix + self.period) - {"0", "1"}:
            raise ValueError("an end point needs a nonempty binary period")
        period = _primitive_root(self.period)
        prefix = self.prefix
        while prefix and prefix[-1] == period[-1]:
            prefix = prefix[:-1]
            period = period[-1] + period[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    @staticmethod
    def parse(text: str) -> "EndPoint":
        """``0(1)`` means 0111...; a bare word ``w`` is read as ``w(0)``."""
        text = text.strip()
        if "(" in text:
            head, _, rest = text.partition("(")
            return EndPoint(head, rest.rstrip(")"))
        return EndPoint(text, "0")

    def bit(self, i: int) -> str:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def head(self, n: int) -> str:
        return "".join(self.bit(i) for i in range(n))

    def in_cylinder(self, address: str) -> bool:
        return self.head(len(address)) == address

    def __str__(self) -> str:
        return f"{self.prefix}({self.period})"


# ---------------------------------------------------------------- embedded spaces

class EmbeddedSpace:
    """A closed subset of 2^N given by its automaton root."""

    def __init__(self, root: Node | None, label: str = ""):
        self.root = root
        self.label = label

    @property
    def is_empty(self) -> bool:
        return self.root is None

    def node_at(self, address: str) -> Node | None:
        node = self.root
        for b in address:
            if node is None:
                return None
            node = node.step(b)
        return node

    def is_empty_cylinder(self, address: str) -> bool:
        return self.node_at(address) is None

    def children(self, address: str) -> list[str]:
        node = self.node_at(address)
        if node is None:
            return []
        return [address + b for b in "01" if node.step(b) is not None]

    def is_branching(self, address: str) -> bool:
        return len(self.children(address)) == 2

    def contains(self, p: EndPoint) -> bool:
        node = self.root
        for b in p.prefix:
            if node is None:
                return False
            node = node.step(b)
        seen = set()
        phase = 0
        while node is not None:
            key = (id(node), phase)
            if key in seen:
                return True
            seen.add(key)
            node = node.step(p.period[phase])
            phase = (phase + 1) % len(p.period)
        return False

    def member_of(self, p: EndPoint, address: str) -> bool:
        return p.in_cylinder(address) and self.contains(p)

    def rightmost(self, address: str = "") -> EndPoint:
        """The lexicographically largest point of C_address in this space."""
        node = self.node_at(address)
        if node is None:
            raise ValueError(f"cylinder [{address}] is empty")
        bits: list[str] = []
        seen: dict[int, int] = {}
        while id(node) not in seen:
            seen[id(node)] = len(bits)
            nxt = node.step("1")
            b = "1" if nxt is not None else "0"
            bits.append(b)
            node = nxt if nxt is not None else node.step("0")
        start = seen[id(node)]
        return EndPoint(address + "".join(bits[:start]), "".join(bits[start:]))

    def _states(self) -> dict[int, Node]:
        out: dict[int, Node] = {}
        stack = [self.root] if self.root is not None else []
        while stack:
            n = stack.pop()
            if id(n) in out:
                continue
            out[id(n)] = n
            for b in "01":
                m = n.step(b)
                if m is not None:
                    stack.append(m)
        return out

    def _branching_reach(self) -> tuple[set[int], bool]:
        """States from which a branching state is reachable, and whether the
        cylinder tree has infinitely many branching nodes."""
        states = self._states()
        succ = {k: [id(m) for m in (n.step("0"), n.step("1")) if m is not None] for k, n in states.items()}
        branching = {k for k, s in succ.items() if len(s) == 2}
        reach = set(branching)
        changed = True
        while changed:
            changed = False
            for k, s in succ.items():
                if k not in reach and any(t in reach for t in s):
                    reach.add(k)
                    changed = True
        # infinitely many branching addresses iff a cycle lies inside ``reach``
        sub = {k: [t for t in succ[k] if t in reach] for k in reach}
        colour: dict[int, int] = {}

        def cyclic(k: int) -> bool:
            stack = [(k, iter(sub[k]))]
            colour[k] = 1
            while stack:
                v, it = stack[-1]
                for t in it:
                    c = colour.get(t, 0)
                    if c == 1:
                        return True
                    if c == 0:
                        colour[t] = 1
                        stack.append((t, iter(sub[t])))
                        break
                else:
                    colour[v] = 2
                    stack.pop()
            return False

        infinite = any(colour.get(k, 0) == 0 and cyclic(k) for k in sub)
        return reach, infinite

    def branching_addresses(self, max_width: int | None = None) -> Iterator[str]:
        """Branching cylinder addresses in breadth-first order.

        Without ``max_width`` the enumeration only terminates for finite spaces.
        """
        if self.root is None:
            return
        reach, _ = self._branching_reach()
        frontier = [""]
        while frontier:
            nxt = []
            for a in frontier:
                node = self.node_at(a)
                if id(node) not in reach:
                    continue
                kids = self.children(a)
                if len(kids) == 2:
                    yield a
                if max_width is None or len(a) + 1 < max_width:
                    nxt.extend(kids)
            frontier = nxt

    def is_finite(self) -> bool:
        if self.root is None:
            return True
        return not self._branching_reach()[1]

    def sample_points(self, depth: int) -> list[EndPoint]:
        """One point (the rightmost) in every nonempty cylinder of width ``depth``."""
        out = []
        frontier = [""] if self.root is not None else []
        for _ in range(depth):
            frontier = [c for a in frontier for c in self.children(a)]
        for a in frontier:
            out.append(self.rightmost(a))
        return out


class EndSpace:
    """A validated end-space expression with its embedding and marked subset."""

    def __init__(self, expr: Expr | str):
        if isinstance(expr, str):
            expr = parse(expr)
        self.expr = expr
        root = compile_expr(expr)
        self.full = EmbeddedSpace(root, "E")
        self.marked = EmbeddedSpace(_marked(root, {}), "E_l")

    def __repr__(self) -> str:
        return f"EndSpace({to_text(self.expr)!r})"

    def point_is_marked(self, p: EndPoint) -> bool:
        if not self.full.contains(p):
            raise ValueError(f"{p} is not an end of {to_text(self.expr)}")
        return self.marked.contains(p)


@lru_cache(maxsize=512)
def _space_cached(expr: Expr) -> EndSpace:
    return EndSpace(expr)


def space_of(expr: Expr | EndSpace | str) -> EndSpace:
    if isinstance(expr, EndSpace):
        return expr
    if isinstance(expr, str):
        expr = parse(expr)
    return _space_cached(expr)


# thin functional wrappers over the embedding

def cylinder_children(expr, address: str) -> list[str]:
    return space_of(expr).full.children(address)


def is_empty_cylinder(expr, address: str) -> bool:
    return space_of(expr).full.is_empty_cylinder(address)


def member_of(expr, p: EndPoint, address: str) -> bool:
    return space_of(expr).full.member_of(p, address)


# ---------------------------------------------------------------- random expressions

def random_expr(rng: random.Random, depth: int = 4, valid: bool = True) -> Expr:
    """Random expression; with ``valid`` the marked set is kept closed."""

    def build(d: int, allow_marked: bool) -> Expr:
        roll = rng.random()
        if d <= 0 or roll < 0.3:
            mark = allow_marked and rng.random() < 0.5
            return CantorSet(mark) if rng.random() < 0.2 else Pt(mark)
        if roll < 0.65:
            k = rng.randint(1, 4)
            return Sum(tuple(build(d - 1, allow_marked) for _ in range(k)))
        mark = allow_marked and rng.random() < 0.5
        body_marks = allow_marked and (mark or not valid)
        return Seq(build(d - 1, body_marks), mark)

    return build(depth, True)
