"""Locally constant integer functions on an end space, modulo constants.

The basis used here has one element per branching cylinder: if both halves
of C_w meet the space, then C_{w0} is a basis element.  On the full Cantor
set this is C_0, C_00, C_10, C_000, ... and for a finite space of n points
it has n - 1 elements.  The indicator of any cylinder is an integer
combination of basis indicators and the constant function.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .endspace import ALEPH0, Cardinal, EmbeddedSpace, EndPoint, EndSpace, space_of
from ._text import Scanner


class DepthExhausted(ValueError):
    """A cylinder is wider than the truncated basis can describe."""


def _as_space(space) -> EmbeddedSpace:
    if isinstance(space, EmbeddedSpace):
        return space
    return space_of(space).full


def address_key(address: str) -> tuple[int, int]:
    """Order by width, then by the address read as binary with its first bit
    least significant (C_0, C_00, C_10, C_000, C_100, ...)."""
    return len(address), int(address[::-1], 2) if address else 0


@dataclass(frozen=True)
class BasisFamily:
    space: EmbeddedSpace
    depth: int
    addresses: tuple  # sorted basis addresses, all ending in "0"
    complete: bool  # True when no deeper basis elements exist

    def __len__(self) -> int:
        return len(self.addresses)

    def index(self, address: str) -> int:
        """1-based index of a basis address."""
        try:
            return self._lookup[address]
        except KeyError:
            raise KeyError(f"[{address}] is not a basis cylinder") from None

    @property
    def _lookup(self) -> dict:
        table = self.__dict__.get("_table")
        if table is None:
            table = {a: i + 1 for i, a in enumerate(self.addresses)}
            object.__setattr__(self, "_table", table)
        return table

    def address(self, i: int) -> str:
        if not 1 <= i <= len(self.addresses):
            raise IndexError(f"basis index {i} outside 1..{len(self.addresses)}")
        return self.addresses[i - 1]

    def covers(self, width: int) -> bool:
        return self.complete or width <= self.depth


def basis_family(space, depth: int | None = None) -> BasisFamily:
    """Basis cylinders of width at most ``depth``.

    With ``depth=None`` the full basis is returned, which requires a finite space.
    """
    sp = _as_space(space)
    if depth is None:
        if not sp.is_finite():
            raise DepthExhausted("an infinite space needs an explicit basis depth")
        addrs = [w + "0" for w in sp.branching_addresses()]
        d = max((len(a) for a in addrs), default=0)
        return BasisFamily(sp, d, tuple(sorted(addrs, key=address_key)), True)
    if depth < 1:
        raise ValueError("basis depth must be positive")
    addrs = [w + "0" for w in sp.branching_addresses(max_width=depth)]
    complete = sp.is_finite() and all(len(w) < depth for w in sp.branching_addresses())
    return BasisFamily(sp, depth, tuple(sorted(addrs, key=address_key)), complete)


# ---------------------------------------------------------------- functions

@dataclass(frozen=True)
class LocallyConstantFn:
    """Sum of coef * indicator(C_address); the address "" is the constant 1."""

    space: EmbeddedSpace
    terms: tuple  # ((address, coef), ...) sorted, no zero coefficients

    @staticmethod
    def make(space, terms) -> "LocallyConstantFn":
        sp = _as_space(space)
        acc: dict[str, int] = {}
        for addr, c in (terms.items() if isinstance(terms, dict) else terms):
            acc[addr] = acc.get(addr, 0) + c
        return LocallyConstantFn(sp, tuple(sorted(((a, c) for a, c in acc.items() if c), key=lambda t: address_key(t[0]))))

    @staticmethod
    def indicator(space, address: str) -> "LocallyConstantFn":
        return LocallyConstantFn.make(space, {address: 1})

    def _check(self, other: "LocallyConstantFn") -> None:
        if other.space is not self.space:
            raise ValueError("functions live on different end spaces")

    def __add__(self, other: "LocallyConstantFn") -> "LocallyConstantFn":
        self._check(other)
        return LocallyConstantFn.make(self.space, list(self.terms) + list(other.terms))

    def __neg__(self) -> "LocallyConstantFn":
        return LocallyConstantFn(self.space, tuple((a, -c) for a, c in self.terms))

    def __sub__(self, other: "LocallyConstantFn") -> "LocallyConstantFn":
        return self + (-other)

    def scale(self, k: int) -> "LocallyConstantFn":
        return LocallyConstantFn.make(self.space, [(a, k * c) for a, c in self.terms])

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficients(self) -> dict[str, int]:
        return dict(self.terms)

    def evaluate(self, p: EndPoint) -> int:
        if not self.space.contains(p):
            raise ValueError(f"{p} is not a point of the space")
        return sum(c for a, c in self.terms if p.in_cylinder(a))

    def width(self) -> int:
        return max((len(a) for a, _ in self.terms), default=0)

    def canonical(self, basis: BasisFamily | None = None) -> "LocallyConstantFn":
        """Rewrite over basis cylinders plus the constant term."""
        basis = basis or basis_family(self.space, max(1, self.width()))
        out: dict[str, int] = {}
        for addr, c in self.terms:
            for a, k in _expand(self.space, addr, basis).items():
                out[a] = out.get(a, 0) + c * k
        return LocallyConstantFn.make(self.space, out)

    def quotient_class(self, basis: BasisFamily | None = None) -> "LocallyConstantFn":
        """Canonical representative modulo constants (zero constant term)."""
        canon = self.canonical(basis)
        return LocallyConstantFn(self.space, tuple(t for t in canon.terms if t[0] != ""))

    def equals_mod_constants(self, other: "LocallyConstantFn") -> bool:
        self._check(other)
        return (self - other).quotient_class().is_zero

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*[{a}]" for a, c in self.terms)


def _expand(space: EmbeddedSpace, address: str, basis: BasisFamily) -> dict[str, int]:
    """Indicator of C_address as a combination of basis cylinders and "" ."""
    if space.is_empty_cylinder(address):
        return {}
    if not basis.covers(len(address)):
        raise DepthExhausted(f"cylinder [{address}] is wider than basis depth {basis.depth}")
    # shortest prefix cutting out the same set
    v = address
    while v and not space.is_branching(v[:-1]):
        v = v[:-1]
    if v == "":
        return {"": 1}
    parent = v[:-1]
    if v[-1] == "0":
        return {v: 1}
    # C_{p1} = C_p minus C_{p0}
    out = _expand(space, parent, basis)
    out[parent + "0"] = out.get(parent + "0", 0) - 1
    return out


def decompose_indicator(space, address: str, basis: BasisFamily | None = None) -> LocallyConstantFn:
    """Class of the indicator of C_address modulo constants, over the basis."""
    sp = _as_space(space)
    if sp.is_empty_cylinder(address):
        raise ValueError(f"cylinder [{address}] is empty")
    basis = basis or basis_family(sp, max(1, len(address)))
    return LocallyConstantFn.indicator(sp, address).quotient_class(basis)


def structure_terms(space, address: str, basis: BasisFamily | None = None) -> tuple[str, list[str]]:
    """The decomposition as one containing cylinder minus disjoint basis cylinders.

    Returns (positive address, negative addresses) with C = positive minus the union
    of the negatives.
    """
    sp = _as_space(space)
    basis = basis or basis_family(sp, max(1, len(address)))
    full = _expand(sp, address, basis)
    pos = [a for a, c in full.items() if c > 0]
    neg = [a for a, c in full.items() if c < 0]
    if len(pos) != 1 or any(full[a] != -1 for a in neg):
        raise AssertionError(f"unexpected decomposition {full}")
    return pos[0], neg


def separating_point(space, address: str) -> EndPoint:
    """The point w1111... used to detect coefficients (snapped into the space)."""
    sp = _as_space(space)
    return sp.rightmost(address)


def chom_rank_class(space) -> Cardinal:
    """Rank of the group of locally constant functions modulo constants."""
    sp = _as_space(space)
    if sp.is_empty:
        return Cardinal.finite(0)
    if not sp.is_finite():
        return ALEPH0
    return Cardinal.finite(sum(1 for _ in sp.branching_addresses()))


_TERM = re.compile(r"\s*([+-]?)\s*(?:([+-]?\d+)\s*\*\s*)?\[([01]*)\]\s*")


def parse_function(space, text: str) -> LocallyConstantFn:
    """Read ``2*[00] + -1*[10]``; ``[]`` is the constant function."""
    sc = Scanner(text)
    terms: list[tuple[str, int]] = []
    while not sc.at_end() or not terms:
        m = _TERM.match(text, sc.pos)
        if m is None:
            raise sc.error("expected a term like 2*[01]")
        sign, coef, addr = m.groups()
        if terms and not sign:
            raise sc.error("expected '+' or '-' between terms")
        value = int(coef) if coef else 1
        terms.append((addr, -value if sign == "-" else value))
        sc.pos = m.end()
    return LocallyConstantFn.make(space, terms)
