"""Headless acceptance suite; each criterion returns a CriterionResult."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass

from . import endspace as es
from .algprops import (
    grigorchuk_relation_check, is_residually_finite, satisfies_tits_alternative_map,
    satisfies_tits_alternative_pmap, wreath_relation_check,
)
from .catalog import CATALOG, TABLE_GRAPHS
from .cech import LocallyConstantFn, basis_family, chom_rank_class, structure_terms
from .classify import classify_coarse, h1_rank, table_cell
from .endspace import ALEPH0, Cardinal, EndPoint
from .flux import (
    Clopen, LadderModel, _cells_under, flux_fast, flux_of_complement, flux_of_difference,
    flux_of_disjoint_union, flux_of_empty_and_full, flux_oracle, flux_vector, random_word, section,
    split_decompose,
)
from .freegroup import FreeWord
from .graphmodel import GraphDescriptor, INF, parse_descriptor
from .mcgelems import (
    Element, LoopShift, LoopSwap, MappingClassWord, WordMap, involution_generators, compose_word, nielsen_generator,
)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    ok: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"[{status}] {self.number}. {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _timed(number: int, name: str, fn) -> CriterionResult:
    start = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as err:  # a crash is a failure, reported rather than raised
        ok, detail = False, f"raised {type(err).__name__}: {err}"
    return CriterionResult(number, name, ok, detail, time.perf_counter() - start)


# ---------------------------------------------------------------- 1

def table_reproduction() -> tuple[bool, str]:
    start = time.perf_counter()
    bad = []
    for entry in TABLE_GRAPHS:
        g = entry.graph
        label = classify_coarse(g).label
        cell = table_cell(g)
        if label != entry.label or cell != entry.cell:
            bad.append(f"{entry.key}: got {label} at {cell}, want {entry.label} at {entry.cell}")
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 1.0
    return ok, f"{len(TABLE_GRAPHS) - len(bad)}/{len(TABLE_GRAPHS)} match, {elapsed * 1000:.0f} ms" + (
        "; " + "; ".join(bad) if bad else "")


# ---------------------------------------------------------------- 2

H1_CASES = (
    ("rank = 3\nends = sum(pt, pt)", Cardinal.finite(0)),
    ("rank = inf\nends = pt!", Cardinal.finite(0)),
    ("rank = inf\nends = sum(pt!, pt!)", Cardinal.finite(1)),
    ("rank = inf\nends = sum(pt!, pt!, pt!, pt!, pt!)", Cardinal.finite(4)),
    ("rank = inf\nends = cantor!", ALEPH0),
)


def graph_for(expr) -> GraphDescriptor:
    marked = es.cardinality_class(expr, "marked")
    return GraphDescriptor(INF if marked != es.ZERO else 2, expr)


def h1_formula(seed: int = 2, samples: int = 50) -> tuple[bool, str]:
    bad = []
    for text, want in H1_CASES:
        got = h1_rank(parse_descriptor(text))
        if got != want:
            bad.append(f"{text!r}: {got} != {want}")
    rng = random.Random(seed)
    for _ in range(samples):
        e = es.random_expr(rng, 4)
        g = graph_for(e)
        a, b = h1_rank(g), chom_rank_class(es.space_of(e).marked)
        if a != b:
            bad.append(f"{es.to_text(e)}: formula {a}, cech {b}")
    return not bad, f"{len(H1_CASES)} fixed cases + {samples} random expressions" + (
        "; " + "; ".join(bad[:3]) if bad else ", all equal")


# ---------------------------------------------------------------- 3

FLUX_GRAPHS = (
    "sum(pt!, pt!)",
    "sum(pt!, seq!(pt), cantor)",
    "sum(pt!, pt!, pt!)",
    "sum(seq!(pt), pt!, pt, pt!)",
    "sum(pt!, pt!, pt!, pt!)",
    "sum(pt!, seq!(sum(pt, pt)), pt!, pt!)",
)


def flux_agreement(seed: int = 3, words: int = 200) -> tuple[bool, str]:
    start = time.perf_counter()
    rng = random.Random(seed)
    models = [LadderModel(e) for e in FLUX_GRAPHS]
    bad = []
    checks = 0
    for k in range(words):
        model = models[k % len(models)]
        w = random_word(rng, model.ladders, rng.randint(0, 8))
        for i in range(1, model.ladders + 1):
            fast = flux_fast(model, w, model.basis_clopen(i))
            oracle = [flux_oracle(model, w, i, extra=e) for e in (0, 1, 2)]
            checks += 1
            if len(set(oracle)) != 1 or oracle[0] != fast:
                bad.append(f"{w} on A{i}: fast {fast}, oracle {oracle}")
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    return ok, f"{checks} (word, index) pairs, {len(bad)} disagreements, {elapsed:.1f}s" + (
        "; " + bad[0] if bad else "")


# ---------------------------------------------------------------- 4

SPLIT_GRAPH = "sum(pt!, pt!, pt!, pt!, pt!, pt!, pt!)"


def splitting(seed: int = 4, vectors: int = 100, words: int = 200, oracle_words: int = 40) -> tuple[bool, str]:
    rng = random.Random(seed)
    model = LadderModel(SPLIT_GRAPH)
    n = model.ladders
    bad = []
    for _ in range(vectors):
        support = rng.sample(range(1, n + 1), rng.randint(0, min(5, n)))
        v = {i: rng.choice([k for k in range(-10, 11) if k]) for i in support}
        want = tuple(v.get(i, 0) for i in range(1, n + 1))
        got = flux_vector(model, section(model, v))
        if got != want:
            bad.append(f"section {want} projects to {got}")
    for k in range(words):
        w = random_word(rng, n, rng.randint(0, 8))
        vec, residual = split_decompose(model, w)
        if any(flux_vector(model, residual)):
            bad.append(f"residual of {w} has flux")
        if k < oracle_words and any(flux_oracle(model, residual, i) for i in range(1, n + 1)):
            bad.append(f"oracle sees flux in the residual of {w}")
    return not bad, f"{vectors} section round trips, {words} residuals ({oracle_words} also by oracle)" + (
        "; " + bad[0] if bad else ", all exact")


# ---------------------------------------------------------------- 5

ALGEBRA_GRAPHS = ("sum(pt!, pt!, pt!, pt!)", "sum(pt!, seq!(pt), pt!)", "sum(pt!, pt!, pt!, pt!, pt!)")


def _random_split(rng, model, width=3):
    cells = sorted(_cells_under(model.space, "", width))
    labels = [rng.randrange(3) for _ in cells]
    pick = lambda k: Clopen.of_cylinders(model.space, [c for c, l in zip(cells, labels) if l == k]) \
        if k in labels else Clopen.empty(model.space)
    return pick(0), pick(1), pick(2)


def flux_algebra(seed: int = 5, instances: int = 100) -> tuple[bool, str]:
    rng = random.Random(seed)
    models = [LadderModel(e) for e in ALGEBRA_GRAPHS]
    counts = dict.fromkeys(["complement", "union", "difference", "empty/full", "homomorphism"], 0)
    bad = []
    for k in range(instances):
        model = models[k % len(models)]
        w = random_word(rng, model.ladders, rng.randint(1, 8))
        a, b, _ = _random_split(rng, model)
        for route in ("fast", "oracle"):
            x, y = flux_of_complement(model, w, a, route)
            if x != y:
                bad.append(f"complement {route}: {x} != {y}")
            x, y = flux_of_disjoint_union(model, w, a, b, route)
            if x != y:
                bad.append(f"union {route}: {x} != {y}")
            outer = a | b
            x, y = flux_of_difference(model, w, outer, b, route)
            if x != y:
                bad.append(f"difference {route}: {x} != {y}")
            x, y = flux_of_empty_and_full(model, w, route)
            if x or y:
                bad.append(f"empty/full {route}: {x}, {y}")
        counts["complement"] += 1
        counts["union"] += 1
        counts["difference"] += 1
        counts["empty/full"] += 1
        u = random_word(rng, model.ladders, rng.randint(0, 8))
        c = a if not a.is_empty else model.basis_clopen(1)
        for route_fn in (flux_fast, flux_oracle):
            lhs = route_fn(model, w * u, c)
            rhs = route_fn(model, w, c) + route_fn(model, u, c)
            if lhs != rhs:
                bad.append(f"homomorphism via {route_fn.__name__}: {lhs} != {rhs}")
        counts["homomorphism"] += 1
    summary = ", ".join(f"{k} x{v}" for k, v in counts.items())
    return not bad, summary + " (fast and oracle)" + ("; " + bad[0] if bad else "")


# ---------------------------------------------------------------- 6

def _all_addresses(width: int) -> list[str]:
    out = [""]
    for k in range(1, width + 1):
        out += [format(x, f"0{k}b") for x in range(2 ** k)]
    return out


def independence_witness(space, coeffs: dict[str, int]) -> tuple[EndPoint, EndPoint, int]:
    """For a nonzero combination of basis indicators, two points whose values
    differ by the coefficient of its deepest term: w0 1111... and w 1111... ."""
    deepest = max(coeffs, key=lambda a: (len(a), a))
    w = deepest[:-1]
    return space.rightmost(deepest), space.rightmost(w + "1"), coeffs[deepest]


def cech_suite(seed: int = 6, width: int = 4, trials: int = 100) -> tuple[bool, str]:
    space = es.space_of(es.CantorSet(False)).full
    basis = basis_family(space, width)
    samples = space.sample_points(width)
    bad = []
    for w in _all_addresses(width):
        canon = LocallyConstantFn.indicator(space, w).canonical(basis)
        for p in samples:
            if canon.evaluate(p) != int(p.in_cylinder(w)):
                bad.append(f"decomposition of [{w}] wrong at {p}")
                break
        pos, negs = structure_terms(space, w, basis)
        if any(not n.startswith(pos) or n == pos for n in negs):
            bad.append(f"[{w}]: positive term does not contain the negatives")
        if any(a != b and (a.startswith(b) or b.startswith(a)) for a in negs for b in negs):
            bad.append(f"[{w}]: negative terms overlap")
        for p in samples:
            inside = p.in_cylinder(pos) and not any(p.in_cylinder(n) for n in negs)
            if inside != p.in_cylinder(w):
                bad.append(f"[{w}] is not positive minus negatives at {p}")
                break
    rng = random.Random(seed)
    for _ in range(trials):
        chosen = rng.sample(basis.addresses, rng.randint(1, len(basis)))
        coeffs = {a: rng.choice([k for k in range(-5, 6) if k]) for a in chosen}
        f = LocallyConstantFn.make(space, coeffs)
        p, q, c = independence_witness(space, coeffs)
        if f.evaluate(p) - f.evaluate(q) != c:
            bad.append(f"w1-tail test failed for {f}")
        if f.quotient_class(basis).is_zero:
            bad.append(f"{f} canonicalized to zero")
    n = len(_all_addresses(width))
    return not bad, f"{n} cylinders to width {width}, {len(basis)} basis elements, {trials} independence trials" + (
        "; " + bad[0] if bad else ", all exact")


# ---------------------------------------------------------------- 7

def _random_core_word(rng, n=4, length=4) -> FreeWord:
    return FreeWord(((0, rng.randint(1, n)), rng.choice([1, -1])) for _ in range(rng.randint(0, length)))


def _random_core_map(rng, n=4):
    if rng.random() < 0.5:
        a, b = rng.sample(range(1, n + 1), 2)
        return LoopSwap(((0, a),), ((0, b),))
    i, j = rng.sample(range(1, n + 1), 2)
    return nielsen_generator(rng.choice(["flip", "transposition", "left", "right"]), n, i, j)


def generator_laws(seed: int = 7, instances: int = 200) -> tuple[bool, str]:
    rng = random.Random(seed)
    bad = []
    for n in range(1, 9):
        for g in involution_generators(n):
            if not (g.subst * g.subst).is_identity:
                bad.append(f"{g} is not an involution in rank {n}")
    for _ in range(instances):
        w1, w2 = _random_core_word(rng), _random_core_word(rng)
        interval = rng.randint(1, 5)
        got = compose_word(MappingClassWord((WordMap(w1, interval), WordMap(w2, interval))))
        if got != Element.make({interval: w1 * w2}, got.subst) or not got.subst.is_identity:
            bad.append(f"word maps {w1}, {w2} do not multiply")
        psi = _random_core_map(rng)
        w = _random_core_word(rng)
        got = compose_word(MappingClassWord((psi, WordMap(w, interval), psi.inverse())))
        want = Element.make({interval: psi.substitution().apply(w)}, psi.substitution() * psi.inverse().substitution())
        if got != want or not got.subst.is_identity:
            bad.append(f"conjugating wm({w}) by {psi} gives {got}")
        a = (rng.randint(0, 3), rng.randint(-3, 3))
        b = (rng.randint(0, 3), rng.randint(-3, 3))
        if a != b:
            s = LoopSwap((a,), (b,))
            if not compose_word(MappingClassWord((s, s))).is_identity:
                bad.append(f"{s} is not an involution")
        sh = LoopShift(rng.randint(1, 4), rng.choice([-3, -2, -1, 1, 2, 3]))
        if not compose_word(MappingClassWord((sh, sh.inverse()))).is_identity:
            bad.append(f"{sh} does not cancel")
    return not bad, f"involutions for n<=8, {instances} instances of each law" + ("; " + bad[0] if bad else ", all exact")


# ---------------------------------------------------------------- 8

def witnesses() -> tuple[bool, str]:
    bad = []
    for n in (1, 2, 3):
        for m in (1, 2, 3):
            for i in (0, 1):
                if not wreath_relation_check(n, m, i):
                    bad.append(f"wreath n={n} m={m} i={i}")
    for depth in range(1, 6):
        report = grigorchuk_relation_check(depth)
        for rel in ("a^2", "b^2", "c^2", "d^2", "bcd"):
            if not report[rel]:
                bad.append(f"Grigorchuk {rel} at depth {depth}")
    return not bad, "wreath n,m<=3 and Grigorchuk depth<=5" + ("; " + ", ".join(bad) if bad else ", all relations hold")


# ---------------------------------------------------------------- 9

EXTRA_PREDICATE_GRAPHS = (
    ("rank = 4\nends = cantor", (True, True, False)),
    ("rank = inf\nends = pt!", (False, False, False)),
    ("rank = 2\nends = sum(pt, pt, pt)", (True, True, True)),
)


def predicate_coherence() -> tuple[bool, str]:
    bad = []
    graphs = [(e.key, e.graph) for e in CATALOG] + [(t, parse_descriptor(t)) for t, _ in EXTRA_PREDICATE_GRAPHS]
    for key, g in graphs:
        rf, ta, tam = is_residually_finite(g), satisfies_tits_alternative_pmap(g), satisfies_tits_alternative_map(g)
        if rf != ta:
            bad.append(f"{key}: RF {rf} but TA(PMap) {ta}")
        if tam != (ta and g.ends_count("all").is_finite):
            bad.append(f"{key}: TA(Map) {tam}")
    for text, want in EXTRA_PREDICATE_GRAPHS:
        g = parse_descriptor(text)
        got = (is_residually_finite(g), satisfies_tits_alternative_pmap(g), satisfies_tits_alternative_map(g))
        if got != want:
            bad.append(f"{text!r}: {got} != {want}")
    return not bad, f"{len(graphs)} graphs" + ("; " + bad[0] if bad else ", coherent")


CRITERIA = (
    (1, "Table reproduction", table_reproduction),
    (2, "H1 rank formula", h1_formula),
    (3, "Flux oracle agreement", flux_agreement),
    (4, "Splitting", splitting),
    (5, "Flux algebra", flux_algebra),
    (6, "Cech basis suite", cech_suite),
    (7, "Generator laws", generator_laws),
    (8, "Wreath and Grigorchuk witnesses", witnesses),
    (9, "Predicate coherence", predicate_coherence),
)


def run_all() -> list[CriterionResult]:
    return [_timed(n, name, fn) for n, name, fn in CRITERIA]
