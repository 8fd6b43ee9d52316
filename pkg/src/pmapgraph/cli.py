"""Command-line front end: ``pmapgraph <command> ...``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import endspace as es
from .algprops import (
    grigorchuk_relation_check, is_residually_finite, satisfies_tits_alternative_map,
    satisfies_tits_alternative_pmap, wreath_relation_check,
)
from .catalog import CATALOG, lookup
from .cech import DepthExhausted, basis_family, parse_function
from .classify import NACell, NotCBGenerated, build_generating_set, classify_coarse, h1_rank, table_cell
from .flux import AdmissibilityFailure, LadderModel, flux_fast, flux_oracle_report, split_decompose
from .graphmodel import (
    GraphDescriptor, InvalidGraph, NotDecomposable, NotFiniteType, characteristic_triple, load_descriptor,
    parse_descriptor, pmap_isomorphism_type, wedge_decomposition,
)
from .mcgelems import parse_mapping_word
from ._text import ParseError

DEFAULT_FLUX_GRAPH = "rank = inf\nends = sum(pt!, pt!)"


class UsageError(Exception):
    pass


class Reporter:
    def __init__(self, command: str, fmt: str):
        self.command = command
        self.fmt = fmt
        self.fields: list[tuple[str, str]] = []

    def say(self, text: str = "") -> None:
        if self.fmt == "text":
            print(text)

    def result(self, key: str, value) -> None:
        self.fields.append((key, str(value)))

    def finish(self) -> None:
        parts = [f"command={self.command}"]
        for k, v in self.fields:
            parts.append(f"{k}={v}" if " " not in v and v else f'{k}="{v}"')
        print("#RESULT " + " ".join(parts))


# ---------------------------------------------------------------- inputs

def _load_graph(args, default: str | None = None) -> GraphDescriptor:
    ref = getattr(args, "graph_opt", None) or getattr(args, "graph", None)
    if ref is None:
        if default is None:
            raise UsageError("a graph is required (positional or --graph)")
        return parse_descriptor(default, "default")
    if ref.startswith("catalog:"):
        try:
            return lookup(ref.split(":", 1)[1]).graph
        except KeyError:
            raise UsageError(f"no catalog graph {ref!r}") from None
    path = Path(ref)
    if not path.is_file():
        raise UsageError(f"graph file not found: {ref}")
    return load_descriptor(path)


def _model(g: GraphDescriptor, depth: int | None) -> LadderModel:
    if not g.infinite_rank:
        raise UsageError("flux needs an infinite-rank graph")
    return LadderModel(g.ends, depth)


def _word(model: LadderModel, text: str):
    word = parse_mapping_word(text)
    try:
        model.check_word(word)
    except ValueError as err:
        raise UsageError(str(err)) from None
    return word


# ---------------------------------------------------------------- commands

def cmd_classify(args, out: Reporter) -> int:
    g = _load_graph(args)
    c = classify_coarse(g)
    out.say(f"graph: {g.name or 'input'}  triple {characteristic_triple(g)}")
    out.say(f"class: {c.label}")
    try:
        cell = table_cell(g)
        out.say(f"table cell: column {cell[0]}, row {cell[1]}")
        out.result("cell", f"{cell[0]}|{cell[1]}")
    except NACell as err:
        out.say(f"table cell: N/A ({err})")
        out.result("cell", "N/A")
    for note in c.notes:
        out.say(f"  because: {note}")
    w = wedge_decomposition(g)
    out.say(f"wedge: {w}")
    out.result("class", c.label)
    out.result("cb", c.is_cb)
    out.result("cb_generated", c.is_cb_generated)
    out.result("locally_cb", c.is_locally_cb)
    return 0


def cmd_h1(args, out: Reporter) -> int:
    g = _load_graph(args)
    r = h1_rank(g)
    out.say(f"rank of H^1(PMap; Z) = {r}  [0 if at most one end is accumulated by loops, "
            "n - 1 for n such ends, aleph0 otherwise]")
    out.result("h1", r)
    return 0


def cmd_basis(args, out: Reporter) -> int:
    g = _load_graph(args)
    if g.ends is None:
        raise UsageError("the graph has no ends")
    space = es.space_of(g.ends)
    sp = space.marked if args.marked else space.full
    if sp.is_empty:
        out.say("the selected end space is empty; the basis is empty")
        out.result("size", 0)
        return 0
    depth = args.depth if args.depth is not None else (None if sp.is_finite() else 3)
    basis = basis_family(sp, depth)
    out.say(f"basis of locally constant functions mod constants on {'E_l' if args.marked else 'E'}"
            f" ({'complete' if basis.complete else f'to width {basis.depth}'}):")
    for i, a in enumerate(basis.addresses, start=1):
        out.say(f"  A{i} = [{a}]")
    out.result("size", len(basis))
    out.result("basis", ",".join(basis.addresses) or "-")
    if args.clopen:
        f = parse_function(sp, args.clopen)
        cls = f.quotient_class(basis if basis.covers(f.width()) else basis_family(sp, f.width()))
        out.say(f"{args.clopen} = {cls} modulo constants")
        out.result("decomposition", str(cls).replace(" ", ""))
    return 0


def cmd_flux(args, out: Reporter) -> int:
    g = _load_graph(args, DEFAULT_FLUX_GRAPH)
    model = _model(g, args.depth)
    if args.word is None or args.clopen is None:
        raise UsageError("flux needs --word and --clopen")
    word = _word(model, args.word)
    clopen = model.parse_clopen(args.clopen)
    fast = flux_fast(model, word, clopen)
    report = flux_oracle_report(model, word, clopen)
    agree = fast == report.flux
    out.say(f"fast={fast} oracle={report.flux} {'AGREE' if agree else 'DISAGREE'}")
    out.say(f"  oracle window m={report.m}, n={report.n}: cork(A_m,A_n)={report.cork_identity}, "
            f"cork(A_m,f(A_n))={report.cork_image}")
    out.result("fast", fast)
    out.result("oracle", report.flux)
    out.result("agree", agree)
    if not agree:
        return 1
    return 0


def cmd_decompose(args, out: Reporter) -> int:
    g = _load_graph(args, DEFAULT_FLUX_GRAPH)
    model = _model(g, args.depth)
    if args.word is None:
        raise UsageError("decompose needs --word")
    word = _word(model, args.word)
    vec, residual = split_decompose(model, word)
    out.say(f"flux vector: {vec}")
    out.say(f"residual (zero flux): {residual}")
    out.result("flux", ",".join(map(str, vec)) or "-")
    out.result("residual", str(residual).replace(" ", "*"))
    return 0


def cmd_genset(args, out: Reporter) -> int:
    g = _load_graph(args)
    s = build_generating_set(g)
    out.say(str(s))
    out.result("W", len(s.word_maps))
    out.result("B", len(s.swaps))
    out.result("H", len(s.shifts))
    return 0


def cmd_props(args, out: Reporter) -> int:
    g = _load_graph(args)
    rf = is_residually_finite(g)
    ta = satisfies_tits_alternative_pmap(g)
    tam = satisfies_tits_alternative_map(g)
    out.say(f"residually finite: {rf}  [iff finite rank]")
    out.say(f"Tits alternative for PMap: {ta}  [iff finite rank]")
    out.say(f"Tits alternative for Map: {tam}  [iff finite rank and finite end space]")
    try:
        out.say(f"PMap is isomorphic to {pmap_isomorphism_type(g)}")
    except NotFiniteType:
        pass
    out.result("rf", rf)
    out.result("ta_pmap", ta)
    out.result("ta_map", tam)
    return 0


def cmd_witness(args, out: Reporter) -> int:
    if args.kind == "wreath":
        n = args.n
        ms = [args.m] if args.m else [1, 2, 3]
        ok = all(wreath_relation_check(n, m, i) for m in ms for i in (0, 1))
        out.say(f"h^m g = g' h^m for the generators of rose copies (n={n}, m in {ms}): {ok}")
        out.result("wreath", ok)
        return 0 if ok else 1
    depth = args.depth or 3
    report = grigorchuk_relation_check(depth)
    for rel, ok in report.items():
        out.say(f"  {rel}: {ok}")
    ok = all(report.values())
    out.result("grigorchuk_depth", depth)
    out.result("relations", ok)
    return 0 if ok else 1


def cmd_selftest(args, out: Reporter) -> int:
    from .selftest import run_all
    results = run_all()
    for r in results:
        out.say(r.line())
    passed = sum(r.ok for r in results)
    out.result("passed", f"{passed}/{len(results)}")
    return 0 if passed == len(results) else 1


COMMANDS = {
    "classify": cmd_classify, "h1": cmd_h1, "basis": cmd_basis, "flux": cmd_flux,
    "decompose": cmd_decompose, "genset": cmd_genset, "props": cmd_props,
    "witness": cmd_witness, "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pmapgraph", description="Pure mapping class groups of infinite graphs.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "machine"], default="text")
    sub = p.add_subparsers(dest="command", required=True)

    def with_graph(name, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.add_argument("graph", nargs="?", help="graph descriptor file, or catalog:<key>")
        sp.add_argument("-g", "--graph", dest="graph_opt", help="graph descriptor file, or catalog:<key>")
        sp.add_argument("--depth", type=int)
        return sp

    with_graph("classify", "coarse classification and table cell")
    with_graph("h1", "rank of the first cohomology")
    b = with_graph("basis", "basis of locally constant functions mod constants")
    b.add_argument("--clopen", help="function literal to decompose, e.g. '2*[00] + -1*[10]'")
    b.add_argument("--marked", action="store_true", help="use the ends accumulated by loops")
    f = with_graph("flux", "flux through a clopen, fast and oracle")
    f.add_argument("--word", help="mapping class word, e.g. 'shift(1)^2 swap({1.0},{0.1})'")
    f.add_argument("--clopen", help="union of cylinders, e.g. '[A1]' or '[0] + [11]'")
    d = with_graph("decompose", "split a word into flux part and zero-flux residual")
    d.add_argument("--word")
    with_graph("genset", "generating set of a CB-generated group")
    with_graph("props", "residual finiteness and Tits alternative")
    w = sub.add_parser("witness", parents=[common], help="finite witness checks")
    w.add_argument("kind", choices=["wreath", "grigorchuk"])
    w.add_argument("--depth", type=int)
    w.add_argument("--n", type=int, default=2)
    w.add_argument("--m", type=int)
    sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage
        return int(exc.code or 0)
    out = Reporter(args.command, args.format)
    try:
        code = COMMANDS[args.command](args, out)
    except (UsageError, ParseError, InvalidGraph, es.InvalidExpression, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (DepthExhausted, AdmissibilityFailure, NotFiniteType, NotCBGenerated, NACell, ValueError,
            IndexError) as err:
        print(f"computation error: {err}", file=sys.stderr)
        return 1
    out.finish()
    return code


if __name__ == "__main__":
    sys.exit(main())
