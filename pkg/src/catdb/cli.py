"""Command-line front end.

Exit codes: 0 success, 1 validation failure (including NotEqualWithinBound),
2 search bound or budget reached (including PossiblyInfinite), 3 unreadable
input.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from . import formats
from .errors import CatDBError, ParseError
from .instance import (category_of_elements, enumerate_nat_trans, export_rdf, instance_colimit,
                       instance_limit, representable, validate_instance)
from .kleisli import (BUILTIN_MONADS, KleisliInstance, make_monad, markov_power, monad_laws_check,
                      transition_matrix, validate_kleisli_instance)
from .migrate import delta, pi, sigma
from .schema import DEFAULT_BOUND, Verdict, check_schema_morphism, hom_set, paths_equal

EXIT_OK, EXIT_INVALID, EXIT_BOUND, EXIT_PARSE = 0, 1, 2, 3


def _monad(args, doc):
    if getattr(args, "monad", None):
        words = args.monad.split()
        try:
            return make_monad(words[0], words[1:])
        except ValueError as e:
            raise ParseError(str(e)) from None
    return doc.monad


def _load(args):
    doc = formats.load_schema(args.schema)
    return doc, _monad(args, doc)


def _instance(path, doc, monad):
    if monad is not None:
        return formats.read_kleisli_instance(path, doc.schema, monad)
    return formats.read_instance(path, doc.schema)


def _validate(inst):
    if isinstance(inst, KleisliInstance):
        return validate_kleisli_instance(inst)
    return validate_instance(inst)


def _emit(inst, args, out):
    if getattr(args, "output", None):
        formats.write_instance(inst, args.output)
    else:
        out.write(formats.format_instance(inst))


# ---------------------------------------------------------------------------
# subcommands

def cmd_validate(args, out):
    doc, monad = _load(args)
    if args.instance:
        _validate(_instance(args.instance, doc, monad))
        out.write("valid instance\n")
    else:
        out.write("valid schema\n")
    return EXIT_OK


def cmd_eq(args, out):
    doc, _ = _load(args)
    s = doc.schema
    try:
        p, q = s.parse_path(args.left), s.parse_path(args.right)
    except CatDBError as e:
        raise ParseError(str(e)) from None
    res = paths_equal(s, p, q, args.bound, args.budget)
    out.write(res.verdict.value + "\n")
    for step in res.trace:
        out.write(f"  {step}\n")
    if res.verdict is not Verdict.EQUAL:
        out.write(res.describe() + "\n")
    return {Verdict.EQUAL: EXIT_OK, Verdict.NOT_EQUAL_WITHIN_BOUND: EXIT_INVALID,
            Verdict.EXHAUSTED_BUDGET: EXIT_BOUND}[res.verdict]


def cmd_hom(args, out):
    doc, _ = _load(args)
    h = hom_set(doc.schema, args.source, args.target, args.bound)
    for p in h.reps:
        out.write(f"{p}\n")
    out.write(f"{h.verdict} ({len(h)} classes within bound {h.bound})\n")
    return EXIT_OK if h.stable else EXIT_BOUND


def cmd_nat(args, out):
    doc, _ = _load(args)
    i = formats.read_instance(args.instance, doc.schema)
    j = formats.read_instance(args.target, doc.schema)
    validate_instance(i)
    validate_instance(j)
    homs = enumerate_nat_trans(i, j)
    out.write(f"{len(homs)} natural transformations\n")
    for n, alpha in enumerate(homs, 1):
        parts = []
        for v, f in alpha.components.items():
            cells = ";".join(f"{x}↦{y}" for x, y in f.items())
            parts.append(f"{v}[{cells}]")
        out.write(f"{n}: " + " ".join(parts) + "\n")
    return EXIT_OK


def cmd_migrate(args, out):
    src = formats.load_schema(args.schema).schema
    tgt = formats.load_schema(args.target_schema).schema
    with open(args.morphism, encoding="utf-8") as fh:
        F = formats.parse_morphism(fh.read(), src, tgt)
    check_schema_morphism(F, args.bound)
    if args.kind == "delta":
        j = formats.read_instance(args.instance, tgt)
        validate_instance(j)
        result = delta(F, j)
    else:
        i = formats.read_instance(args.instance, src)
        validate_instance(i)
        result = sigma(F, i, args.bound) if args.kind == "sigma" else pi(F, i, args.bound)
    _emit(result, args, out)
    return EXIT_OK


def cmd_limits(args, out):
    doc, _ = _load(args)
    i = formats.read_instance(args.instance, doc.schema)
    j = formats.read_instance(args.other, doc.schema)
    validate_instance(i)
    validate_instance(j)
    result = (instance_limit if args.kind == "product" else instance_colimit)(i, j)[0]
    _emit(result, args, out)
    return EXIT_OK


def cmd_repr(args, out):
    doc, _ = _load(args)
    _emit(representable(doc.schema, args.vertex, args.bound), args, out)
    return EXIT_OK


def cmd_elements(args, out):
    doc, _ = _load(args)
    i = formats.read_instance(args.instance, doc.schema)
    validate_instance(i)
    el = category_of_elements(i)
    out.write(f"{len(el.graph.vertices)} objects\n")
    for o in el.graph.vertices:
        out.write(f"  {o}\n")
    out.write(f"{len(el.graph.arrows)} arrows\n")
    for a, (s, t) in el.graph.ends.items():
        out.write(f"  {a} : {s} -> {t}\n")
    return EXIT_OK


def cmd_export_rdf(args, out):
    doc, _ = _load(args)
    i = formats.read_instance(args.instance, doc.schema)
    validate_instance(i)
    text = "".join(f"{t}\n" for t in export_rdf(i))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_markov(args, out):
    doc, monad = _load(args)
    if monad is None:
        monad = make_monad("Dist")
    k = formats.read_kleisli_instance(args.instance, doc.schema, monad)
    validate_kleisli_instance(k)
    table = markov_power(k, args.steps, args.arrow)
    v = doc.schema.graph.source(args.arrow) if args.arrow else None
    matrix = transition_matrix(k, table, v)
    for x, row in zip(k.pk[v or doc.schema.vertices[0]], matrix):
        out.write(f"{x}: " + " ".join(str(w) for w in row) + "\n")
    return EXIT_OK


def cmd_monad_check(args, out):
    names = [args.monad] if args.monad else ["Maybe", "Exceptions e", "List", "Powerset", "Dist"]
    sizes = [int(n) for n in args.sizes.split(",")]
    for name in names:
        words = name.split()
        try:
            m = make_monad(words[0], words[1:])
        except ValueError as e:
            raise ParseError(str(e)) from None
        n = monad_laws_check(m, sizes)
        note = "" if m.exhaustive else " (sampled values)"
        out.write(f"{m.header()}: laws hold, {n} checks{note}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="catdb", description="Finite categorical databases.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, schema=True, instance=False):
        sp = sub.add_parser(name, help=help_text)
        if schema:
            sp.add_argument("--schema", required=True, help="schema file")
        if instance:
            sp.add_argument("--instance", required=instance == "required", help="instance directory")
        sp.add_argument("--bound", type=int, default=DEFAULT_BOUND, help="path length bound")
        sp.set_defaults(func=func)
        return sp

    sp = add("validate", cmd_validate, "validate a schema and optionally an instance", instance=True)
    sp.add_argument("--monad", help="treat the instance as a Kleisli instance")

    sp = add("eq", cmd_eq, "decide a path equation within the bound")
    sp.add_argument("left")
    sp.add_argument("right")
    sp.add_argument("--budget", type=int, default=200_000, help="maximum paths visited")

    sp = add("hom", cmd_hom, "enumerate path classes between two vertices")
    sp.add_argument("source")
    sp.add_argument("target")

    sp = add("nat", cmd_nat, "enumerate natural transformations", instance="required")
    sp.add_argument("--target", required=True, help="target instance directory")

    sp = add("migrate", cmd_migrate, "Δ, Σ or Π along a schema morphism", instance="required")
    sp.add_argument("--kind", choices=["delta", "sigma", "pi"], required=True)
    sp.add_argument("--morphism", required=True, help="morphism file")
    sp.add_argument("--target-schema", required=True, help="schema file of the morphism's target")
    sp.add_argument("--output", help="write the result as an instance directory")

    sp = add("limits", cmd_limits, "binary product or coproduct of instances", instance="required")
    sp.add_argument("--other", required=True, help="second instance directory")
    sp.add_argument("--kind", choices=["product", "coproduct"], default="product")
    sp.add_argument("--output")

    sp = add("repr", cmd_repr, "the representable instance at a vertex")
    sp.add_argument("vertex")
    sp.add_argument("--output")

    add("elements", cmd_elements, "category of elements", instance="required")

    sp = add("export-rdf", cmd_export_rdf, "instance as sorted subject-predicate-object lines",
             instance="required")
    sp.add_argument("--output")

    sp = add("markov", cmd_markov, "n-step transition table of a Dist instance", instance="required")
    sp.add_argument("--steps", type=int, default=1)
    sp.add_argument("--arrow", help="loop arrow (default: the only loop)")
    sp.add_argument("--monad", help="override the schema's monad header")

    sp = add("monad-check", cmd_monad_check, "check the monad laws of built-in monads", schema=False)
    sp.add_argument("--monad", help=f"one of {', '.join(BUILTIN_MONADS)}; default all")
    sp.add_argument("--sizes", default="0,1,2", help="comma-separated set sizes")
    return p


def run(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_OK
    try:
        return args.func(args, out)
    except CatDBError as e:
        err.write(f"error: {type(e).__name__}: {e}\n")
        return e.exit_code
    except OSError as e:
        err.write(f"error: {e}\n")
        return EXIT_PARSE


def main() -> None:
    sys.exit(run())
