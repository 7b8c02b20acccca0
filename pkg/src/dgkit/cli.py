"""Command-line front end.

Subcommands: validate, dgms, cohomology, formality, sl2, qdolbeault,
spectral, deform, generate.  Exit code 0 exactly when every asserted check
in the run passed.  Reports render as text (default) or JSON; identical
argv + files + seed produce byte-identical JSON (timing appears only in the
text format).  The default format can be overridden with the environment
variable DGKIT_REPORT_FORMAT.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time

from dgkit.ddbar import (
    Bicomplex,
    formality_zigzag,
    induced_differential_triviality,
    is_ddbar_algebra,
    strong_lemma_check,
    sum_twist,
)
from dgkit.deform import (
    DeformationContext,
    Series,
    TruncatedRing,
    connection_correspondence,
    first_order_dictionary,
    qa_mc_split,
    random_series,
    tangent_and_obstruction,
)
from dgkit.errors import InternalCheckError, ModelError, PreconditionError
from dgkit.graded import cohomology
from dgkit.modelfile import (
    ParseError,
    parse_model_file,
    serialize_connection_model,
    serialize_model,
)
from dgkit.models import (
    dots_squares_model,
    end_tensor,
    nilpotent_torus_model,
    torus_model,
    zigzag_model,
)
from dgkit.qdolbeault import (
    DEL_BAR,
    DEL_BAR_J,
    autoduality_check,
    build_quaternionic_complex,
    double_complex_spectral_sequence,
    extended_strong_lemma_interior,
    phi_isomorphism,
    quaternionic_cohomology_check,
)
from dgkit.sl2 import Sl2Module, low_weight_ideal, plus_quotient, weight_decomposition


class Report:
    def __init__(self, command: str, options: dict):
        self.command = command
        self.options = options
        self.body: dict = {}
        self.passed = True
        self.started = time.perf_counter()

    def put(self, key: str, value, asserted: bool | None = None):
        self.body[key] = value
        if asserted is not None:
            self.passed = self.passed and asserted

    def to_dict(self) -> dict:
        return {"command": self.command, "options": self.options,
                "report": self.body, "passed": self.passed}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"dgkit {self.command}  "
                 + " ".join(f"{k}={v}" for k, v in self.options.items())]

        def walk(obj, indent):
            pad = "  " * indent
            if isinstance(obj, dict):
                for k, v in obj.items():
                    if isinstance(v, (dict, list)):
                        lines.append(f"{pad}{k}:")
                        walk(v, indent + 1)
                    else:
                        lines.append(f"{pad}{k}: {v}")
            elif isinstance(obj, list):
                for v in obj:
                    if isinstance(v, (dict, list)):
                        walk(v, indent)
                    else:
                        lines.append(f"{pad}- {v}")

        walk(self.body, 1)
        elapsed = time.perf_counter() - self.started
        lines.append(f"  verdict: {'PASS' if self.passed else 'FAIL'}"
                     f"  ({elapsed * 1000:.1f} ms)")
        return "\n".join(lines)


def _emit(report: Report, fmt: str) -> int:
    if fmt == "json":
        print(report.to_json())
    else:
        print(report.to_text())
    return 0 if report.passed else 1


def _bicomplex_from_file(path: str, d0: str, d1: str) -> Bicomplex:
    parsed = parse_model_file(path)
    diffs = parsed.algebra.differentials
    if d0 in diffs and d1 in diffs:
        return Bicomplex(parsed.algebra, d0, d1)
    if DEL_BAR_J in diffs and DEL_BAR in diffs:
        return Bicomplex(parsed.algebra, DEL_BAR_J, DEL_BAR)
    raise ModelError(f"model has no differential pair ({d0}, {d1}) and no "
                     f"(del_bar_J, del_bar)")


# -- subcommand implementations ----------------------------------------------


def cmd_validate(args, report: Report):
    parsed = parse_model_file(args.model)
    alg = parsed.algebra
    names = [args.differential] if args.differential else sorted(alg.differentials)
    for name in names:
        if alg.kind == "associative":
            rep = alg.validate_dg_algebra(name)
        else:
            rep = alg.validate_dgla(name)
        report.put(name, rep.to_json(), asserted=rep.passed)


def cmd_dgms(args, report: Report):
    b = _bicomplex_from_file(args.model, args.d0, args.d1)
    structure = b.validate_structure()
    report.put("bicomplex_invariants", structure.to_json(), asserted=structure.passed)
    if not structure.passed:
        return
    verdict = is_ddbar_algebra(b)
    report.put("conditions", verdict.to_json(), asserted=verdict.strong_lemma)
    induced = induced_differential_triviality(b)
    report.put("induced_differentials", induced.to_json())
    if verdict.is_ddbar_algebra:
        twisted = sum_twist(b)
        twist_verdict = is_ddbar_algebra(twisted)
        report.put("sum_twist_strong_lemma", twist_verdict.strong_lemma,
                   asserted=twist_verdict.strong_lemma)


def cmd_cohomology(args, report: Report):
    parsed = parse_model_file(args.model)
    alg = parsed.algebra
    name = args.differential or sorted(alg.differentials)[0]
    h = cohomology(alg, name)
    wd = h.check_well_defined()
    report.put("differential", name)
    report.put("dims", {str(k): v for k, v in h.dims().items()})
    report.put("induced_structure",
               [[l1, l2, lt, str(c)] for (l1, l2, lt, c) in sorted(
                   (l1, l2, lt, c) for (l1, l2), ts in h.induced_structure().items()
                   for lt, c in ts.items())])
    report.put("well_defined", wd.passed, asserted=wd.passed)


def cmd_formality(args, report: Report):
    b = _bicomplex_from_file(args.model, args.d0, args.d1)
    zig = formality_zigzag(b)
    report.put("zigzag", zig.to_json(), asserted=zig.certified)


def cmd_sl2(args, report: Report):
    parsed = parse_model_file(args.model)
    alg = parsed.algebra
    module = Sl2Module.from_algebra(alg)
    decomp = weight_decomposition(module)
    report.put("decomposition", decomp.to_json())
    ideal = low_weight_ideal(alg, decomp)
    report.put("ideal_dims", {str(k): s.dim for k, s in ideal.items()})
    quotient = plus_quotient(alg, ideal, decomp)
    report.put("quotient", quotient.to_json(),
               asserted=quotient.checks.passed and bool(quotient.embedding_injective))


def cmd_qdolbeault(args, report: Report):
    parsed = parse_model_file(args.model)
    model = parsed.to_connection_model()
    auto = autoduality_check(model)
    report.put("autoduality", auto.to_json(), asserted=auto.autodual)
    if not auto.autodual:
        return
    if args.extended:
        q = build_quaternionic_complex(model, extended=True, window=args.window)
        interior = extended_strong_lemma_interior(q)
        report.put("window", list(q.window))
        report.put("extended_interior_strong_lemma", interior.to_json(),
                   asserted=interior.passed)
        return
    q = build_quaternionic_complex(model)
    report.put("dims", {str(k): q.space.dim(k) for k in q.space.degrees()})
    fact = quaternionic_cohomology_check(q)
    report.put("cohomology_factorization", fact.to_json(),
               asserted=(fact.equal if fact.certified else None))
    if args.phi:
        cert = phi_isomorphism(model)
        report.put("phi", cert.to_json(), asserted=cert.certified)


def cmd_spectral(args, report: Report):
    parsed = parse_model_file(args.model)
    model = parsed.to_connection_model()
    q = build_quaternionic_complex(model, allow_non_autodual=False)
    pages = double_complex_spectral_sequence(q)
    try:
        certified = strong_lemma_check(model.as_bicomplex()).strong_lemma
    except PreconditionError:
        certified = False
    # degeneration at the second page is a theorem only for certified pairs
    report.put("strong_lemma_certified", certified)
    report.put("pages", pages.to_json(),
               asserted=pages.degenerate_at_e2 if certified else None)


def cmd_deform(args, report: Report):
    parsed = parse_model_file(args.model)
    ring = TruncatedRing(args.order)
    rnd = random.Random(args.seed)
    if parsed.is_connection() or parsed.is_full():
        model = parsed.to_connection_model()
        q = build_quaternionic_complex(model)
        splits = 0
        for _ in range(args.samples):
            elt = random_series(q.space, 1, ring, rnd)
            rep = qa_mc_split(q, elt, ring)
            splits += 1 if rep.equivalent else 0
        report.put("split_equivalence", {"samples": args.samples, "agree": splits},
                   asserted=splits == args.samples)

        qa_lie = q.algebra.commutator_dgla(validate=False)
        ctx = DeformationContext(qa_lie, "total", ring)
        x = Series.zero(1, q.space.dim(1), ring)
        preserved = 0
        element = None
        for _ in range(args.samples):
            a = random_series(q.space, 0, ring, rnd)
            x = ctx.gauge_transform(a, x)
            if ctx.mc_check(x).passed:
                preserved += 1
                element = x
        report.put("gauge_orbit_of_zero",
                   {"steps": args.samples, "still_mc": preserved},
                   asserted=preserved == args.samples)

        has_j = model.full_model is not None and "J" in model.full_model.maps
        if element is not None and has_j:
            gauge = random_series(model.dolbeault.space, 0, ring, rnd)
            corr = connection_correspondence(model, q, element, ring, gauge=gauge)
            ok = corr.relations_over_b.passed and corr.reduces_to_base and (
                corr.gauge_conjugation is not False)
            report.put("correspondence", corr.to_json(), asserted=ok)
        elif not has_j:
            report.put("correspondence", "skipped: model has no J data")
        fo = first_order_dictionary(model)
        report.put("first_order_dictionary", fo.to_json(), asserted=fo.bijection)
    else:
        alg = parsed.algebra
        if alg.kind != "lie":
            alg = alg.commutator_dgla(validate=False)
        name = sorted(alg.differentials)[0]
        tan = tangent_and_obstruction(alg, name)
        report.put("tangent_obstruction", tan.to_json(),
                   asserted=tan.cross_check.passed)


def cmd_generate(args, report: Report):
    if args.recipe == "torus":
        if args.nilpotent_twist:
            model = nilpotent_torus_model(max(args.rank, 2))
        else:
            model = torus_model(args.rank)
        text = serialize_connection_model(model)
    elif args.recipe == "dots-squares":
        dots = {}
        if args.dots:
            for part in args.dots.split(","):
                deg, count = part.split(":")
                dots[int(deg)] = int(count)
        squares = [int(x) for x in args.squares.split(",")] if args.squares else []
        zigzags = [int(x) for x in args.zigzags.split(",")] if args.zigzags else []
        b = dots_squares_model(dots, squares, zigzags, seed=args.seed,
                               unit=not args.no_unit)
        if args.end_rank > 1:
            b = end_tensor(b, args.end_rank)
        text = serialize_model(b.algebra)
    elif args.recipe == "zigzag":
        text = serialize_model(zigzag_model(args.degree, seed=args.seed).algebra)
    else:
        raise ModelError(f"unknown recipe {args.recipe!r}")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        report.put("written", args.output)
    else:
        report.put("model", text.splitlines())


# -- dispatcher ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dgkit",
        description="exact checks for bicomplexes, formality and deformations")
    parser.add_argument("--format", choices=("text", "json"),
                        default=os.environ.get("DGKIT_REPORT_FORMAT", "text"))
    sub = parser.add_subparsers(dest="command", required=True)

    def with_model(p):
        p.add_argument("model", help="model file")
        return p

    p = with_model(sub.add_parser("validate", help="DG/DGLA axiom checks"))
    p.add_argument("--differential", default=None)

    p = with_model(sub.add_parser("dgms", help="condition table, strong lemma, twist"))
    p.add_argument("--d0", default="d0")
    p.add_argument("--d1", default="d1")

    p = with_model(sub.add_parser("cohomology", help="dims and induced structure"))
    p.add_argument("--differential", default=None)

    p = with_model(sub.add_parser("formality", help="zig-zag certificate"))
    p.add_argument("--d0", default="d0")
    p.add_argument("--d1", default="d1")

    with_model(sub.add_parser("sl2", help="weight decomposition, ideal, quotient"))

    p = with_model(sub.add_parser("qdolbeault", help="build and check the total complex"))
    p.add_argument("--extended", action="store_true")
    p.add_argument("--window", type=int, default=3)
    p.add_argument("--phi", action="store_true")

    with_model(sub.add_parser("spectral", help="E1/E2 pages and degeneration"))

    p = with_model(sub.add_parser("deform", help="Maurer-Cartan probes"))
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("generate", help="emit model files")
    p.add_argument("recipe", choices=("torus", "dots-squares", "zigzag"))
    p.add_argument("--rank", type=int, default=1)
    p.add_argument("--nilpotent-twist", action="store_true")
    p.add_argument("--dots", default="")
    p.add_argument("--squares", default="")
    p.add_argument("--zigzags", default="")
    p.add_argument("--degree", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--end-rank", type=int, default=1)
    p.add_argument("--no-unit", action="store_true")
    p.add_argument("-o", "--output", default=None)
    return parser


COMMANDS = {
    "validate": cmd_validate,
    "dgms": cmd_dgms,
    "cohomology": cmd_cohomology,
    "formality": cmd_formality,
    "sl2": cmd_sl2,
    "qdolbeault": cmd_qdolbeault,
    "spectral": cmd_spectral,
    "deform": cmd_deform,
    "generate": cmd_generate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    options = {k: v for k, v in vars(args).items()
               if k not in ("command", "format") and v is not None}
    report = Report(args.command, options)
    try:
        COMMANDS[args.command](args, report)
    except (ModelError, PreconditionError, ParseError) as exc:
        report.put("error", str(exc), asserted=False)
    except InternalCheckError as exc:
        report.put("internal_error", str(exc), asserted=False)
    return _emit(report, args.format)


if __name__ == "__main__":
    sys.exit(main())
