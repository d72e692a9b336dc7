"""Command-line driver.

Subcommands operate on .cdga files or built-in fixtures and report either
human-readable text or JSON ({command, input, max_degree, result, witnesses,
version}).  Exit codes: 0 success (or a Formal verdict), 2 NonFormal,
3 Inconclusive, 1 any error.  CDGA_MAX_DEGREE overrides the document degree
bound; the --max-degree flag overrides both.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__, dsl
from .catalog import UnknownFixture, fixture, run_checks
from .cohomology import cohomology, massey_triple
from .core import Presentation, PresentationError
from .fibration import FibrationError, OddSphere, theoremC_reduce
from .formality import FORMAL, INCONCLUSIVE, NON_FORMAL, check_formality
from .sullivan import minimal_model, verify_quasi_iso

_VERDICT_EXIT = {FORMAL: 0, NON_FORMAL: 2, INCONCLUSIVE: 3}


def _resolve_max_degree(args) -> int | None:
    if getattr(args, "max_degree", None) is not None:
        return args.max_degree
    env = os.environ.get("CDGA_MAX_DEGREE")
    if env:
        try:
            return int(env)
        except ValueError:
            raise PresentationError(f"bad CDGA_MAX_DEGREE value {env!r}")
    return None


def _load(args) -> dsl.DslDocument:
    with open(args.file, "r", encoding="utf-8") as fh:
        return dsl.parse(fh.read())


def _emit(args, command: str, source: str, max_degree, result: dict,
          witnesses: list | None = None, text: str = ""):
    if args.json:
        payload = {
            "command": command,
            "input": source,
            "max_degree": max_degree,
            "result": result,
            "witnesses": witnesses or [],
            "version": __version__,
        }
        print(json.dumps(payload, indent=2))
    else:
        print(text.rstrip("\n"))


def _describe_presentation(pres: Presentation) -> str:
    lines = []
    gens = " ".join(f"{g.name}:{g.degree}" for g in pres.generators)
    lines.append(f"generators: {gens}")
    for g in pres.generators:
        dg = pres.differential[g.name]
        if not dg.is_zero:
            lines.append(f"d {g.name} = {pres.poly_str(dg)}")
    lines.append(f"max degree: {pres.truncation_degree}")
    return "\n".join(lines)


def _presentation_json(pres: Presentation) -> dict:
    return {
        "generators": [{"name": g.name, "degree": g.degree,
                        "differential": pres.poly_str(pres.differential[g.name])}
                       for g in pres.generators],
        "max_degree": pres.truncation_degree,
    }


def cmd_validate(args) -> int:
    doc = _load(args)
    built = []
    for block in doc.algebras():
        pres = dsl.to_presentation(doc, block.name, _resolve_max_degree(args))
        built.append((block.name, pres))
    for block in doc.fibrations():
        dsl.to_fibration(doc, block.name, _resolve_max_degree(args))
    names = ", ".join(name for name, _ in built) or "(none)"
    result = {"valid": True,
              "algebras": [name for name, _ in built],
              "fibrations": [b.name for b in doc.fibrations()]}
    _emit(args, "validate", args.file,
          built[0][1].truncation_degree if built else None, result,
          text=f"ok: algebra blocks {names} validated")
    return 0


def cmd_cohomology(args) -> int:
    doc = _load(args)
    pres = dsl.to_presentation(doc, args.block, _resolve_max_degree(args))
    table = cohomology(pres)
    betti = table.betti_numbers()
    text = _describe_presentation(pres) + f"\nbetti: {betti}"
    _emit(args, "cohomology", args.file, table.N, {"betti": betti}, text=text)
    return 0


def cmd_minimal_model(args) -> int:
    doc = _load(args)
    pres = dsl.to_presentation(doc, args.block, _resolve_max_degree(args))
    mm = minimal_model(pres)
    text = "minimal model\n" + _describe_presentation(mm.model)
    result = {"model": _presentation_json(mm.model),
              "map": {g.name: pres.poly_str(mm.map.assignment[g.name])
                      for g in mm.model.generators}}
    _emit(args, "minimal-model", args.file, pres.truncation_degree, result,
          text=text)
    return 0


def _witness_json(verdict) -> list[dict]:
    if verdict.witness is None:
        return []
    pres = verdict.model.model if verdict.model else None
    element = pres.poly_str(verdict.witness.element) if pres else ""
    return [{"kind": verdict.witness.kind,
             "degree": verdict.witness.degree,
             "element": element,
             "description": verdict.witness.description}]


def cmd_formality(args) -> int:
    doc = _load(args)
    pres = dsl.to_presentation(doc, args.block, _resolve_max_degree(args))
    verdict = check_formality(pres)
    lines = [f"verdict: {verdict.status} (up to degree {verdict.degree_bound})"]
    if verdict.witness is not None:
        lines.append(f"witness: {verdict.witness.description}")
        if verdict.model is not None:
            element = verdict.model.model.poly_str(verdict.witness.element)
            lines.append(f"witness element: {element}")
    if verdict.reason:
        lines.append(f"reason: {verdict.reason}")
    if verdict.status == FORMAL and verdict.certificate is not None:
        model = verdict.model.model
        for g in model.generators:
            vec = verdict.certificate.assignment[g.name]
            rep = verdict.certificate.table.rep_of(g.degree, vec)
            lines.append(f"certificate: {g.name} -> "
                         f"[{model.poly_str(rep)}]" if not rep.is_zero
                         else f"certificate: {g.name} -> 0")
    result = {"verdict": verdict.status, "degree_bound": verdict.degree_bound}
    _emit(args, "formality", args.file, verdict.degree_bound, result,
          witnesses=_witness_json(verdict), text="\n".join(lines))
    return _VERDICT_EXIT[verdict.status]


def cmd_fibration(args) -> int:
    doc = _load(args)
    fm = dsl.to_fibration(doc, args.block, _resolve_max_degree(args))
    lines = ["total model", _describe_presentation(fm.total),
             f"primitive: {fm.primitive}"]
    result = {"total": _presentation_json(fm.total), "primitive": fm.primitive}
    if not isinstance(fm.fiber_kind, OddSphere) and not fm.u.is_zero:
        red = theoremC_reduce(fm)
        report = verify_quasi_iso(red.phi)
        lines += ["reduced model", _describe_presentation(red.VE_model),
                  f"phi quasi-isomorphism: {report.ok}"]
        result["reduced"] = _presentation_json(red.VE_model)
        result["phi_quasi_iso"] = report.ok
    _emit(args, "fibration", args.file, fm.total.truncation_degree, result,
          text="\n".join(lines))
    return 0


def cmd_massey(args) -> int:
    doc = _load(args)
    pres = dsl.to_presentation(doc, args.block, _resolve_max_degree(args))
    table = cohomology(pres)
    polys = []
    for text in (args.a, args.b, args.c):
        tokens = dsl._tokenize(text, 1)
        polys.append(dsl._ExprParser(tokens, 1, pres).parse())
    res = massey_triple(table, *polys)
    lines = [
        f"degree: {res.degree}",
        f"representative: {pres.poly_str(res.representative)}",
        f"indeterminacy dimension: {len(res.indeterminacy)}",
        f"contains zero: {res.contains_zero}",
    ]
    result = {"degree": res.degree,
              "representative": pres.poly_str(res.representative),
              "indeterminacy_dimension": len(res.indeterminacy),
              "contains_zero": res.contains_zero}
    _emit(args, "massey", args.file, table.N, result, text="\n".join(lines))
    return 0


def cmd_fixture(args) -> int:
    fx = fixture(args.name)
    lines = [fx.name, fx.description, _describe_presentation(fx.presentation)]
    result = {"name": fx.name, "description": fx.description,
              "presentation": _presentation_json(fx.presentation)}
    code = 0
    if args.check:
        checks = run_checks(fx)
        result["checks"] = [{"name": c.name, "ok": c.ok, "detail": c.detail}
                            for c in checks]
        for c in checks:
            mark = "ok" if c.ok else "FAIL"
            lines.append(f"[{mark}] {c.name}" + (f": {c.detail}" if c.detail else ""))
        if not all(c.ok for c in checks):
            code = 1
    _emit(args, "fixture", args.name, fx.presentation.truncation_degree,
          result, text="\n".join(lines))
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cdga",
        description="exact workbench for commutative differential graded algebras",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_file=True, with_block=True):
        if with_file:
            p.add_argument("file", help="input .cdga file")
        if with_block:
            p.add_argument("--block", help="block name (default: first algebra)")
        p.add_argument("--max-degree", type=int, dest="max_degree",
                       help="degree bound override")
        p.add_argument("--json", action="store_true", help="JSON output")

    p = sub.add_parser("validate", help="parse and validate a file")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("cohomology", help="Betti numbers up to the bound")
    common(p)
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("minimal-model", help="minimal Sullivan model")
    common(p)
    p.set_defaults(func=cmd_minimal_model)

    p = sub.add_parser("formality", help="formality verdict")
    common(p)
    p.set_defaults(func=cmd_formality)

    p = sub.add_parser("fibration", help="build and reduce a fibration block")
    common(p, with_block=False)
    p.add_argument("--block", required=True, help="fibration block name")
    p.set_defaults(func=cmd_fibration)

    p = sub.add_parser("massey", help="triple Massey product of three cocycles")
    p.add_argument("file")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("c")
    p.add_argument("--block")
    p.add_argument("--max-degree", type=int, dest="max_degree")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_massey)

    p = sub.add_parser("fixture", help="build a named built-in example")
    p.add_argument("name")
    p.add_argument("--check", action="store_true",
                   help="re-verify the expected values")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fixture)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (dsl.DslError, PresentationError, FibrationError, UnknownFixture,
            OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
