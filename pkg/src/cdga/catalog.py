"""Built-in example presentations and fibrations with expected invariants.

Fixture names are addressable from the CLI.  Parametric families use a
suffix: sphere:4, cpn:3, hpn:2, twistor:hpn:2, heisenberg-like:3.  The two
five-and-three-generator counterexample families are registered as
sec6-primitive / sec6-nonprimitive, each with a ":ext" variant adjoining the
odd fiber generator z.  Every expected value carries a provenance tag
("paper" for values quoted from the source construction, "derived" for
values computed by an independent route, "trivial" for definitional facts).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cohomology import cohomology, cup_length
from .core import Presentation, check_d_squared
from .fibration import (EvenSphere, FibrationModel, OddSphere,
                        build_fibration_model, theoremC_reduce)
from .formality import FORMAL, NON_FORMAL, check_formality
from .sullivan import verify_quasi_iso


class UnknownFixture(Exception):
    pass


@dataclass
class Expected:
    value: object
    provenance: str  # "paper" | "derived" | "trivial"


@dataclass
class Fixture:
    name: str
    description: str
    presentation: Presentation
    fibration: FibrationModel | None = None
    expected: dict[str, Expected] = field(default_factory=dict)


def _betti_list(n_max: int, ones: list[int]) -> list[int]:
    return [1 if k in ones else 0 for k in range(n_max + 1)]


def _sphere(n: int) -> Fixture:
    if n < 2:
        raise UnknownFixture(f"sphere:{n}: degree must be >= 2")
    N = 2 * (2 * n - 1) + 2 if n % 2 == 0 else 2 * n + 2
    if n % 2 == 0:
        stub = Presentation([("x", n), ("x'", 2 * n - 1)], truncation_degree=N,
                            check=False)
        pres = Presentation(
            [("x", n), ("x'", 2 * n - 1)],
            {"x'": stub.power(stub.generator("x"), 2)},
            truncation_degree=N,
        )
    else:
        pres = Presentation([("x", n)], truncation_degree=N)
    return Fixture(
        f"sphere:{n}", f"minimal model of the {n}-sphere", pres,
        expected={
            "betti": Expected(_betti_list(N, [0, n]), "trivial"),
            "formality": Expected(FORMAL, "trivial"),
        },
    )


def _cpn(m: int) -> Fixture:
    if m < 1:
        raise UnknownFixture(f"cpn:{m}: parameter must be >= 1")
    N = 2 * (2 * m + 1) + 2
    stub = Presentation([("x", 2), ("y", 2 * m + 1)], truncation_degree=N,
                        check=False)
    pres = Presentation(
        [("x", 2), ("y", 2 * m + 1)],
        {"y": stub.power(stub.generator("x"), m + 1)},
        truncation_degree=N,
    )
    return Fixture(
        f"cpn:{m}", f"minimal model of complex projective {m}-space", pres,
        expected={
            "betti": Expected(_betti_list(N, list(range(0, 2 * m + 1, 2))),
                              "derived"),
            "formality": Expected(FORMAL, "derived"),
            "cup_length": Expected(m, "derived"),
        },
    )


def hpn_presentation(n: int, truncation_degree: int | None = None) -> Presentation:
    """Minimal model of quaternionic projective n-space: (u4, w; dw = u^(n+1))."""
    N = truncation_degree if truncation_degree is not None else 2 * (4 * n + 3) + 2
    stub = Presentation([("u", 4), ("w", 4 * n + 3)], truncation_degree=N,
                        check=False)
    return Presentation(
        [("u", 4), ("w", 4 * n + 3)],
        {"w": stub.power(stub.generator("u"), n + 1)},
        truncation_degree=N,
    )


def _hpn(n: int) -> Fixture:
    if n < 1:
        raise UnknownFixture(f"hpn:{n}: parameter must be >= 1")
    pres = hpn_presentation(n)
    N = pres.truncation_degree
    return Fixture(
        f"hpn:{n}", f"minimal model of quaternionic projective {n}-space", pres,
        expected={
            "betti": Expected(_betti_list(N, list(range(0, 4 * n + 1, 4))),
                              "derived"),
            "formality": Expected(FORMAL, "derived"),
            "cup_length": Expected(n, "paper"),
        },
    )


def _twistor_hpn(n: int) -> Fixture:
    if n < 1:
        raise UnknownFixture(f"twistor:hpn:{n}: parameter must be >= 1")
    N = 4 * n + 4
    base = hpn_presentation(n, truncation_degree=N)
    fm = build_fibration_model(base, EvenSphere(2), base.generator("u"))
    return Fixture(
        f"twistor:hpn:{n}",
        f"2-sphere bundle over quaternionic projective {n}-space "
        f"(total space rationally complex projective {2 * n + 1}-space)",
        fm.total, fibration=fm,
        expected={
            "primitive": Expected(True, "paper"),
            "reduction_degrees": Expected({2: 1, 4 * n + 3: 1}, "derived"),
            "ve_betti": Expected(
                _betti_list(N, list(range(0, 4 * n + 3, 2))), "derived"),
            "base_formality": Expected(FORMAL, "derived"),
        },
    )


def _heisenberg_like(n: int) -> Fixture:
    if n < 3 or n % 2 == 0:
        raise UnknownFixture(f"heisenberg-like:{n}: parameter must be odd >= 3")
    N = max(20, 2 * (2 * n - 1) + 2)
    stub = Presentation([("x", n), ("y", n), ("z", 2 * n - 1)],
                        truncation_degree=N, check=False)
    pres = Presentation(
        [("x", n), ("y", n), ("z", 2 * n - 1)],
        {"z": stub.mul(stub.generator("x"), stub.generator("y"))},
        truncation_degree=N,
    )
    return Fixture(
        f"heisenberg-like:{n}",
        "two closed odd generators with their product killed by a third",
        pres,
        expected={
            "betti": Expected(None, "derived"),  # checked against the oracle only
            "formality": Expected(NON_FORMAL, "paper"),
            "witness_kind": Expected("massey", "paper"),
            "witness_degree": Expected(3 * n - 1, "derived"),
        },
    )


def sec6_primitive_base(truncation_degree: int = 20) -> Presentation:
    stub = Presentation(
        [("y", 2), ("b", 3), ("c", 3), ("u", 4), ("n", 5)],
        truncation_degree=truncation_degree, check=False)
    dn = stub.mul(stub.generator("b"), stub.generator("c")) + \
        stub.mul(stub.generator("u"), stub.generator("y"))
    return Presentation(
        [("y", 2), ("b", 3), ("c", 3), ("u", 4), ("n", 5)], {"n": dn},
        truncation_degree=truncation_degree)


def _sec6_primitive() -> Fixture:
    pres = sec6_primitive_base()
    return Fixture(
        "sec6-primitive",
        "formal five-generator base of the primitive odd-fiber counterexample",
        pres,
        expected={"formality": Expected(FORMAL, "paper")},
    )


def _sec6_primitive_ext() -> Fixture:
    base = sec6_primitive_base()
    fm = build_fibration_model(base, OddSphere(3), base.generator("u"),
                               names=("z",))
    return Fixture(
        "sec6-primitive:ext",
        "primitive odd-sphere extension of the formal five-generator base",
        fm.total, fibration=fm,
        expected={
            "formality": Expected(NON_FORMAL, "paper"),
            "primitive": Expected(True, "paper"),
        },
    )


def sec6_nonprimitive_base(truncation_degree: int = 20) -> Presentation:
    stub = Presentation([("b", 3), ("c", 4), ("n", 6)],
                        truncation_degree=truncation_degree, check=False)
    return Presentation(
        [("b", 3), ("c", 4), ("n", 6)],
        {"n": stub.mul(stub.generator("b"), stub.generator("c"))},
        truncation_degree=truncation_degree)


def _sec6_nonprimitive() -> Fixture:
    pres = sec6_nonprimitive_base()
    return Fixture(
        "sec6-nonprimitive",
        "non-formal three-generator base with closed ideal witness n*b",
        pres,
        expected={
            "formality": Expected(NON_FORMAL, "paper"),
            "witness_monomial": Expected(("b", "n"), "paper"),
            "witness_degree": Expected(9, "derived"),
        },
    )


def _sec6_nonprimitive_ext() -> Fixture:
    base = sec6_nonprimitive_base()
    fm = build_fibration_model(base, OddSphere(3), base.generator("c"),
                               names=("z",))
    return Fixture(
        "sec6-nonprimitive:ext",
        "odd-sphere extension of the non-formal three-generator base "
        "(total space formal with a free minimal model)",
        fm.total, fibration=fm,
        expected={
            "formality": Expected(FORMAL, "paper"),
            "model_degrees": Expected({3: 1, 6: 1}, "paper"),
            "model_free": Expected(True, "paper"),
        },
    )


_PLAIN = {
    "sec6-primitive": _sec6_primitive,
    "sec6-primitive:ext": _sec6_primitive_ext,
    "sec6-nonprimitive": _sec6_nonprimitive,
    "sec6-nonprimitive:ext": _sec6_nonprimitive_ext,
}

_FAMILIES = {
    "sphere": _sphere,
    "cpn": _cpn,
    "hpn": _hpn,
    "twistor:hpn": _twistor_hpn,
    "heisenberg-like": _heisenberg_like,
}


def fixture(name: str) -> Fixture:
    if name in _PLAIN:
        return _PLAIN[name]()
    head, sep, tail = name.rpartition(":")
    if sep and head in _FAMILIES:
        try:
            param = int(tail)
        except ValueError:
            raise UnknownFixture(name)
        return _FAMILIES[head](param)
    raise UnknownFixture(name)


def fixture_names() -> list[str]:
    """Registry listing with representative parameters for the families."""
    return [
        "sphere:2", "sphere:3", "cpn:1", "cpn:2", "cpn:3",
        "hpn:1", "hpn:2", "hpn:3", "hpn:4",
        "twistor:hpn:1", "twistor:hpn:2", "twistor:hpn:3",
        "heisenberg-like:3",
        "sec6-primitive", "sec6-primitive:ext",
        "sec6-nonprimitive", "sec6-nonprimitive:ext",
    ]


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str


def run_checks(fx: Fixture) -> list[CheckResult]:
    """Re-verify every expected value attached to a fixture."""
    results: list[CheckResult] = []

    def record(name: str, ok: bool, detail: str = ""):
        results.append(CheckResult(name, bool(ok), detail))

    bad = check_d_squared(fx.presentation)
    record("d_squared", not bad, "" if not bad else f"fails on {bad[0][0]}")

    table = None
    exp = fx.expected
    if "betti" in exp and exp["betti"].value is not None:
        table = cohomology(fx.presentation)
        got = table.betti_numbers()
        record("betti", got == exp["betti"].value, f"computed {got}")
    if "formality" in exp:
        verdict = check_formality(fx.presentation)
        record("formality", verdict.status == exp["formality"].value,
               f"verdict {verdict.status}")
        if "witness_kind" in exp:
            record("witness_kind",
                   verdict.witness is not None and
                   verdict.witness.kind == exp["witness_kind"].value,
                   f"witness {verdict.witness and verdict.witness.kind}")
        if "witness_degree" in exp:
            record("witness_degree",
                   verdict.witness is not None and
                   verdict.witness.degree == exp["witness_degree"].value,
                   f"degree {verdict.witness and verdict.witness.degree}")
        if "witness_monomial" in exp:
            ok = False
            if verdict.witness is not None:
                pres = verdict.model.model
                names = {
                    tuple(sorted(pres.generators[i].name for i, _ in m.powers))
                    for m in verdict.witness.element.terms
                }
                ok = tuple(sorted(exp["witness_monomial"].value)) in names
            record("witness_monomial", ok,
                   verdict.witness and
                   verdict.model.model.poly_str(verdict.witness.element))
        if "model_degrees" in exp:
            model = verdict.model.model
            got_degrees: dict[int, int] = {}
            for g in model.generators:
                got_degrees[g.degree] = got_degrees.get(g.degree, 0) + 1
            record("model_degrees", got_degrees == exp["model_degrees"].value,
                   f"computed {got_degrees}")
        if "model_free" in exp:
            model = verdict.model.model
            free = all(model.differential[g.name].is_zero
                       for g in model.generators)
            record("model_free", free == exp["model_free"].value,
                   f"free={free}")
    if "cup_length" in exp:
        table = table or cohomology(fx.presentation)
        got_cl = cup_length(table)
        record("cup_length", got_cl == exp["cup_length"].value,
               f"computed {got_cl}")
    if fx.fibration is not None:
        if "primitive" in exp:
            record("primitive", fx.fibration.primitive == exp["primitive"].value,
                   f"primitive={fx.fibration.primitive}")
        if "reduction_degrees" in exp or "ve_betti" in exp:
            red = theoremC_reduce(fx.fibration)
            if "reduction_degrees" in exp:
                got_degrees = {}
                for g in red.VE_model.generators:
                    got_degrees[g.degree] = got_degrees.get(g.degree, 0) + 1
                record("reduction_degrees",
                       got_degrees == exp["reduction_degrees"].value,
                       f"computed {got_degrees}")
            if "ve_betti" in exp:
                got = cohomology(red.VE_model).betti_numbers()
                record("ve_betti", got == exp["ve_betti"].value,
                       f"computed {got}")
            report = verify_quasi_iso(red.phi)
            record("phi_quasi_iso", report.ok,
                   "" if report.ok else f"fails at degree {report.first_failure}")
        if "base_formality" in exp:
            verdict = check_formality(fx.fibration.base_pres)
            record("base_formality",
                   verdict.status == exp["base_formality"].value,
                   f"verdict {verdict.status}")
    return results
