"""Formality verdicts for minimal presentations.

The check follows the closed-complement criterion: pick in each degree a
complement N^i to the closed generators, and ask whether every closed element
of the ideal generated by the complements is exact.  We always use the
canonical (pivot-based) complement.  A Formal verdict carries a verified
certificate (a multiplicative chain quasi-isomorphism onto the cohomology
ring); a NonFormal verdict carries either a Massey triple that misses zero or,
when the complement is forced degreewise, a closed non-exact ideal element.
Anything else is Inconclusive — never a guessed NonFormal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import qlinalg
from .cohomology import (ClassMap, CohomologyTable, MasseyResult, NotDefinedError,
                         TruncationError, cohomology, massey_triple)
from .core import Morphism, Poly, Presentation
from .qlinalg import QMatrix, Span
from .sullivan import MinimalModel, identity_model, is_minimal, minimal_model

FORMAL = "Formal"
NON_FORMAL = "NonFormal"
INCONCLUSIVE = "Inconclusive"


@dataclass
class DegreeComplement:
    degree: int
    generator_names: list[str]
    complement_names: list[str]     # pivot generators spanning N^i
    closed_parts: dict[str, Poly]   # g = closed_part + complement_part
    complement_parts: dict[str, Poly]

    @property
    def unique(self) -> bool:
        """The complement is forced when all or none of the generators are closed."""
        return not self.complement_names or \
            len(self.complement_names) == len(self.generator_names)


@dataclass
class Complement:
    per_degree: dict[int, DegreeComplement]

    @property
    def unique(self) -> bool:
        return all(dc.unique for dc in self.per_degree.values())

    def complement_generators(self) -> list[str]:
        names = []
        for k in sorted(self.per_degree):
            names.extend(self.per_degree[k].complement_names)
        return names


@dataclass
class Witness:
    kind: str                      # "massey" or "ideal"
    degree: int
    element: Poly                  # ideal element, or the Massey representative
    description: str
    triple: tuple[Poly, Poly, Poly] | None = None
    massey: MasseyResult | None = None


@dataclass
class Obstruction:
    generator: str
    degree: int
    value: dict[int, list[Fraction]]


@dataclass
class FormalityVerdict:
    status: str
    degree_bound: int
    certificate: ClassMap | None = None
    witness: Witness | None = None
    reason: str | None = None
    complement: Complement | None = None
    model: MinimalModel | None = None

    @property
    def is_formal(self) -> bool:
        return self.status == FORMAL


def canonical_complement(pres: Presentation) -> Complement:
    """Pivot-based complement to the closed generators in each degree."""
    per_degree: dict[int, DegreeComplement] = {}
    degrees = sorted({g.degree for g in pres.generators})
    for k in degrees:
        gens = [g for g in pres.generators if g.degree == k]
        target = pres.basis_of_degree(k + 1)
        cols = [pres.to_vector(pres.differential[g.name], target) for g in gens]
        mat = QMatrix.from_columns(cols, rows=len(target))
        _, pivots = qlinalg.rref(mat)
        pivot_gens = [gens[j] for j in pivots]
        pivot_mat = QMatrix.from_columns([cols[j] for j in pivots],
                                         rows=len(target))
        closed_parts, complement_parts = {}, {}
        for g, col in zip(gens, cols):
            x = qlinalg.solve(pivot_mat, col)
            n_part = Poly.zero()
            for c, pg in zip(x, pivot_gens):
                if c:
                    n_part = n_part + pres.generator(pg.name).scale(c)
            complement_parts[g.name] = n_part
            closed_parts[g.name] = pres.generator(g.name) - n_part
        per_degree[k] = DegreeComplement(
            k, [g.name for g in gens], [g.name for g in pivot_gens],
            closed_parts, complement_parts,
        )
    return Complement(per_degree)


def closed_ideal_witness(pres: Presentation, table: CohomologyTable,
                         complement: Complement,
                         degree: int | None = None) -> Witness | None:
    """First closed non-exact element of the complement ideal, if any.

    Scans a single degree when one is given, otherwise all degrees up to the
    table bound.
    """
    degrees = [degree] if degree is not None else list(range(2, table.N + 1))
    names = complement.complement_generators()
    for k in degrees:
        basis = pres.basis_of_degree(k)
        span = Span(len(basis))
        spanning: list[Poly] = []
        for name in names:
            g_deg = pres.by_name[name].degree
            if g_deg > k:
                continue
            gen_poly = pres.generator(name)
            for omega in pres.basis_of_degree(k - g_deg):
                p = pres.mul(gen_poly, Poly({omega: Fraction(1)}))
                if not p.is_zero and span.add(pres.to_vector(p, basis)):
                    spanning.append(p)
        if not spanning:
            continue
        up = pres.basis_of_degree(k + 1)
        mat = QMatrix.from_columns(
            [pres.to_vector(pres.d(p), up) for p in spanning], rows=len(up))
        for kv in qlinalg.kernel_basis(mat):
            closed = Poly.zero()
            for c, p in zip(kv, spanning):
                if c:
                    closed = closed + p.scale(c)
            if closed.is_zero:
                continue
            if not table.is_exact(closed):
                return Witness(
                    "ideal", k, closed,
                    f"closed non-exact element of the complement ideal "
                    f"in degree {k}: {pres.poly_str(closed)}",
                )
    return None


def massey_witness(table: CohomologyTable,
                   max_degree: int | None = None) -> Witness | None:
    """Lowest-degree Massey triple of class representatives missing zero."""
    N = max_degree if max_degree is not None else table.N
    pres = table.pres
    for t in range(2, N + 1):
        for ka in range(1, t):
            for kb in range(1, t - ka):
                kc = t + 1 - ka - kb
                if kc < 1 or ka + kb > N or kb + kc > N:
                    continue
                if not (table.betti(ka) and table.betti(kb) and table.betti(kc)):
                    continue
                for a in table.degrees[ka].class_reps:
                    for b in table.degrees[kb].class_reps:
                        if not qlinalg.is_zero_vector(
                                table.class_product(
                                    ka, table.class_vector(a)[1],
                                    kb, table.class_vector(b)[1])):
                            continue
                        for c in table.degrees[kc].class_reps:
                            if not qlinalg.is_zero_vector(
                                    table.class_product(
                                        kb, table.class_vector(b)[1],
                                        kc, table.class_vector(c)[1])):
                                continue
                            try:
                                res = massey_triple(table, a, b, c)
                            except (NotDefinedError, TruncationError):
                                continue
                            if not res.contains_zero:
                                desc = (
                                    f"Massey triple <{pres.poly_str(a)}, "
                                    f"{pres.poly_str(b)}, {pres.poly_str(c)}> "
                                    f"misses zero in degree {t}"
                                )
                                return Witness("massey", t, res.representative,
                                               desc, (a, b, c), res)
    return None


def build_certificate(m: MinimalModel, complement: Complement | None = None,
                      table: CohomologyTable | None = None):
    """Multiplicative map onto cohomology: closed parts to their classes.

    Returns the ClassMap when it is a chain map, else the first Obstruction.
    """
    pres = m.model
    table = table or cohomology(pres)
    complement = complement or canonical_complement(pres)
    assignment: dict[str, list[Fraction]] = {}
    for g in pres.generators:
        if g.degree > table.N:
            assignment[g.name] = qlinalg.zero_vector(table.betti(g.degree))
            continue
        closed_part = complement.per_degree[g.degree].closed_parts[g.name]
        if closed_part.is_zero:
            assignment[g.name] = qlinalg.zero_vector(table.betti(g.degree))
        else:
            assignment[g.name] = table.class_vector(closed_part)[1]
    mu = ClassMap(pres, table, assignment)
    defects = mu.chain_map_defects()
    if defects:
        name = defects[0]
        g = pres.by_name[name]
        value = mu.evaluate(pres.differential[name])
        return Obstruction(name, g.degree, value)
    return mu


def dgms_check(m: MinimalModel,
               table: CohomologyTable | None = None) -> FormalityVerdict:
    """Formality verdict for a minimal presentation, up to its degree bound."""
    pres = m.model
    if not is_minimal(pres):
        raise ValueError("dgms_check requires a minimal presentation")
    table = table or cohomology(pres)
    N = table.N
    complement = canonical_complement(pres)
    ideal_wit = closed_ideal_witness(pres, table, complement)
    if ideal_wit is None:
        cert = build_certificate(m, complement, table)
        if isinstance(cert, Obstruction):
            return FormalityVerdict(
                INCONCLUSIVE, N, reason=(
                    f"certificate obstructed at generator {cert.generator!r}"),
                complement=complement, model=m)
        if not cert.is_quasi_iso(table):
            return FormalityVerdict(
                INCONCLUSIVE, N,
                reason="certificate is a chain map but not a quasi-isomorphism",
                complement=complement, model=m)
        return FormalityVerdict(FORMAL, N, certificate=cert,
                                complement=complement, model=m)
    massey = massey_witness(table, min(N, ideal_wit.degree + 2))
    if massey is not None:
        return FormalityVerdict(NON_FORMAL, N, witness=massey,
                                complement=complement, model=m)
    if complement.unique:
        return FormalityVerdict(NON_FORMAL, N, witness=ideal_wit,
                                complement=complement, model=m)
    return FormalityVerdict(
        INCONCLUSIVE, N, witness=ideal_wit, complement=complement, model=m,
        reason=("closed non-exact ideal element for the canonical complement, "
                "but the complement is not forced and no Massey witness was "
                "found"))


def check_formality(pres: Presentation) -> FormalityVerdict:
    """Formality verdict of any simply-connected presentation.

    Non-minimal input is replaced by its minimal model first; the verdict's
    model field records which presentation the witnesses live in.
    """
    m = identity_model(pres) if is_minimal(pres) else minimal_model(pres)
    return dgms_check(m)


def nonformality_witness(m: MinimalModel,
                         table: CohomologyTable | None = None) -> Witness | None:
    """Lowest-degree non-formality witness of either kind, or None."""
    pres = m.model
    table = table or cohomology(pres)
    complement = canonical_complement(pres)
    for k in range(2, table.N + 1):
        wit = massey_witness_at(table, k)
        if wit is not None:
            return wit
        wit = closed_ideal_witness(pres, table, complement, degree=k)
        if wit is not None:
            return wit
    return None


def massey_witness_at(table: CohomologyTable, degree: int) -> Witness | None:
    """Massey witness with target exactly the given degree."""
    wit = massey_witness(table, degree)
    if wit is not None and wit.degree == degree:
        return wit
    return None


def tensor_presentation(a: Presentation, b: Presentation
                        ) -> tuple[Presentation, Morphism, Morphism]:
    """Tensor product with renamed b-generators on clashes, plus inclusions."""
    used = {g.name for g in a.generators}
    rename: dict[str, str] = {}
    for g in b.generators:
        name = g.name
        while name in used:
            name = name + "_"
        rename[g.name] = name
        used.add(name)
    gens = [(g.name, g.degree) for g in a.generators] + \
        [(rename[g.name], g.degree) for g in b.generators]
    diffs: dict[str, Poly] = dict(a.differential)

    stub = Presentation(gens, truncation_degree=max(a.truncation_degree,
                                                    b.truncation_degree),
                        check=False)

    def move(p: Poly) -> Poly:
        out = Poly.zero()
        for mono, c in p.terms.items():
            factors = [(rename[b.generators[i].name], e) for i, e in mono.powers]
            out = out + stub.monomial_poly(factors, c)
        return out

    for g in b.generators:
        diffs[rename[g.name]] = move(b.differential[g.name])
    tensor = Presentation(gens, diffs, truncation_degree=stub.truncation_degree)
    incl_a = Morphism.inclusion(a, tensor)
    incl_b = Morphism(b, tensor,
                      {g.name: tensor.generator(rename[g.name])
                       for g in b.generators})
    return tensor, incl_a, incl_b


def product_formality(a_verdict: FormalityVerdict,
                      b_verdict: FormalityVerdict) -> FormalityVerdict:
    """Verdict for the tensor product: formal iff both factors are.

    A NonFormal factor wins outright (its witness is lifted and re-certified
    in the tensor); two Formal factors produce a tensor certificate;
    Inconclusive propagates otherwise.
    """
    for verdict, other in ((a_verdict, b_verdict), (b_verdict, a_verdict)):
        if verdict.status == NON_FORMAL:
            return _lift_nonformal(verdict, other)
    if a_verdict.status == FORMAL and b_verdict.status == FORMAL:
        return _tensor_formal(a_verdict, b_verdict)
    reason = a_verdict.reason or b_verdict.reason or "factor inconclusive"
    return FormalityVerdict(
        INCONCLUSIVE, min(a_verdict.degree_bound, b_verdict.degree_bound),
        reason=reason)


def _factor_presentation(v: FormalityVerdict) -> Presentation:
    if v.model is None:
        raise ValueError("verdict carries no model; rerun dgms_check")
    return v.model.model


def _lift_nonformal(bad: FormalityVerdict,
                    other: FormalityVerdict) -> FormalityVerdict:
    a = _factor_presentation(bad)
    b = _factor_presentation(other)
    tensor, incl, _ = tensor_presentation(a, b)
    N = min(bad.degree_bound, other.degree_bound)
    wit = bad.witness
    table = cohomology(tensor, min(N, wit.degree + 1))
    if wit.kind == "ideal":
        lifted = incl.apply(wit.element)
        if tensor.d(lifted).is_zero and not table.is_exact(lifted):
            new = Witness("ideal", wit.degree, lifted,
                          wit.description + " (lifted to the tensor product)")
            return FormalityVerdict(NON_FORMAL, N, witness=new)
    else:
        try:
            res = massey_triple(table, incl.apply(wit.triple[0]),
                                incl.apply(wit.triple[1]),
                                incl.apply(wit.triple[2]))
        except (NotDefinedError, TruncationError):
            res = None
        if res is not None and not res.contains_zero:
            new = Witness("massey", wit.degree, res.representative,
                          wit.description + " (lifted to the tensor product)",
                          tuple(incl.apply(x) for x in wit.triple), res)
            return FormalityVerdict(NON_FORMAL, N, witness=new)
    return FormalityVerdict(
        INCONCLUSIVE, N,
        reason="factor witness did not survive lifting to the tensor product")


def _tensor_formal(a_verdict: FormalityVerdict,
                   b_verdict: FormalityVerdict) -> FormalityVerdict:
    a = _factor_presentation(a_verdict)
    b = _factor_presentation(b_verdict)
    tensor, incl_a, incl_b = tensor_presentation(a, b)
    N = min(a_verdict.degree_bound, b_verdict.degree_bound)
    table = cohomology(tensor, N)
    assignment: dict[str, list[Fraction]] = {}
    for cert, incl, pres in ((a_verdict.certificate, incl_a, a),
                             (b_verdict.certificate, incl_b, b)):
        for g in pres.generators:
            idx = incl.assignment[g.name].monomials()[0].powers[0][0]
            tname = tensor.generators[idx].name
            if g.degree > table.N:
                assignment[tname] = qlinalg.zero_vector(table.betti(g.degree))
                continue
            rep = cert.table.rep_of(g.degree, cert.assignment[g.name])
            if rep.is_zero:
                assignment[tname] = qlinalg.zero_vector(table.betti(g.degree))
            else:
                assignment[tname] = table.class_vector(incl.apply(rep))[1]
    mu = ClassMap(tensor, table, assignment)
    if not mu.is_chain_map() or not mu.is_quasi_iso(table):
        return FormalityVerdict(
            INCONCLUSIVE, N,
            reason="tensor certificate failed re-verification")
    model = identity_model(tensor) if is_minimal(tensor) else None
    return FormalityVerdict(FORMAL, N, certificate=mu, model=model)
