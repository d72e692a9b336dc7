"""Minimal Sullivan models up to a truncation degree.

The construction is the usual degree-by-degree one for simply-connected
input: in each degree, first add closed generators hitting the cokernel on
cohomology, then add generators whose differentials kill the kernel one
degree up.  The resulting map is an isomorphism on cohomology through the
truncation degree and injective one degree beyond.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import qlinalg
from .cohomology import cohomology
from .core import Morphism, Poly, Presentation
from .qlinalg import QMatrix, Span


class ModelError(Exception):
    pass


class LiftError(ModelError):
    """A degreewise lift could not be completed; carries the obstruction degree."""

    def __init__(self, degree: int, message: str):
        super().__init__(f"degree {degree}: {message}")
        self.degree = degree


@dataclass
class MinimalModel:
    model: Presentation
    target: Presentation
    map: Morphism
    provenance: dict[str, str] = field(default_factory=dict)


def identity_model(pres: Presentation) -> MinimalModel:
    """Wrap an already-minimal presentation as its own model."""
    if not is_minimal(pres):
        raise ModelError("presentation is not minimal")
    return MinimalModel(pres, pres, Morphism.identity(pres),
                        {g.name: "given" for g in pres.generators})


def is_minimal(pres: Presentation) -> bool:
    """V = V^(>=2) and every generator differential is decomposable."""
    if any(g.degree < 2 for g in pres.generators):
        return False
    return all(pres.is_decomposable(pres.differential[g.name])
               for g in pres.generators)


@dataclass
class QuasiIsoDegree:
    degree: int
    dim_source: int
    dim_target: int
    isomorphism: bool


@dataclass
class QuasiIsoReport:
    ok: bool
    degrees: list[QuasiIsoDegree]
    first_failure: int | None


def verify_quasi_iso(f: Morphism, max_degree: int | None = None) -> QuasiIsoReport:
    """Check that f induces isomorphisms on cohomology through the bound."""
    bound = min(f.source.truncation_degree, f.target.truncation_degree)
    if max_degree is not None:
        bound = min(bound, max_degree)
    src = cohomology(f.source, bound)
    tgt = cohomology(f.target, bound)
    rows = []
    first_failure = None
    for k in range(bound + 1):
        ds, dt = src.betti(k), tgt.betti(k)
        iso = ds == dt
        if iso and ds:
            iso = qlinalg.rank(src.induced_matrix(f, tgt, k)) == ds
        rows.append(QuasiIsoDegree(k, ds, dt, iso))
        if not iso and first_failure is None:
            first_failure = k
    return QuasiIsoReport(first_failure is None, rows, first_failure)


def minimal_model(pres: Presentation) -> MinimalModel:
    """Minimal Sullivan model of a simply-connected presentation.

    New generators are named v{degree}_{counter} and appended in creation
    order; provenance records the cohomology defect each one fixes.
    """
    if not pres.simply_connected:
        raise ModelError("minimal models require all generator degrees >= 2")
    N = pres.truncation_degree
    target_table = cohomology(pres, N + 1)

    gens: list[tuple[str, int]] = []
    diffs: dict[str, Poly] = {}
    images: dict[str, Poly] = {}
    provenance: dict[str, str] = {}
    counters: dict[int, int] = {}

    def build_model() -> Presentation:
        return Presentation(gens, diffs, truncation_degree=N, check=False)

    def build_map(model: Presentation) -> Morphism:
        return Morphism(model, pres, images, check_chain_map=False)

    def fresh(degree: int) -> str:
        c = counters.get(degree, 0)
        counters[degree] = c + 1
        return f"v{degree}_{c}"

    for k in range(2, N + 1):
        # surjectivity in degree k: add closed generators for the cokernel
        model = build_model()
        table = cohomology(model, k)
        fmap = build_map(model)
        image_span = Span(target_table.betti(k))
        for rep in table.degrees[k].class_reps:
            img = fmap.apply(rep)
            if img:
                image_span.add(target_table.class_vector(img)[1])
        for i, rep in enumerate(target_table.degrees[k].class_reps):
            unit = qlinalg.zero_vector(target_table.betti(k))
            unit[i] = Fraction(1)
            if not image_span.contains(unit):
                image_span.add(unit)
                name = fresh(k)
                gens.append((name, k))
                diffs[name] = Poly.zero()
                images[name] = rep
                provenance[name] = f"hits cohomology class in degree {k}"

        # injectivity in degree k+1: kill the kernel with degree-k generators
        model = build_model()
        table = cohomology(model, k + 1)
        fmap = build_map(model)
        n_src = table.betti(k + 1)
        if n_src:
            cols = []
            for rep in table.degrees[k + 1].class_reps:
                img = fmap.apply(rep)
                if img.is_zero:
                    cols.append(qlinalg.zero_vector(target_table.betti(k + 1)))
                else:
                    cols.append(target_table.class_vector(img)[1])
            mat = QMatrix.from_columns(cols, rows=target_table.betti(k + 1))
            for kv in qlinalg.kernel_basis(mat):
                zeta = Poly.zero()
                for c, rep in zip(kv, table.degrees[k + 1].class_reps):
                    if c:
                        zeta = zeta + rep.scale(c)
                alpha = target_table.solve_d(fmap.apply(zeta))
                if alpha is None:
                    raise LiftError(k + 1, "kernel class image is not exact")
                name = fresh(k)
                gens.append((name, k))
                diffs[name] = zeta
                images[name] = alpha
                provenance[name] = f"kills spurious class in degree {k + 1}"

    model = Presentation(gens, diffs, truncation_degree=N)
    fmap = Morphism(model, pres, images, check_chain_map=True)
    return MinimalModel(model, pres, fmap, provenance)


def sullivan_representative(f: Morphism, mA: MinimalModel,
                            mB: MinimalModel) -> Morphism:
    """Chain map between minimal models inducing the same cohomology map as f.

    Built by degreewise lifting: closed generators go to the unique class
    matching the composite on cohomology; the rest solve d fhat(v) = fhat(dv)
    with the pivot-minimal particular solution.
    """
    if mA.target is not f.source and not mA.target.same_generators(f.source):
        raise ModelError("mA is not a model of the source of f")
    if mB.target is not f.target and not mB.target.same_generators(f.target):
        raise ModelError("mB is not a model of the target of f")
    N = min(mA.model.truncation_degree, mB.model.truncation_degree)
    model_b_table = cohomology(mB.model, N)
    target_b_table = cohomology(f.target, N)

    assignment: dict[str, Poly] = {}
    partial = None
    order = sorted(mA.model.generators, key=lambda g: (g.degree, g.index))
    for g in order:
        if g.degree > N:
            assignment[g.name] = Poly.zero()
            continue
        dv = mA.model.differential[g.name]
        if dv.is_zero:
            # match [f(mA(v))] through the iso induced by mB
            composite = f.apply(mA.map.apply(mA.model.generator(g.name)))
            if composite.is_zero:
                target_class = qlinalg.zero_vector(target_b_table.betti(g.degree))
            else:
                target_class = target_b_table.class_vector(composite)[1]
            mat = model_b_table.induced_matrix(mB.map, target_b_table, g.degree)
            x = qlinalg.solve(mat, target_class)
            if x is None:
                raise LiftError(g.degree, f"no class matches the image of {g.name}")
            img = Poly.zero()
            for c, rep in zip(x, model_b_table.degrees[g.degree].class_reps):
                if c:
                    img = img + rep.scale(c)
            assignment[g.name] = img
        else:
            partial = Morphism(mA.model, mB.model,
                               {**assignment,
                                **{h.name: Poly.zero() for h in mA.model.generators
                                   if h.name not in assignment}},
                               check_chain_map=False)
            w = partial.apply(dv)
            x = model_b_table.solve_d(w)
            if x is None:
                raise LiftError(g.degree, f"obstruction lifting {g.name}")
            assignment[g.name] = x
    return Morphism(mA.model, mB.model, assignment, check_chain_map=True)


def hurewicz_injective_in_degree(m: MinimalModel, k: int) -> bool:
    """True iff every degree-k model generator is closed (V^k = C^k)."""
    return all(m.model.differential[g.name].is_zero
               for g in m.model.generators if g.degree == k)


def rational_connectivity(m: MinimalModel) -> int:
    """Largest k with no model generators in degrees <= k."""
    degrees = [g.degree for g in m.model.generators]
    if not degrees:
        return m.model.truncation_degree
    return min(degrees) - 1


def is_coformal(m: MinimalModel) -> bool:
    """True iff every generator differential is purely quadratic (word length 2)."""
    for g in m.model.generators:
        dg = m.model.differential[g.name]
        if any(mono.word_length() != 2 for mono in dg.terms):
            return False
    return True
