"""Models of spherical fibrations and their base reductions.

A fibration model adjoins fiber generators to a base presentation: an even
fiber contributes z (closed) and z' with dz' = z^2 - u, an odd fiber a single
generator e with de = u, and a projective-like fiber (cohomology Q[z]/z^d)
contributes z and z' with dz' = z^d - u.  When u has a linear part
("primitive"), the total model reduces to a smaller minimal presentation by
eliminating one base generator against z^d; the reduction comes with the
projection phi and a section psi satisfying phi∘psi = id.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from . import qlinalg
from .cohomology import ClassMap, CohomologyTable, cohomology
from .core import Generator, Monomial, Morphism, Poly, Presentation
from .qlinalg import QMatrix
from .sullivan import MinimalModel, is_minimal


class FibrationError(Exception):
    pass


class WrongDegree(FibrationError):
    pass


class NotClosed(FibrationError):
    pass


class ParityMismatch(FibrationError):
    pass


class NoLinearPart(FibrationError):
    pass


class DegeneratePresentation(FibrationError):
    pass


class BaseNotCertified(FibrationError):
    pass


@dataclass(frozen=True)
class EvenSphere:
    n: int


@dataclass(frozen=True)
class OddSphere:
    n: int


@dataclass(frozen=True)
class ProjectiveLike:
    """Fiber with cohomology Q[z]/z^d, deg z = n (n even, d >= 2)."""

    n: int
    d: int


@dataclass
class FibrationModel:
    base: MinimalModel | None
    base_pres: Presentation
    fiber_kind: object
    u: Poly
    total: Presentation
    primitive: bool
    z_name: str
    z_prime_name: str | None  # None for odd fibers

    @property
    def power(self) -> int:
        """Exponent d in dz' = z^d - u (2 for an even sphere)."""
        if isinstance(self.fiber_kind, ProjectiveLike):
            return self.fiber_kind.d
        return 2


@dataclass
class ReductionResult:
    VE_model: Presentation
    phi: Morphism
    psi: Morphism
    chosen_u_prime: Generator | None
    v_remainder: Poly
    u_prime_coefficient: Fraction


def _fresh(name: str, pres: Presentation) -> str:
    while name in pres.by_name:
        name = name + "_"
    return name


def build_fibration_model(base, fiber_kind, u: Poly,
                          names: tuple[str, ...] | None = None) -> FibrationModel:
    """Total model of a spherical fibration over a base with twisting class u.

    base may be a MinimalModel or a bare Presentation.  Optional names
    override the default fiber generator names ("z", "z'" / "e").
    """
    if isinstance(base, MinimalModel):
        base_model, base_pres = base, base.model
    else:
        base_model, base_pres = None, base

    if isinstance(fiber_kind, EvenSphere):
        if fiber_kind.n % 2 != 0:
            raise ParityMismatch("even-sphere fiber needs even degree")
        n, power, has_z_prime = fiber_kind.n, 2, True
        u_degree = 2 * fiber_kind.n
    elif isinstance(fiber_kind, OddSphere):
        if fiber_kind.n % 2 != 1:
            raise ParityMismatch("odd-sphere fiber needs odd degree")
        n, power, has_z_prime = fiber_kind.n, None, False
        u_degree = fiber_kind.n + 1
    elif isinstance(fiber_kind, ProjectiveLike):
        if fiber_kind.n % 2 != 0:
            raise ParityMismatch("projective-like fiber needs even degree")
        if fiber_kind.d < 2:
            raise FibrationError("projective-like fiber needs d >= 2")
        n, power, has_z_prime = fiber_kind.n, fiber_kind.d, True
        u_degree = fiber_kind.d * fiber_kind.n
    else:
        raise FibrationError(f"unknown fiber kind {fiber_kind!r}")

    if not u.is_zero:
        if base_pres.degree_of(u) != u_degree:
            raise WrongDegree(
                f"twisting class must be homogeneous of degree {u_degree}"
            )
        if not base_pres.d(u).is_zero:
            raise NotClosed("twisting class is not closed")

    if has_z_prime:
        z_name = _fresh(names[0] if names else "z", base_pres)
        zp_default = names[1] if names and len(names) > 1 else z_name + "'"
        zp_name = _fresh(zp_default, base_pres)
        z_idx = len(base_pres.generators)
        dz_prime = Poly({Monomial(((z_idx, power),)): Fraction(1)}) - u
        total = base_pres.extend(
            [(z_name, n), (zp_name, power * n - 1)],
            {z_name: Poly.zero(), zp_name: dz_prime},
        )
    else:
        z_name = _fresh(names[0] if names else "e", base_pres)
        zp_name = None
        total = base_pres.extend([(z_name, n)], {z_name: u})

    primitive = not base_pres.is_decomposable(u)
    return FibrationModel(base_model, base_pres, fiber_kind, u, total,
                          primitive, z_name, zp_name)


def _transport(p: Poly, source: Presentation, target: Presentation) -> Poly:
    """Re-express a polynomial via generator names in another presentation."""
    out = Poly.zero()
    for m, c in p.terms.items():
        factors = [(source.generators[i].name, e) for i, e in m.powers]
        out = out + target.monomial_poly(factors, c)
    return out


def theoremC_reduce(fm: FibrationModel) -> ReductionResult:
    """Eliminate one base generator of the total model against z^d.

    Primitive case: write u = c·u' + v with u' a generator and v free of u',
    and define phi(u') = (z^d - v)/c on the reduced generators; phi is a
    chain map and psi (generator inclusion) a section with phi∘psi = id.
    Non-primitive case: the total presentation is already minimal.
    """
    if isinstance(fm.fiber_kind, OddSphere):
        raise FibrationError("reduction applies to even/projective fibers only")
    if fm.u.is_zero:
        raise DegeneratePresentation(
            "u = 0: the fibration is a product; no reduction is needed"
        )
    total = fm.total
    if not fm.primitive:
        ident = Morphism.identity(total)
        return ReductionResult(total, ident, ident, None, fm.u, Fraction(1))

    base = fm.base_pres
    power = fm.power
    # the generator to eliminate: lowest-index linear term of u
    linear = sorted(
        (m.powers[0][0], c) for m, c in fm.u.terms.items() if m.word_length() == 1
    )
    if not linear:
        raise NoLinearPart("primitive fibration with no linear term in u")
    u_idx, coeff = linear[0]
    u_prime = base.generators[u_idx]
    if u_prime.degree != power * _fiber_n(fm):
        raise DegeneratePresentation("no generator of the twisting degree")
    v_remainder = fm.u - base.generator(u_prime.name).scale(coeff)

    ve_gens = [(g.name, g.degree) for g in base.generators if g.index != u_idx]
    ve_gens.append((fm.z_name, _fiber_n(fm)))
    ve_stub = Presentation(ve_gens, truncation_degree=total.truncation_degree,
                           check=False)
    z_poly = ve_stub.generator(fm.z_name)
    # v cannot contain u' (a degree reason: decomposable terms are too big)
    phi_u_prime = (ve_stub.power(z_poly, power)
                   - _transport(v_remainder, base, ve_stub)).scale(
        Fraction(1) / coeff)

    def push(p: Poly) -> Poly:
        """Image in the reduced algebra: substitute u' and keep other names."""
        out = Poly.zero()
        for m, c in p.terms.items():
            rest = [(i, e) for i, e in m.powers if i != u_idx]
            exp = dict(m.powers).get(u_idx, 0)
            term = _transport(Poly({Monomial(tuple(rest)): c}), total, ve_stub)
            if exp:
                # u' has even degree, so extracting its powers costs no sign
                term = ve_stub.mul(term, ve_stub.power(phi_u_prime, exp))
            out = out + term
        return out

    ve_diffs = {name: Poly.zero() for name, _ in ve_gens}
    for g in base.generators:
        if g.index != u_idx:
            ve_diffs[g.name] = push(base.differential[g.name])
    VE = Presentation(ve_gens, ve_diffs,
                      truncation_degree=total.truncation_degree)

    phi_assignment: dict[str, Poly] = {}
    for g in base.generators:
        if g.index == u_idx:
            phi_assignment[g.name] = _transport(phi_u_prime, ve_stub, VE)
        else:
            phi_assignment[g.name] = VE.generator(g.name)
    phi_assignment[fm.z_name] = VE.generator(fm.z_name)
    phi_assignment[fm.z_prime_name] = Poly.zero()
    phi = Morphism(total, VE, phi_assignment, check_chain_map=True)

    psi = Morphism(VE, total,
                   {name: total.generator(name) for name, _ in ve_gens},
                   check_chain_map=False)
    for name, _ in ve_gens:
        if phi.apply(psi.assignment[name]) != VE.generator(name):
            raise FibrationError("section identity phi∘psi = id failed")
    return ReductionResult(VE, phi, psi, u_prime, v_remainder, Fraction(coeff))


def _fiber_n(fm: FibrationModel) -> int:
    return fm.fiber_kind.n


def correction_sum(pres: Presentation, z: Poly, u: Poly, i: int, d: int) -> Poly:
    """The telescoping factor: sum of z^l u^m over l + d·m = d·(i-1).

    Satisfies (z^d - u) * S_i = z^(d·i) - u^i for i >= 1.
    """
    out = Poly.zero()
    for m in range(i):
        out = out + pres.mul(pres.power(z, d * (i - 1 - m)), pres.power(u, m))
    return out


def closure_correction(fm: FibrationModel, x: Poly,
                       reduction: ReductionResult | None = None) -> Poly:
    """A d-closed preimage of a reduced-model cocycle under phi.

    Returns psi(x) + x~ where the correction x~ collects, for each term
    b·u^i·z^j of d(psi(x)) (coefficients taken in the u-power expansion of
    the base), the summand b~·z'·z^j·S_i with the degree sign flip on b and
    the telescoping factor S_i.  Falls back to an exact linear solve if a
    residue survives; the result always satisfies d(result) = 0 and
    phi(result) = x.
    """
    if isinstance(fm.fiber_kind, OddSphere) or not fm.primitive:
        raise FibrationError("correction applies to primitive even/projective fibers")
    red = reduction or theoremC_reduce(fm)
    VE, total = red.VE_model, fm.total
    if not VE.d(x).is_zero:
        raise NotClosed("input is not closed in the reduced model")
    psix = red.psi.apply(x)
    w = total.d(psix)
    if w.is_zero:
        return psix

    d_exp = fm.power
    z_idx = total.by_name[fm.z_name].index
    zp_idx = total.by_name[fm.z_prime_name].index
    up_idx = red.chosen_u_prime.index
    c0 = red.u_prime_coefficient
    v_total = _transport(red.v_remainder, fm.base_pres, total)
    u_total = _transport(fm.u, fm.base_pres, total)
    z_poly = total.generator(fm.z_name)
    zp_poly = total.generator(fm.z_prime_name)

    # expand w = sum b_(i,j) u^i z^j with b free of u', z, z'
    coeffs: dict[tuple[int, int], Poly] = {}
    plain = True
    for m, cf in w.terms.items():
        exps = dict(m.powers)
        if exps.get(zp_idx):
            plain = False
            break
        j = exps.pop(z_idx, 0)
        p = exps.pop(up_idx, 0)
        rest = Poly({Monomial(tuple(sorted(exps.items()))): cf})
        # u' = (u - v)/c, expanded binomially; u' is even so signs are free
        for k in range(p + 1):
            scale = Fraction(comb(p, k)) * (-1) ** (p - k) / c0 ** p
            b_part = total.mul(rest, total.power(v_total, p - k)).scale(scale)
            key = (k, j)
            coeffs[key] = coeffs.get(key, Poly.zero()) + b_part

    candidate = psix
    if plain:
        tilde = Poly.zero()
        for (i, j), b in coeffs.items():
            if i == 0 or b.is_zero:
                continue
            flipped = Poly({m: cf * (-1) ** total.monomial_degree(m)
                            for m, cf in b.terms.items()})
            term = total.mul(flipped, zp_poly)
            term = total.mul(term, total.power(z_poly, j))
            term = total.mul(term, correction_sum(total, z_poly, u_total, i, d_exp))
            tilde = tilde + term
        candidate = psix + tilde
        if total.d(candidate).is_zero:
            return candidate

    # exact fallback: solve d(y) = 0 and phi(y) = x jointly
    k = total.degree_of(psix)
    src = total.basis_of_degree(k)
    up = total.basis_of_degree(k + 1)
    ve_basis = VE.basis_of_degree(k)
    d_cols = [total.to_vector(total.d_monomial(m), up) for m in src]
    phi_cols = [VE.to_vector(red.phi.apply(Poly({m: Fraction(1)})), ve_basis)
                for m in src]
    rows = [[col[r] for col in d_cols] for r in range(len(up))]
    rows += [[col[r] for col in phi_cols] for r in range(len(ve_basis))]
    rhs = qlinalg.zero_vector(len(up)) + VE.to_vector(x, ve_basis)
    sol = qlinalg.solve(QMatrix.from_rows(rows, len(src)), rhs)
    if sol is None:
        raise FibrationError("no closed preimage exists at this degree")
    return total.from_vector(sol, src)


def tilde_mu_E(fm: FibrationModel, mu_B: ClassMap,
               total_table: CohomologyTable | None = None) -> ClassMap:
    """Formality certificate of the total model from one of the base.

    Sends base generators to their mu_B classes pushed into H(total), z to
    [z] and z' to 0; verified to be a chain quasi-isomorphism.
    """
    if isinstance(fm.fiber_kind, OddSphere):
        raise FibrationError("certificate transfer needs an even/projective fiber")
    base = fm.base_pres
    if not isinstance(mu_B, ClassMap) or not mu_B.source.same_generators(base):
        raise BaseNotCertified("mu_B is not a certificate of the base")
    if not mu_B.is_chain_map():
        raise BaseNotCertified("mu_B is not a chain map")
    base_table = cohomology(base, mu_B.table.N)
    if not mu_B.is_quasi_iso(base_table):
        raise BaseNotCertified("mu_B is not a quasi-isomorphism")

    total = fm.total
    table = total_table or cohomology(total)
    assignment: dict[str, list[Fraction]] = {}
    for g in base.generators:
        rep = mu_B.table.rep_of(g.degree, mu_B.assignment[g.name])
        if rep.is_zero:
            assignment[g.name] = qlinalg.zero_vector(table.betti(g.degree))
        else:
            # base generators keep their monomial indices in the total model
            assignment[g.name] = table.class_vector(rep)[1]
    z_deg = _fiber_n(fm)
    assignment[fm.z_name] = table.class_vector(total.generator(fm.z_name))[1]
    assignment[fm.z_prime_name] = qlinalg.zero_vector(
        table.betti(fm.power * z_deg - 1))
    mu_E = ClassMap(total, table, assignment)
    if not mu_E.is_chain_map():
        raise FibrationError("transferred certificate is not a chain map")
    if not mu_E.is_quasi_iso(table):
        raise FibrationError("transferred certificate is not a quasi-isomorphism")
    return mu_E


@dataclass
class FormalMapDegree:
    degree: int
    equal: bool


@dataclass
class FormalMapReport:
    ok: bool
    degrees: list[FormalMapDegree]
    first_failure: int | None


def check_formal_map(fm: FibrationModel, mu_B: ClassMap, mu_E: ClassMap,
                     p_hat: Morphism | None = None) -> FormalMapReport:
    """Compare mu_E ∘ p_hat with p* ∘ mu_B on base cohomology classes.

    p_hat defaults to the generator inclusion of the base into the total
    model.  Equality of the two induced maps in every degree up to the
    common bound is the operational content of a formal fibration map.
    """
    base, total = fm.base_pres, fm.total
    if p_hat is None:
        p_hat = Morphism.inclusion(base, total, check_chain_map=False)
    bound = min(mu_B.table.N, mu_E.table.N, total.truncation_degree)
    base_table = cohomology(base, bound)
    incl = Morphism.inclusion(base, total, check_chain_map=False)
    degrees = []
    first_failure = None
    for k in range(bound + 1):
        equal = True
        for rep in base_table.degrees[k].class_reps:
            lhs = mu_E.evaluate_homogeneous(p_hat.apply(rep), k)
            vec = mu_B.evaluate_homogeneous(rep, k)
            pushed = mu_B.table.rep_of(k, vec)
            if pushed.is_zero:
                rhs = qlinalg.zero_vector(mu_E.table.betti(k))
            else:
                rhs = mu_E.table.class_vector(incl.apply(pushed))[1]
            if lhs != rhs:
                equal = False
                break
        degrees.append(FormalMapDegree(k, equal))
        if not equal and first_failure is None:
            first_failure = k
    return FormalMapReport(first_failure is None, degrees, first_failure)
