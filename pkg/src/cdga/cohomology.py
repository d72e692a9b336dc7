"""Degreewise cohomology, cup products, cup-length, Massey triple products.

A CohomologyTable holds, per degree up to the truncation bound, the monomial
basis, cocycle and coboundary bases, and class representatives chosen by
deterministic pivoting.  Products of classes are computed on representatives
and re-expressed in class coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import qlinalg
from .core import Monomial, Morphism, Poly, Presentation
from .qlinalg import QMatrix, Span, Vector


class NotClosedError(Exception):
    pass


class NotDefinedError(Exception):
    """Massey triple requested where the products do not vanish."""


class TruncationError(Exception):
    """Asked for structure above the truncation degree."""


@dataclass
class DegreeData:
    basis: list[Monomial]
    cocycles: list[Vector]
    coboundaries: list[Vector]
    class_reps: list[Poly]
    class_vectors: list[Vector]


class CohomologyTable:
    def __init__(self, pres: Presentation, max_degree: int | None = None):
        self.pres = pres
        self.N = max_degree if max_degree is not None else pres.truncation_degree
        self._d_matrices: dict[int, QMatrix] = {}
        self.degrees: dict[int, DegreeData] = {}
        for k in range(0, self.N + 1):
            self.degrees[k] = self._compute_degree(k)

    # ------------------------------------------------------------------
    # construction

    def d_matrix(self, k: int) -> QMatrix:
        """Matrix of d from the degree-k to the degree-(k+1) monomial basis."""
        if k in self._d_matrices:
            return self._d_matrices[k]
        src = self.pres.basis_of_degree(k)
        tgt = self.pres.basis_of_degree(k + 1)
        cols = [self.pres.to_vector(self.pres.d_monomial(m), tgt) for m in src]
        mat = QMatrix.from_columns(cols, rows=len(tgt))
        self._d_matrices[k] = mat
        return mat

    def _compute_degree(self, k: int) -> DegreeData:
        basis = self.pres.basis_of_degree(k)
        dk = self.d_matrix(k)
        cocycles = qlinalg.kernel_basis(dk)
        coboundaries: list[Vector] = []
        if k > 0:
            prev = self.d_matrix(k - 1)
            span = Span(len(basis))
            for j in range(prev.cols):
                col = prev.column(j)
                if span.add(col):
                    coboundaries.append(col)
        reps: list[Poly] = []
        rep_vectors: list[Vector] = []
        span = Span(len(basis), coboundaries)
        for v in cocycles:
            if span.add(v):
                reps.append(self.pres.from_vector(v, basis))
                rep_vectors.append(v)
        return DegreeData(basis, cocycles, coboundaries, reps, rep_vectors)

    # ------------------------------------------------------------------
    # queries

    def betti(self, k: int) -> int:
        if k < 0 or k > self.N:
            return 0
        return len(self.degrees[k].class_reps)

    def betti_numbers(self) -> list[int]:
        return [self.betti(k) for k in range(self.N + 1)]

    def class_vector(self, p: Poly) -> tuple[int, Vector]:
        """Class coordinates of a closed homogeneous polynomial."""
        if p.is_zero:
            raise NotClosedError("zero polynomial has no well-defined degree")
        k = self.pres.degree_of(p)
        if k is None:
            raise NotClosedError("polynomial is not homogeneous")
        if k > self.N:
            raise TruncationError(f"degree {k} exceeds bound {self.N}")
        if not self.pres.d(p).is_zero:
            raise NotClosedError(self.pres.poly_str(p))
        data = self.degrees[k]
        v = self.pres.to_vector(p, data.basis)
        cols = data.coboundaries + data.class_vectors
        if not cols:
            return k, []
        mat = QMatrix.from_columns(cols, rows=len(data.basis))
        x = qlinalg.solve(mat, v)
        if x is None:
            raise NotClosedError("closed polynomial outside the cocycle space")
        return k, x[len(data.coboundaries):]

    def rep_of(self, k: int, class_vec: Sequence[Fraction]) -> Poly:
        data = self.degrees[k]
        out = Poly.zero()
        for c, rep in zip(class_vec, data.class_reps):
            if c:
                out = out + rep.scale(c)
        return out

    def class_product(self, k1: int, v1: Sequence[Fraction],
                      k2: int, v2: Sequence[Fraction]) -> Vector:
        k = k1 + k2
        if k > self.N:
            raise TruncationError(f"product degree {k} exceeds bound {self.N}")
        p = self.pres.mul(self.rep_of(k1, v1), self.rep_of(k2, v2))
        if p.is_zero:
            return qlinalg.zero_vector(self.betti(k))
        return self.class_vector(p)[1]

    def solve_d(self, p: Poly) -> Poly | None:
        """A primitive for p (some s with ds = p), or None if p is not exact."""
        if p.is_zero:
            return Poly.zero()
        k = self.pres.degree_of(p)
        if k is None:
            raise NotClosedError("polynomial is not homogeneous")
        if k == 0:
            return None
        src = self.pres.basis_of_degree(k - 1)
        tgt = self.pres.basis_of_degree(k)
        mat = self.d_matrix(k - 1)
        x = qlinalg.solve(mat, self.pres.to_vector(p, tgt))
        if x is None:
            return None
        return self.pres.from_vector(x, src)

    def is_exact(self, p: Poly) -> bool:
        return self.solve_d(p) is not None

    def induced_matrix(self, f: Morphism, target_table: "CohomologyTable",
                       k: int) -> QMatrix:
        """Matrix of the map induced by f on degree-k cohomology."""
        cols = []
        for rep in self.degrees[k].class_reps:
            img = f.apply(rep)
            if img.is_zero:
                cols.append(qlinalg.zero_vector(target_table.betti(k)))
            else:
                cols.append(target_table.class_vector(img)[1])
        return QMatrix.from_columns(cols, rows=target_table.betti(k))


def cohomology(pres: Presentation, max_degree: int | None = None) -> CohomologyTable:
    return CohomologyTable(pres, max_degree)


def cup_length(table: CohomologyTable) -> int:
    """Longest nonvanishing product of positive-degree classes within degree N."""
    current: dict[int, list[Vector]] = {}
    for k in range(1, table.N + 1):
        if table.betti(k):
            current[k] = [_unit(i, table.betti(k)) for i in range(table.betti(k))]
    if not current:
        return 0
    length = 1
    while True:
        nxt: dict[int, Span] = {}
        for k1, vecs in current.items():
            for k2 in range(1, table.N + 1 - k1):
                if not table.betti(k2):
                    continue
                for i in range(table.betti(k2)):
                    a = _unit(i, table.betti(k2))
                    for v in vecs:
                        prod = table.class_product(k2, a, k1, v)
                        if not qlinalg.is_zero_vector(prod):
                            k = k1 + k2
                            nxt.setdefault(k, Span(table.betti(k))).add(prod)
        if not nxt:
            return length
        length += 1
        current = {k: s.rows for k, s in nxt.items()}


def _unit(i: int, n: int) -> Vector:
    v = qlinalg.zero_vector(n)
    v[i] = Fraction(1)
    return v


@dataclass
class MasseyResult:
    degree: int
    representative: Poly
    rep_class: Vector
    indeterminacy: list[Vector]
    contains_zero: bool


def massey_triple(table: CohomologyTable, a: Poly, b: Poly, c: Poly) -> MasseyResult:
    """Triple Massey product <a,b,c> for closed a, b, c with ab and bc exact.

    Convention: representative s*c + (-1)^(|a|+1) a*t with ds = ab, dt = bc.
    Tests assert only membership of zero, which is convention-independent.
    """
    pres = table.pres
    ka = pres.degree_of(a)
    kb = pres.degree_of(b)
    kc = pres.degree_of(c)
    if ka is None or kb is None or kc is None:
        raise NotDefinedError("inputs must be homogeneous and nonzero")
    for p in (a, b, c):
        if not pres.d(p).is_zero:
            raise NotClosedError(pres.poly_str(p))
    target = ka + kb + kc - 1
    if target > table.N:
        raise TruncationError(f"target degree {target} exceeds bound {table.N}")
    s = table.solve_d(pres.mul(a, b))
    t = table.solve_d(pres.mul(b, c))
    if s is None or t is None:
        raise NotDefinedError("[a][b] and [b][c] must both vanish")
    sign = Fraction(-1 if ka % 2 == 0 else 1)  # (-1)^(|a|+1)
    rep = pres.mul(s, c) + pres.mul(a, t).scale(sign)
    if rep.is_zero:
        rep_class = qlinalg.zero_vector(table.betti(target))
    else:
        rep_class = table.class_vector(rep)[1]
    # indeterminacy: [a]*H^(kb+kc-1) + H^(ka+kb-1)*[c]
    indet: list[Vector] = []
    span = Span(table.betti(target))
    va = table.class_vector(a)[1] if a else []
    vc = table.class_vector(c)[1] if c else []
    for i in range(table.betti(kb + kc - 1)):
        v = table.class_product(ka, va, kb + kc - 1, _unit(i, table.betti(kb + kc - 1)))
        if span.add(v):
            indet.append(v)
    for i in range(table.betti(ka + kb - 1)):
        v = table.class_product(ka + kb - 1, _unit(i, table.betti(ka + kb - 1)), kc, vc)
        if span.add(v):
            indet.append(v)
    contains_zero = span.contains(rep_class) if rep_class else True
    return MasseyResult(target, rep, rep_class, indet, contains_zero)


class ClassMap:
    """Multiplicative map from a presentation into a cohomology ring (H, 0).

    The target ring is the cohomology table of some presentation; generator
    images are class-coordinate vectors in that table.  This is the shape of
    every formality certificate and of the fibration certificate built from
    one.
    """

    def __init__(self, source: Presentation, table: CohomologyTable,
                 assignment: Mapping[str, Sequence[Fraction]]):
        self.source = source
        self.table = table
        self.assignment: dict[str, Vector] = {}
        for g in source.generators:
            if g.name not in assignment:
                raise NotDefinedError(f"no class assigned to generator {g.name!r}")
            v = qlinalg.vector(assignment[g.name])
            if len(v) != table.betti(g.degree):
                raise NotDefinedError(
                    f"class for {g.name!r} has wrong dimension in degree {g.degree}"
                )
            self.assignment[g.name] = v

    def evaluate(self, p: Poly) -> dict[int, Vector]:
        """Images per degree, as class-coordinate vectors in the target table."""
        out: dict[int, Vector] = {}
        for m, coeff in p.terms.items():
            k = 0
            v: Vector = [Fraction(1)]
            dead = False
            for idx, e in m.powers:
                g = self.source.generators[idx]
                for _ in range(e):
                    v = self.table.class_product(k, v, g.degree, self.assignment[g.name])
                    k += g.degree
                    if qlinalg.is_zero_vector(v):
                        dead = True
                        break
                if dead:
                    break
            if dead:
                continue
            acc = out.setdefault(k, qlinalg.zero_vector(self.table.betti(k)))
            out[k] = qlinalg.add_vectors(acc, qlinalg.scale_vector(coeff, v))
        return {k: v for k, v in out.items() if not qlinalg.is_zero_vector(v)}

    def evaluate_homogeneous(self, p: Poly, degree: int) -> Vector:
        vals = self.evaluate(p)
        return vals.get(degree, qlinalg.zero_vector(self.table.betti(degree)))

    def is_chain_map(self) -> bool:
        return not self.chain_map_defects()

    def chain_map_defects(self) -> list[str]:
        bad = []
        for g in self.source.generators:
            dg = self.source.differential[g.name]
            if dg and g.degree + 1 <= self.table.N and self.evaluate(dg):
                bad.append(g.name)
        return bad

    def induced_matrix(self, source_table: CohomologyTable, k: int) -> QMatrix:
        cols = []
        for rep in source_table.degrees[k].class_reps:
            cols.append(self.evaluate_homogeneous(rep, k))
        return QMatrix.from_columns(cols, rows=self.table.betti(k))

    def is_quasi_iso(self, source_table: CohomologyTable,
                     max_degree: int | None = None) -> bool:
        bound = min(source_table.N, self.table.N)
        if max_degree is not None:
            bound = min(bound, max_degree)
        for k in range(bound + 1):
            n_src = source_table.betti(k)
            n_tgt = self.table.betti(k)
            if n_src != n_tgt:
                return False
            if n_src and qlinalg.rank(self.induced_matrix(source_table, k)) != n_src:
                return False
        return True
