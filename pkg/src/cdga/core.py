"""Free graded-commutative algebras with a differential.

A Presentation is a finite ordered list of graded generators together with a
degree-+1 differential given on generators and extended as a derivation.
Monomials are kept in a canonical sorted form; all reordering signs follow
the Koszul convention (odd generators anticommute, odd squares vanish).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class PresentationError(Exception):
    pass


class DegreeError(PresentationError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    index: int

    @property
    def is_odd(self) -> bool:
        return self.degree % 2 == 1


@dataclass(frozen=True)
class Monomial:
    """Canonical product of generator powers, sorted by generator index."""

    powers: tuple[tuple[int, int], ...]  # (generator index, exponent >= 1)

    def word_length(self) -> int:
        return sum(e for _, e in self.powers)

    @property
    def is_one(self) -> bool:
        return not self.powers


MONOMIAL_ONE = Monomial(())


@dataclass
class Poly:
    """Rational linear combination of canonical monomials."""

    terms: dict[Monomial, Fraction] = field(default_factory=dict)

    @classmethod
    def zero(cls) -> "Poly":
        return cls({})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.terms == other.terms

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if c == 0:
            return Poly.zero()
        return Poly({m: c * t for m, t in self.terms.items()})

    def monomials(self) -> list[Monomial]:
        return list(self.terms)


class Presentation:
    """Free CDGA on ordered generators with a validated differential.

    Immutable after construction: the d^2 = 0 and degree-purity checks run up
    front and reject bad input.  truncation_degree bounds every completeness
    claim made downstream.
    """

    def __init__(
        self,
        generators: Sequence[tuple[str, int]],
        differential: Mapping[str, "Poly"] | None = None,
        truncation_degree: int = 20,
        check: bool = True,
    ):
        if truncation_degree < 1:
            raise PresentationError("truncation degree must be positive")
        self.truncation_degree = truncation_degree
        self.generators: list[Generator] = []
        self.by_name: dict[str, Generator] = {}
        for i, (name, deg) in enumerate(generators):
            if name in self.by_name:
                raise PresentationError(f"duplicate generator name {name!r}")
            if deg < 1:
                raise DegreeError(f"generator {name!r} has degree {deg} < 1")
            g = Generator(name, deg, i)
            self.generators.append(g)
            self.by_name[name] = g
        self.differential: dict[str, Poly] = {}
        differential = differential or {}
        for name in differential:
            if name not in self.by_name:
                raise PresentationError(f"differential on unknown generator {name!r}")
        for g in self.generators:
            dg = differential.get(g.name, Poly.zero())
            self.differential[g.name] = dg
        self.simply_connected = all(g.degree >= 2 for g in self.generators)
        self._basis_cache: dict[int, list[Monomial]] = {}
        self._d_mono_cache: dict[Monomial, Poly] = {}
        if check:
            for g in self.generators:
                dg = self.differential[g.name]
                if dg and not self.is_homogeneous(dg, g.degree + 1):
                    raise DegreeError(
                        f"d({g.name}) is not homogeneous of degree {g.degree + 1}"
                    )
            bad = check_d_squared(self)
            if bad:
                names = ", ".join(name for name, _ in bad)
                raise PresentationError(f"d^2 != 0 on generator(s): {names}")

    # ------------------------------------------------------------------
    # basic construction helpers

    def generator(self, name: str) -> Poly:
        g = self.by_name[name]
        return Poly({Monomial(((g.index, 1),)): Fraction(1)})

    def one(self) -> Poly:
        return Poly({MONOMIAL_ONE: Fraction(1)})

    def monomial_poly(self, factors: Sequence[tuple[str, int]], coeff=1) -> Poly:
        sign, mono = self.normalize([(self.by_name[n].index, e) for n, e in factors])
        if sign == 0:
            return Poly.zero()
        return Poly({mono: Fraction(coeff) * sign})

    # ------------------------------------------------------------------
    # canonical form and products

    def normalize(self, factors: Sequence[tuple[int, int]]) -> tuple[int, Monomial]:
        """Sort a factor list into canonical order, accumulating the Koszul sign.

        Returns (sign, monomial); sign is 0 exactly when an odd generator
        repeats.  Even generators are central and contribute no sign.
        """
        odd_letters: list[int] = []
        exps: dict[int, int] = {}
        for idx, e in factors:
            if e < 1:
                raise PresentationError("exponents must be >= 1")
            g = self.generators[idx]
            if g.is_odd:
                if e > 1:
                    return 0, MONOMIAL_ONE
                odd_letters.append(idx)
            exps[idx] = exps.get(idx, 0) + e
        # odd square check across separate factors
        if len(odd_letters) != len(set(odd_letters)):
            return 0, MONOMIAL_ONE
        inversions = 0
        for i in range(len(odd_letters)):
            for j in range(i + 1, len(odd_letters)):
                if odd_letters[i] > odd_letters[j]:
                    inversions += 1
        sign = -1 if inversions % 2 else 1
        mono = Monomial(tuple(sorted(exps.items())))
        return sign, mono

    def mono_mul(self, a: Monomial, b: Monomial) -> tuple[int, Monomial]:
        return self.normalize(list(a.powers) + list(b.powers))

    def mul(self, p: Poly, q: Poly) -> Poly:
        out: dict[Monomial, Fraction] = {}
        for ma, ca in p.terms.items():
            for mb, cb in q.terms.items():
                sign, m = self.mono_mul(ma, mb)
                if sign == 0:
                    continue
                c = out.get(m, Fraction(0)) + sign * ca * cb
                if c:
                    out[m] = c
                else:
                    out.pop(m, None)
        return Poly(out)

    def power(self, p: Poly, e: int) -> Poly:
        if e < 0:
            raise PresentationError("negative exponent")
        out = self.one()
        for _ in range(e):
            out = self.mul(out, p)
        return out

    # ------------------------------------------------------------------
    # grading

    def monomial_degree(self, m: Monomial) -> int:
        return sum(e * self.generators[i].degree for i, e in m.powers)

    def degree_of(self, p: Poly) -> int | None:
        """Degree of a homogeneous polynomial; None for 0 or mixed degrees."""
        degs = {self.monomial_degree(m) for m in p.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def is_homogeneous(self, p: Poly, degree: int | None = None) -> bool:
        if p.is_zero:
            return True
        d = self.degree_of(p)
        if d is None:
            return False
        return degree is None or d == degree

    def homogeneous_part(self, p: Poly, degree: int) -> Poly:
        return Poly({m: c for m, c in p.terms.items()
                     if self.monomial_degree(m) == degree})

    def basis_of_degree(self, k: int) -> list[Monomial]:
        """All canonical monomials of total degree k, in deterministic order."""
        if k < 0:
            return []
        if k in self._basis_cache:
            return self._basis_cache[k]

        out: list[Monomial] = []

        def rec(i: int, remaining: int, acc: list[tuple[int, int]]):
            if remaining == 0:
                out.append(Monomial(tuple(acc)))
                return
            if i >= len(self.generators):
                return
            g = self.generators[i]
            rec(i + 1, remaining, acc)
            max_e = 1 if g.is_odd else remaining // g.degree
            for e in range(1, max_e + 1):
                if e * g.degree <= remaining:
                    rec(i + 1, remaining - e * g.degree, acc + [(i, e)])

        rec(0, k, [])
        out.sort(key=lambda m: m.powers)
        self._basis_cache[k] = out
        return out

    # ------------------------------------------------------------------
    # the differential

    def d_monomial(self, m: Monomial) -> Poly:
        cached = self._d_mono_cache.get(m)
        if cached is not None:
            return cached
        result = Poly.zero()
        powers = list(m.powers)
        prefix_degree = 0
        for pos, (idx, e) in enumerate(powers):
            g = self.generators[idx]
            dg = self.differential[g.name]
            if dg:
                # d(g^e) = e * g^(e-1) * dg; internal signs vanish (g even or e=1)
                sign_prefix = -1 if prefix_degree % 2 else 1
                piece = self.mul(Poly({Monomial(tuple(powers[:pos])): Fraction(1)}), dg)
                tail = Monomial(tuple(([(idx, e - 1)] if e > 1 else []) + powers[pos + 1:]))
                piece = self.mul(piece, Poly({tail: Fraction(1)}))
                result = result + piece.scale(e * sign_prefix)
            prefix_degree += e * g.degree
        self._d_mono_cache[m] = result
        return result

    def d(self, p: Poly) -> Poly:
        out = Poly.zero()
        for m, c in p.terms.items():
            out = out + self.d_monomial(m).scale(c)
        return out

    # ------------------------------------------------------------------
    # structural predicates

    def is_decomposable(self, p: Poly) -> bool:
        """True iff every monomial of p has word length >= 2."""
        if p.is_zero:
            return True
        return all(m.word_length() >= 2 for m in p.terms)

    # ------------------------------------------------------------------
    # vector space interop

    def to_vector(self, p: Poly, basis: Sequence[Monomial]) -> list[Fraction]:
        index = {m: i for i, m in enumerate(basis)}
        v = [Fraction(0)] * len(basis)
        for m, c in p.terms.items():
            if m not in index:
                raise PresentationError("polynomial outside the given basis")
            v[index[m]] = c
        return v

    def from_vector(self, v: Sequence[Fraction], basis: Sequence[Monomial]) -> Poly:
        return Poly({m: Fraction(c) for m, c in zip(basis, v) if c != 0})

    # ------------------------------------------------------------------
    # derived presentations

    def extend(
        self,
        new_generators: Sequence[tuple[str, int]],
        new_differential: Mapping[str, Poly],
        truncation_degree: int | None = None,
    ) -> "Presentation":
        """New presentation with extra generators appended after the old ones."""
        gens = [(g.name, g.degree) for g in self.generators] + list(new_generators)
        diffs = dict(self.differential)
        diffs.update(new_differential)
        return Presentation(
            gens, diffs,
            truncation_degree or self.truncation_degree,
        )

    def same_generators(self, other: "Presentation") -> bool:
        return [(g.name, g.degree) for g in self.generators] == \
            [(g.name, g.degree) for g in other.generators]

    # ------------------------------------------------------------------
    # printing

    def monomial_str(self, m: Monomial) -> str:
        if m.is_one:
            return "1"
        parts = []
        for idx, e in m.powers:
            name = self.generators[idx].name
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)

    def poly_str(self, p: Poly) -> str:
        if p.is_zero:
            return "0"
        items = sorted(
            p.terms.items(),
            key=lambda kv: (self.monomial_degree(kv[0]), kv[0].powers),
        )
        chunks = []
        for m, c in items:
            sign = "-" if c < 0 else "+"
            c = abs(c)
            if m.is_one:
                body = str(c)
            elif c == 1:
                body = self.monomial_str(m)
            else:
                body = f"{c}*{self.monomial_str(m)}"
            chunks.append((sign, body))
        first_sign, first_body = chunks[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in chunks[1:]:
            text += f" {sign} {body}"
        return text


def check_d_squared(pres: Presentation) -> list[tuple[str, Poly]]:
    """d(d(g)) for every generator g; nonempty report means invalid input."""
    bad = []
    for g in pres.generators:
        dd = pres.d(pres.differential[g.name])
        if not dd.is_zero:
            bad.append((g.name, dd))
    return bad


class Morphism:
    """Degree-preserving algebra map given by its values on source generators."""

    def __init__(
        self,
        source: Presentation,
        target: Presentation,
        assignment: Mapping[str, Poly],
        check_chain_map: bool = True,
    ):
        self.source = source
        self.target = target
        self.assignment: dict[str, Poly] = {}
        for g in source.generators:
            if g.name not in assignment:
                raise PresentationError(f"no assignment for generator {g.name!r}")
            img = assignment[g.name]
            if img and not target.is_homogeneous(img, g.degree):
                raise DegreeError(
                    f"image of {g.name!r} is not homogeneous of degree {g.degree}"
                )
            self.assignment[g.name] = img
        if check_chain_map:
            defects = self.chain_map_defects()
            if defects:
                names = ", ".join(n for n, _ in defects)
                raise PresentationError(f"not a chain map on generator(s): {names}")

    @classmethod
    def identity(cls, pres: Presentation) -> "Morphism":
        return cls(pres, pres, {g.name: pres.generator(g.name) for g in pres.generators})

    @classmethod
    def inclusion(cls, sub: Presentation, sup: Presentation,
                  check_chain_map: bool = True) -> "Morphism":
        return cls(
            sub, sup,
            {g.name: sup.generator(g.name) for g in sub.generators},
            check_chain_map=check_chain_map,
        )

    def apply(self, p: Poly) -> Poly:
        out = Poly.zero()
        for m, c in p.terms.items():
            term = self.target.one()
            for idx, e in m.powers:
                g = self.source.generators[idx]
                img = self.assignment[g.name]
                term = self.target.mul(term, self.target.power(img, e))
            out = out + term.scale(c)
        return out

    def chain_map_defects(self) -> list[tuple[str, Poly]]:
        bad = []
        for g in self.source.generators:
            lhs = self.apply(self.source.differential[g.name])
            rhs = self.target.d(self.assignment[g.name])
            if lhs != rhs:
                bad.append((g.name, lhs - rhs))
        return bad

    def then(self, other: "Morphism") -> "Morphism":
        """Composite other∘self."""
        if other.source is not self.target and not other.source.same_generators(self.target):
            raise PresentationError("composition mismatch")
        return Morphism(
            self.source, other.target,
            {g.name: other.apply(self.assignment[g.name])
             for g in self.source.generators},
            check_chain_map=False,
        )
