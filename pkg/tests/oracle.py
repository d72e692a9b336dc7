"""Second, independent Betti-number implementation used to cross-check tests.

Deliberately shares no code with the package: monomials are words (tuples of
generator names with repetition), signs come from explicit bubble sorts, the
differential is expanded per letter, and ranks are taken by sympy over exact
rationals.
"""

from fractions import Fraction
from itertools import product

import sympy


class OracleAlgebra:
    """Plain-data description: gens [(name, degree)], diff name -> terms.

    Each differential term is (coefficient, [factor names]).
    """

    def __init__(self, gens, diff):
        self.gens = list(gens)
        self.order = {name: i for i, (name, _) in enumerate(self.gens)}
        self.degree = dict(self.gens)
        self.diff = {name: list(diff.get(name, [])) for name, _ in self.gens}

    def is_odd(self, name):
        return self.degree[name] % 2 == 1

    def word_degree(self, word):
        return sum(self.degree[x] for x in word)

    def normalize(self, word):
        """Sort a word into generator order; (sign, canonical word) or (0, ())."""
        word = list(word)
        sign = 1
        changed = True
        while changed:
            changed = False
            for i in range(len(word) - 1):
                a, b = word[i], word[i + 1]
                if self.order[a] > self.order[b]:
                    word[i], word[i + 1] = b, a
                    if self.is_odd(a) and self.is_odd(b):
                        sign = -sign
                    changed = True
        for i in range(len(word) - 1):
            if word[i] == word[i + 1] and self.is_odd(word[i]):
                return 0, ()
        return sign, tuple(word)

    def basis(self, k):
        """All canonical words of total degree k."""
        ranges = []
        for name, deg in self.gens:
            top = 1 if deg % 2 == 1 else k // deg
            ranges.append(range(top + 1))
        out = []
        for exps in product(*ranges):
            if sum(e * d for e, (_, d) in zip(exps, self.gens)) != k:
                continue
            word = []
            for e, (name, _) in zip(exps, self.gens):
                word.extend([name] * e)
            out.append(tuple(word))
        return sorted(out)

    def d_word(self, word):
        """Differential of a canonical word as {canonical word: Fraction}."""
        out = {}
        for i, letter in enumerate(word):
            prefix_deg = self.word_degree(word[:i])
            prefix_sign = -1 if prefix_deg % 2 else 1
            for coeff, factors in self.diff[letter]:
                new_word = list(word[:i]) + list(factors) + list(word[i + 1:])
                sign, canon = self.normalize(new_word)
                if sign == 0:
                    continue
                c = Fraction(coeff) * sign * prefix_sign
                out[canon] = out.get(canon, Fraction(0)) + c
        return {w: c for w, c in out.items() if c}


def betti_numbers(algebra: OracleAlgebra, max_degree: int):
    """Betti numbers in degrees 0..max_degree by sympy rank computations."""
    bases = {k: algebra.basis(k) for k in range(max_degree + 2)}

    def d_matrix(k):
        rows = {w: i for i, w in enumerate(bases[k + 1])}
        mat = sympy.zeros(len(bases[k + 1]), len(bases[k]))
        for j, w in enumerate(bases[k]):
            for target, c in algebra.d_word(w).items():
                mat[rows[target], j] = sympy.Rational(c.numerator, c.denominator)
        return mat

    ranks = {k: d_matrix(k).rank() for k in range(max_degree + 1)}
    out = []
    for k in range(max_degree + 1):
        dim = len(bases[k])
        prev = ranks.get(k - 1, 0)
        out.append(dim - ranks[k] - prev)
    return out


def from_presentation(pres) -> OracleAlgebra:
    """Convert package input data to the oracle's plain-data form.

    Only the defining data (generator list and differential terms) crosses
    over; all computation stays on the oracle side.
    """
    gens = [(g.name, g.degree) for g in pres.generators]
    diff = {}
    for g in pres.generators:
        terms = []
        for mono, coeff in pres.differential[g.name].terms.items():
            factors = []
            for idx, e in mono.powers:
                factors.extend([pres.generators[idx].name] * e)
            terms.append((coeff, factors))
        if terms:
            diff[g.name] = terms
    return OracleAlgebra(gens, diff)
