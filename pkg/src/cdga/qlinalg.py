"""Exact linear algebra over the rationals.

Everything here works with fractions.Fraction entries; floats are forbidden
repo-wide.  Row reduction picks the first nonzero entry in row-major order,
so all computed bases are deterministic for a fixed input.  Matrices are
dense; the degrees we care about keep dimensions small.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

Vector = list[Fraction]


def vector(entries: Iterable) -> Vector:
    return [Fraction(e) for e in entries]


def zero_vector(n: int) -> Vector:
    return [Fraction(0)] * n


def is_zero_vector(v: Sequence[Fraction]) -> bool:
    return all(e == 0 for e in v)


def scale_vector(c: Fraction, v: Sequence[Fraction]) -> Vector:
    return [c * e for e in v]


def add_vectors(v: Sequence[Fraction], w: Sequence[Fraction]) -> Vector:
    return [a + b for a, b in zip(v, w)]


@dataclass(frozen=True)
class QMatrix:
    """Dense matrix of exact rationals."""

    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "QMatrix":
        data = tuple(tuple(Fraction(e) for e in row) for row in rows)
        if cols is None:
            if not data:
                raise ValueError("cols required for a matrix with no rows")
            cols = len(data[0])
        for row in data:
            if len(row) != cols:
                raise ValueError("ragged rows")
        return cls(len(data), cols, data)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> "QMatrix":
        if rows is None:
            if not columns:
                raise ValueError("rows required for a matrix with no columns")
            rows = len(columns[0])
        for col in columns:
            if len(col) != rows:
                raise ValueError("ragged columns")
        data = tuple(
            tuple(Fraction(columns[j][i]) for j in range(len(columns)))
            for i in range(rows)
        )
        return cls(rows, len(columns), data)

    def column(self, j: int) -> Vector:
        return [self.entries[i][j] for i in range(self.rows)]

    def row(self, i: int) -> Vector:
        return list(self.entries[i])

    def mul_vector(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return [sum((row[j] * v[j] for j in range(self.cols)), Fraction(0))
                for row in self.entries]


def rref(m: QMatrix) -> tuple[QMatrix, list[int]]:
    """Reduced row echelon form with the list of pivot columns."""
    rows = [list(r) for r in m.entries]
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        pivot_row = None
        for i in range(r, m.rows):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [e * inv for e in rows[r]]
        for i in range(m.rows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    return QMatrix.from_rows(rows, m.cols), pivots


def rank(m: QMatrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: QMatrix) -> list[Vector]:
    """Basis of the null space; empty iff the matrix is injective."""
    red, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for f in free:
        v = zero_vector(m.cols)
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -red.entries[r][f]
        basis.append(v)
    return basis


def solve(m: QMatrix, b: Sequence[Fraction]) -> Vector | None:
    """A particular solution of m*x = b, or None if b is not in the image."""
    if len(b) != m.rows:
        raise ValueError("dimension mismatch")
    aug = QMatrix.from_rows(
        [list(m.entries[i]) + [Fraction(b[i])] for i in range(m.rows)],
        m.cols + 1,
    )
    red, pivots = rref(aug)
    if m.cols in pivots:
        return None
    x = zero_vector(m.cols)
    for r, p in enumerate(pivots):
        x[p] = red.entries[r][m.cols]
    return x


def quotient_basis(
    space_dim: int, subspace: Sequence[Sequence[Fraction]]
) -> tuple[list[Vector], Callable[[Sequence[Fraction]], Vector]]:
    """Representatives completing a subspace, plus the quotient projection.

    The representatives are the standard basis vectors at the non-pivot
    coordinates of the reduced subspace; the projection sends a vector to its
    coordinates with respect to those representatives modulo the subspace.
    """
    for v in subspace:
        if len(v) != space_dim:
            raise ValueError("subspace vector of wrong length")
    if subspace:
        red, pivots = rref(QMatrix.from_rows(subspace, space_dim))
        red_rows = [red.row(r) for r in range(len(pivots))]
    else:
        pivots, red_rows = [], []
    free = [c for c in range(space_dim) if c not in set(pivots)]
    reps = []
    for f in free:
        v = zero_vector(space_dim)
        v[f] = Fraction(1)
        reps.append(v)

    def projection(v: Sequence[Fraction]) -> Vector:
        w = vector(v)
        for row, p in zip(red_rows, pivots):
            c = w[p]
            if c != 0:
                w = [a - c * b for a, b in zip(w, row)]
        return [w[f] for f in free]

    return reps, projection


class Span:
    """Incrementally maintained row space, for rank and membership queries."""

    def __init__(self, dim: int, vectors: Iterable[Sequence[Fraction]] = ()):
        self.dim = dim
        self._rows: list[Vector] = []
        self._pivots: list[int] = []
        for v in vectors:
            self.add(v)

    def _reduce(self, v: Sequence[Fraction]) -> Vector:
        w = vector(v)
        for row, p in zip(self._rows, self._pivots):
            if w[p] != 0:
                c = w[p]
                w = [a - c * b for a, b in zip(w, row)]
        return w

    def add(self, v: Sequence[Fraction]) -> bool:
        """Add a vector; True iff it enlarged the span."""
        w = self._reduce(v)
        for j in range(self.dim):
            if w[j] != 0:
                w = [e / w[j] for e in w]
                self._rows.append(w)
                self._pivots.append(j)
                return True
        return False

    def contains(self, v: Sequence[Fraction]) -> bool:
        return is_zero_vector(self._reduce(v))

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> list[Vector]:
        return [list(r) for r in self._rows]
