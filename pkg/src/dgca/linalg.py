"""Exact linear algebra over the rationals.

All entries are `fractions.Fraction`; there is no floating point anywhere.
Elimination scans columns left to right and, inside a column, picks the
candidate pivot with the smallest combined numerator/denominator bit size
(ties broken by row index).  This keeps coefficient growth down and makes
every routine deterministic, which the rest of the package relies on for
reproducible bases and complements.
"""

from __future__ import annotations

from fractions import Fraction

Vec = list[Fraction]

F0 = Fraction(0)
F1 = Fraction(1)


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _bits(x: Fraction) -> int:
    return abs(x.numerator).bit_length() + x.denominator.bit_length()


def vec_add(u: Vec, v: Vec) -> Vec:
    return [a + b for a, b in zip(u, v)]

def vec_sub(u: Vec, v: Vec) -> Vec:
    return [a - b for a, b in zip(u, v)]

def vec_scale(c: Fraction, v: Vec) -> Vec:
    return [c * a for a in v]

def vec_is_zero(v: Vec) -> bool:
    return all(a == 0 for a in v)

def zero_vec(n: int) -> Vec:
    return [F0] * n


class Matrix:
    """Dense matrix of Fractions, row major."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows, ncols=None):
        self.rows = [[frac(x) for x in row] for row in rows]
        self.nrows = len(self.rows)
        if self.nrows:
            self.ncols = len(self.rows[0])
            assert all(len(r) == self.ncols for r in self.rows), "ragged rows"
            assert ncols is None or ncols == self.ncols
        else:
            assert ncols is not None, "empty matrix needs explicit column count"
            self.ncols = ncols

    @classmethod
    def zeros(cls, m: int, n: int) -> "Matrix":
        return cls([[F0] * n for _ in range(m)], ncols=n)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[F1 if i == j else F0 for j in range(n)] for i in range(n)], ncols=n)

    @classmethod
    def from_columns(cls, cols: list[Vec], nrows: int) -> "Matrix":
        assert all(len(c) == nrows for c in cols)
        return cls([[cols[j][i] for j in range(len(cols))] for i in range(nrows)],
                   ncols=len(cols))

    def copy(self) -> "Matrix":
        return Matrix([row[:] for row in self.rows], ncols=self.ncols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def col(self, j: int) -> Vec:
        return [self.rows[i][j] for i in range(self.nrows)]

    def columns(self) -> list[Vec]:
        return [self.col(j) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        return Matrix([[self.rows[i][j] for i in range(self.nrows)]
                       for j in range(self.ncols)], ncols=self.nrows)

    def hstack(self, other: "Matrix") -> "Matrix":
        assert self.nrows == other.nrows
        return Matrix([self.rows[i] + other.rows[i] for i in range(self.nrows)],
                      ncols=self.ncols + other.ncols)

    def mul_vec(self, v: Vec) -> Vec:
        assert len(v) == self.ncols
        return [sum((row[j] * v[j] for j in range(self.ncols) if v[j]), F0)
                for row in self.rows]

    def __matmul__(self, other: "Matrix") -> "Matrix":
        assert self.ncols == other.nrows
        return Matrix.from_columns([self.mul_vec(other.col(j)) for j in range(other.ncols)],
                                   self.nrows)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Matrix) and self.shape == other.shape
                and self.rows == other.rows)

    def __repr__(self) -> str:
        return f"Matrix({self.rows!r})"

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.rows for x in row)

    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form and the list of pivot columns."""
        m = self.copy()
        pivots: list[int] = []
        r = 0
        for c in range(m.ncols):
            if r >= m.nrows:
                break
            best = None
            for i in range(r, m.nrows):
                if m.rows[i][c] != 0:
                    key = (_bits(m.rows[i][c]), i)
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                continue
            i = best[1]
            if i != r:
                m.rows[r], m.rows[i] = m.rows[i], m.rows[r]
            p = m.rows[r][c]
            if p != 1:
                m.rows[r] = [x / p for x in m.rows[r]]
            for i in range(m.nrows):
                if i != r and m.rows[i][c] != 0:
                    f = m.rows[i][c]
                    m.rows[i] = [a - f * b for a, b in zip(m.rows[i], m.rows[r])]
            pivots.append(c)
            r += 1
        return m, pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def pivot_columns(self) -> list[int]:
        return self.rref()[1]

    def kernel(self) -> "Matrix":
        """Columns spanning the null space, one per free column of the rref."""
        red, pivots = self.rref()
        pivot_set = set(pivots)
        free = [j for j in range(self.ncols) if j not in pivot_set]
        cols = []
        for f in free:
            v = zero_vec(self.ncols)
            v[f] = F1
            for r, p in enumerate(pivots):
                v[p] = -red.rows[r][f]
            cols.append(v)
        return Matrix.from_columns(cols, self.ncols)

    def solve(self, b: Vec) -> Vec | None:
        """One solution of A x = b (free variables set to zero), or None."""
        assert len(b) == self.nrows
        aug = self.hstack(Matrix.from_columns([b], self.nrows))
        red, pivots = aug.rref()
        if pivots and pivots[-1] == self.ncols:
            return None
        x = zero_vec(self.ncols)
        for r, p in enumerate(pivots):
            x[p] = red.rows[r][self.ncols]
        return x

    def solve_matrix(self, B: "Matrix") -> "Matrix | None":
        cols = []
        for j in range(B.ncols):
            x = self.solve(B.col(j))
            if x is None:
                return None
            cols.append(x)
        return Matrix.from_columns(cols, self.ncols)

    def inverse(self) -> "Matrix":
        assert self.nrows == self.ncols
        inv = self.solve_matrix(Matrix.identity(self.nrows))
        if inv is None or (self @ inv) != Matrix.identity(self.nrows):
            raise ValueError("matrix is singular")
        return inv


def independent_columns(m: Matrix) -> Matrix:
    """The leftmost maximal independent subset of the original columns."""
    return Matrix.from_columns([m.col(j) for j in m.pivot_columns()], m.nrows)


def extend_basis(base: Matrix, candidates: Matrix) -> Matrix:
    """Greedy candidate columns extending the (independent) base columns.

    Returns only the newly chosen columns, scanned left to right.
    """
    chosen: list[Vec] = []
    current = base
    rank = base.rank()
    for j in range(candidates.ncols):
        trial = current.hstack(Matrix.from_columns([candidates.col(j)], base.nrows))
        if trial.rank() > rank:
            chosen.append(candidates.col(j))
            current = trial
            rank += 1
    return Matrix.from_columns(chosen, base.nrows)


def in_span(m: Matrix, v: Vec) -> bool:
    return m.solve(v) is not None


def span_contains(outer: Matrix, inner: Matrix) -> bool:
    return all(in_span(outer, inner.col(j)) for j in range(inner.ncols))


def span_equal(a: Matrix, b: Matrix) -> bool:
    return span_contains(a, b) and span_contains(b, a)


def sum_spans(a: Matrix, b: Matrix) -> Matrix:
    return independent_columns(a.hstack(b))


def intersect_spans(a: Matrix, b: Matrix) -> Matrix:
    """Basis of the intersection of two column spans in the same ambient space."""
    assert a.nrows == b.nrows
    if a.ncols == 0 or b.ncols == 0:
        return Matrix.from_columns([], a.nrows)
    neg_b = Matrix([[-x for x in row] for row in b.rows], ncols=b.ncols)
    ker = a.hstack(neg_b).kernel()
    cols = []
    for j in range(ker.ncols):
        coeffs = ker.col(j)[: a.ncols]
        cols.append(a.mul_vec(coeffs))
    return independent_columns(Matrix.from_columns(cols, a.nrows))
