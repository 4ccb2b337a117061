"""Dense exact linear algebra over GF(q): matrices, Vandermonde builders,
inversion/solve/rank by Gaussian elimination, and coefficient vectors.

A CoeffVector expresses a stored or transmitted fragment as a linear
combination of the message fragments; all repair bookkeeping happens on
these vectors, so equality checks are exact.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .field import FieldElement, FieldMismatchError, PrimeField


class LinalgError(ValueError):
    pass


class DimensionError(LinalgError):
    """Shapes do not conform."""


class SingularMatrixError(LinalgError):
    """Matrix is rank-deficient where an invertible one is required."""


def _as_int(x, field: PrimeField) -> int:
    if isinstance(x, FieldElement):
        if x.field != field:
            raise FieldMismatchError("matrix entries must share one field")
        return x.value
    if isinstance(x, int):
        return x % field.q
    raise TypeError(f"expected int or FieldElement, got {type(x).__name__}")


class Matrix:
    """Immutable row-major matrix over a prime field."""

    __slots__ = ("field", "rows", "cols", "_rows")

    def __init__(self, rows: Sequence[Sequence], field: PrimeField):
        self.field = field
        data = [[_as_int(x, field) for x in row] for row in rows]
        if not data or not data[0]:
            raise DimensionError("matrix must have at least one row and column")
        ncols = len(data[0])
        if any(len(r) != ncols for r in data):
            raise DimensionError("ragged rows")
        self.rows = len(data)
        self.cols = ncols
        self._rows = data

    @classmethod
    def identity(cls, n: int, field: PrimeField) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], field)

    @classmethod
    def zero(cls, rows: int, cols: int, field: PrimeField) -> "Matrix":
        return cls([[0] * cols for _ in range(rows)], field)

    def entry(self, r: int, c: int) -> FieldElement:
        return self.field(self._rows[r][c])

    @property
    def entries(self) -> tuple:
        """Row-major tuple of FieldElements."""
        return tuple(self.field(x) for row in self._rows for x in row)

    def row(self, r: int) -> tuple:
        return tuple(self._rows[r])

    def col(self, c: int) -> tuple:
        return tuple(row[c] for row in self._rows)

    def submatrix(self, row_idx: Iterable[int], col_idx: Iterable[int]) -> "Matrix":
        ri, ci = list(row_idx), list(col_idx)
        return Matrix([[self._rows[r][c] for c in ci] for r in ri], self.field)

    def transpose(self) -> "Matrix":
        return Matrix(
            [[self._rows[r][c] for r in range(self.rows)] for c in range(self.cols)],
            self.field,
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.field != other.field:
            raise FieldMismatchError("matrix product across fields")
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        q = self.field.q
        ot = [other.col(c) for c in range(other.cols)]
        data = [
            [sum(a * b for a, b in zip(row, col)) % q for col in ot]
            for row in self._rows
        ]
        return Matrix(data, self.field)

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and other.field == self.field
            and other._rows == self._rows
        )

    def __hash__(self):
        return hash((self.field, tuple(tuple(r) for r in self._rows)))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self._rows)
        return f"Matrix[{body}] over {self.field}"

    # -- elimination-based operations ------------------------------------

    def rank(self) -> int:
        """Row rank by Gaussian elimination (first-nonzero pivoting)."""
        q = self.field.q
        work = [row[:] for row in self._rows]
        rank = 0
        for col in range(self.cols):
            pivot_row = None
            for r in range(rank, self.rows):
                if work[r][col]:
                    pivot_row = r
                    break
            if pivot_row is None:
                continue
            work[rank], work[pivot_row] = work[pivot_row], work[rank]
            inv = self.field.inv_int(work[rank][col])
            prow = [x * inv % q for x in work[rank]]
            work[rank] = prow
            for r in range(rank + 1, self.rows):
                f = work[r][col]
                if f:
                    work[r] = [(a - f * b) % q for a, b in zip(work[r], prow)]
            rank += 1
            if rank == self.rows:
                break
        return rank

    def invert(self) -> "Matrix":
        """Inverse via Gauss-Jordan on [A | I]."""
        if self.rows != self.cols:
            raise DimensionError("only square matrices can be inverted")
        n, q = self.rows, self.field.q
        work = [self._rows[i][:] + [1 if j == i else 0 for j in range(n)] for i in range(n)]
        for col in range(n):
            pivot_row = None
            for r in range(col, n):
                if work[r][col]:
                    pivot_row = r
                    break
            if pivot_row is None:
                raise SingularMatrixError(f"singular matrix (rank < {n})")
            work[col], work[pivot_row] = work[pivot_row], work[col]
            inv = self.field.inv_int(work[col][col])
            work[col] = [x * inv % q for x in work[col]]
            prow = work[col]
            for r in range(n):
                if r != col and work[r][col]:
                    f = work[r][col]
                    work[r] = [(a - f * b) % q for a, b in zip(work[r], prow)]
        return Matrix([row[n:] for row in work], self.field)

    def solve(self, rhs: Sequence) -> list:
        """Solve A x = b exactly for square nonsingular A; returns FieldElements."""
        if self.rows != self.cols:
            raise DimensionError("solve requires a square matrix")
        b = [_as_int(x, self.field) for x in rhs]
        if len(b) != self.rows:
            raise DimensionError(
                f"rhs length {len(b)} does not match {self.rows} rows"
            )
        n, q = self.rows, self.field.q
        work = [self._rows[i][:] + [b[i]] for i in range(n)]
        for col in range(n):
            pivot_row = None
            for r in range(col, n):
                if work[r][col]:
                    pivot_row = r
                    break
            if pivot_row is None:
                raise SingularMatrixError("singular system")
            work[col], work[pivot_row] = work[pivot_row], work[col]
            inv = self.field.inv_int(work[col][col])
            work[col] = [x * inv % q for x in work[col]]
            prow = work[col]
            for r in range(n):
                if r != col and work[r][col]:
                    f = work[r][col]
                    work[r] = [(a - f * b_) % q for a, b_ in zip(work[r], prow)]
        return [self.field(work[i][n]) for i in range(n)]


def vandermonde(evals: Sequence, rows: int, field: PrimeField | None = None) -> Matrix:
    """Matrix with entry (r, c) = evals[c] ** r.

    Every square submatrix built from full columns is invertible when the
    evaluation points are pairwise distinct.
    """
    if rows < 1:
        raise DimensionError("need at least one row")
    pts = list(evals)
    if not pts:
        raise DimensionError("need at least one evaluation point")
    if field is None:
        first = pts[0]
        if not isinstance(first, FieldElement):
            raise TypeError("pass a field when evaluation points are plain ints")
        field = first.field
    vals = [_as_int(p, field) for p in pts]
    if len(set(vals)) != len(vals):
        raise LinalgError(f"evaluation points must be distinct, got {vals}")
    return Matrix(
        [[pow(v, r, field.q) for v in vals] for r in range(rows)], field
    )


class CoeffVector:
    """A fragment as a length-M coefficient vector over the message fragments.

    The fragment's concrete value is coeffs . m for the message column m.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, coeffs: Sequence, field: PrimeField):
        self.field = field
        self.coeffs = tuple(_as_int(c, field) for c in coeffs)

    @classmethod
    def unit(cls, size: int, index: int, field: PrimeField) -> "CoeffVector":
        if not 0 <= index < size:
            raise DimensionError(f"unit index {index} out of range for size {size}")
        return cls([1 if i == index else 0 for i in range(size)], field)

    @classmethod
    def zeros(cls, size: int, field: PrimeField) -> "CoeffVector":
        return cls([0] * size, field)

    def _check(self, other: "CoeffVector") -> None:
        if not isinstance(other, CoeffVector):
            raise TypeError(f"expected CoeffVector, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatchError("coefficient vectors from different fields")
        if len(other.coeffs) != len(self.coeffs):
            raise DimensionError("coefficient vectors of different lengths")

    def __add__(self, other: "CoeffVector") -> "CoeffVector":
        self._check(other)
        q = self.field.q
        return CoeffVector(
            [(a + b) % q for a, b in zip(self.coeffs, other.coeffs)], self.field
        )

    def __sub__(self, other: "CoeffVector") -> "CoeffVector":
        self._check(other)
        q = self.field.q
        return CoeffVector(
            [(a - b) % q for a, b in zip(self.coeffs, other.coeffs)], self.field
        )

    def scale(self, factor) -> "CoeffVector":
        f = _as_int(factor, self.field)
        q = self.field.q
        return CoeffVector([c * f % q for c in self.coeffs], self.field)

    def __mul__(self, factor):
        return self.scale(factor)

    __rmul__ = __mul__

    def __neg__(self) -> "CoeffVector":
        q = self.field.q
        return CoeffVector([-c % q for c in self.coeffs], self.field)

    def dot(self, values: Sequence[int]) -> int:
        """Evaluate the fragment on a concrete message (list of ints)."""
        if len(values) != len(self.coeffs):
            raise DimensionError("message length mismatch")
        return sum(c * v for c, v in zip(self.coeffs, values)) % self.field.q

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CoeffVector)
            and other.field == self.field
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def describe(self, labels: Sequence[str]) -> str:
        """Human-readable rendering, e.g. '2*a1 + b2'."""
        terms = []
        for c, name in zip(self.coeffs, labels):
            if c == 0:
                continue
            terms.append(name if c == 1 else f"{c}*{name}")
        return " + ".join(terms) if terms else "0"

    def __repr__(self) -> str:
        return f"CoeffVector{self.coeffs} over {self.field}"


def stack_vectors(vectors: Sequence[CoeffVector]) -> Matrix:
    """Stack coefficient vectors as matrix rows."""
    vecs = list(vectors)
    if not vecs:
        raise DimensionError("cannot stack zero vectors")
    field = vecs[0].field
    return Matrix([list(v.coeffs) for v in vecs], field)
