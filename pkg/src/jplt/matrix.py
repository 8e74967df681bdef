"""Dense exact linear algebra over a prime field.

Entries are stored as canonical residues (plain ints in [0, q)); all
arithmetic is exact, there is no floating point anywhere.  Reduction uses
Gauss-Jordan elimination with deterministic pivoting: first nonzero entry,
scanning top to bottom, so results are reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from random import Random
from typing import Iterable, Sequence

from .gf import FieldMismatchError, PrimeField

__all__ = [
    "ShapeError",
    "SingularMatrixError",
    "EnumerationCapError",
    "Matrix",
    "RrefResult",
    "vstack",
    "matrix_from_lists",
    "random_matrix",
    "random_invertible",
    "DEFAULT_MDS_CAP",
]

DEFAULT_MDS_CAP = 10**7


class ShapeError(ValueError):
    """Raised when matrix dimensions do not line up."""


class SingularMatrixError(ValueError):
    """Raised when an inverse of a singular matrix is requested."""


class EnumerationCapError(RuntimeError):
    """Raised when a brute-force enumeration would exceed its cap."""


class Matrix:
    """An immutable-by-convention rows x cols matrix over GF(q)."""

    __slots__ = ("field", "rows", "cols", "_data")

    def __init__(self, field: PrimeField, data: Sequence[Sequence[int]], *, cols: int | None = None):
        q = field.q
        rows = len(data)
        if rows:
            width = len(data[0])
            if cols is not None and cols != width:
                raise ShapeError(f"cols={cols} does not match row width {width}")
            cols = width
        elif cols is None:
            raise ShapeError("cols is required for a matrix with zero rows")
        norm = []
        for row in data:
            if len(row) != cols:
                raise ShapeError("ragged rows")
            norm.append([v % q for v in row])
        self.field = field
        self.rows = rows
        self.cols = cols
        self._data = norm

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int) -> "Matrix":
        return cls(field, [[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> "Matrix":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        return self._data[i][j]

    def row(self, i: int) -> list[int]:
        return list(self._data[i])

    def column(self, j: int) -> list[int]:
        return [row[j] for row in self._data]

    def to_lists(self) -> list[list[int]]:
        """Deep copy as plain lists; the shared JSON wire form."""
        return [list(row) for row in self._data]

    def transpose(self) -> "Matrix":
        if self.rows == 0:
            return Matrix(self.field, [[] for _ in range(self.cols)], cols=0)
        return Matrix(self.field, [list(col) for col in zip(*self._data)], cols=self.rows)

    def select_rows(self, indices: Iterable[int]) -> "Matrix":
        return Matrix(self.field, [list(self._data[i]) for i in indices], cols=self.cols)

    def select_columns(self, indices: Iterable[int]) -> "Matrix":
        idx = list(indices)
        return Matrix(self.field, [[row[j] for j in idx] for row in self._data], cols=len(idx))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatchError("matrix product across different fields")
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        q = self.field.q
        bt = [other.column(j) for j in range(other.cols)]
        out = [[sum(a * b for a, b in zip(row, col)) % q for col in bt] for row in self._data]
        return Matrix(self.field, out, cols=other.cols)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Matrix)
            and other.field == self.field
            and other.shape == self.shape
            and other._data == self._data
        )

    def __repr__(self) -> str:
        if self.rows <= 8 and self.cols <= 12:
            return f"Matrix(F{self.field.q}, {self._data})"
        return f"Matrix({self.rows}x{self.cols} over F{self.field.q})"

    def is_zero(self) -> bool:
        return all(v == 0 for row in self._data for v in row)

    def rref(self) -> "RrefResult":
        """Reduced row echelon form with the recorded row transform.

        The transform T is an invertible rows x rows matrix satisfying
        T @ self == rref exactly.
        """
        q = self.field.q
        m = [list(row) for row in self._data]
        t = [[1 if i == j else 0 for j in range(self.rows)] for i in range(self.rows)]
        pivots: list[int] = []
        r = 0
        for c in range(self.cols):
            pivot = None
            for i in range(r, self.rows):
                if m[i][c]:
                    pivot = i
                    break
            if pivot is None:
                continue
            m[r], m[pivot] = m[pivot], m[r]
            t[r], t[pivot] = t[pivot], t[r]
            inv = pow(m[r][c], q - 2, q)
            if inv != 1:
                m[r] = [v * inv % q for v in m[r]]
                t[r] = [v * inv % q for v in t[r]]
            mr = m[r]
            tr = t[r]
            for i in range(self.rows):
                f = m[i][c]
                if i != r and f:
                    m[i] = [(a - f * b) % q for a, b in zip(m[i], mr)]
                    t[i] = [(a - f * b) % q for a, b in zip(t[i], tr)]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return RrefResult(
            rref=Matrix(self.field, m, cols=self.cols),
            rank=r,
            pivot_cols=tuple(pivots),
            transform=Matrix(self.field, t, cols=self.rows),
        )

    def rank(self) -> int:
        return self.rref().rank

    def null_space(self) -> "Matrix":
        """Canonical right-kernel basis, one row per free column.

        Rows are ordered by ascending free column; entries at free columns
        form an identity block, so the basis is deterministic.  A matrix
        with zero rows yields the full-space (identity) basis.
        """
        res = self.rref()
        pivot_at = {c: i for i, c in enumerate(res.pivot_cols)}
        q = self.field.q
        basis = []
        for free in range(self.cols):
            if free in pivot_at:
                continue
            vec = [0] * self.cols
            vec[free] = 1
            for c, i in pivot_at.items():
                vec[c] = -res.rref._data[i][free] % q
            basis.append(vec)
        return Matrix(self.field, basis, cols=self.cols)

    def solve_in_rowspace(self, target: "Matrix") -> "Matrix | None":
        """Find C with C @ self == target, or None if some target row
        falls outside the row space of self."""
        if not isinstance(target, Matrix):
            raise TypeError("target must be a Matrix")
        if target.field != self.field:
            raise FieldMismatchError("solve across different fields")
        if target.cols != self.cols:
            raise ShapeError(f"target width {target.cols} != {self.cols}")
        res = self.rref()
        q = self.field.q
        red = res.rref._data
        tr = res.transform._data
        out = []
        for row in target._data:
            residue = list(row)
            coeffs = []
            for i, c in enumerate(res.pivot_cols):
                f = residue[c]
                coeffs.append(f)
                if f:
                    ri = red[i]
                    residue = [(a - f * b) % q for a, b in zip(residue, ri)]
            if any(residue):
                return None
            crow = [0] * self.rows
            for f, trow in zip(coeffs, tr):
                if f:
                    crow = [(a + f * b) % q for a, b in zip(crow, trow)]
            out.append(crow)
        return Matrix(self.field, out, cols=self.rows)

    def invert(self) -> "Matrix":
        if self.rows != self.cols:
            raise ShapeError(f"cannot invert non-square {self.shape}")
        res = self.rref()
        if res.rank != self.rows:
            raise SingularMatrixError(f"matrix of rank {res.rank} < {self.rows} is singular")
        return res.transform

    def is_mds(self, cap: int = DEFAULT_MDS_CAP) -> bool:
        """True when every rows x rows column submatrix is invertible.

        Checked by exhausting all column subsets; raises EnumerationCapError
        when there are more than cap of them.  Vacuously true for zero rows.
        """
        r, c = self.rows, self.cols
        if r > c:
            raise ShapeError(f"is_mds needs rows <= cols, got {self.shape}")
        if r == 0:
            return True
        if math.comb(c, r) > cap:
            raise EnumerationCapError(f"C({c},{r}) column subsets exceed cap {cap}")
        q = self.field.q
        data = self._data
        from itertools import combinations

        for idx in combinations(range(c), r):
            if not _invertible_submatrix(data, idx, q):
                return False
        return True


def _invertible_submatrix(data: list[list[int]], col_idx: tuple[int, ...], q: int) -> bool:
    """Invertibility of the square submatrix on the given columns."""
    n = len(col_idx)
    m = [[row[j] for j in col_idx] for row in data]
    for c in range(n):
        pivot = None
        for i in range(c, n):
            if m[i][c]:
                pivot = i
                break
        if pivot is None:
            return False
        m[c], m[pivot] = m[pivot], m[c]
        inv = pow(m[c][c], q - 2, q)
        mc = [v * inv % q for v in m[c]]
        m[c] = mc
        for i in range(c + 1, n):
            f = m[i][c]
            if f:
                m[i] = [(a - f * b) % q for a, b in zip(m[i], mc)]
    return True


@dataclass(frozen=True)
class RrefResult:
    rref: Matrix
    rank: int
    pivot_cols: tuple[int, ...]
    transform: Matrix


def vstack(top: Matrix, bottom: Matrix) -> Matrix:
    """Stack two matrices with equal width and field."""
    if top.field != bottom.field:
        raise FieldMismatchError("vstack across different fields")
    if top.cols != bottom.cols:
        raise ShapeError(f"widths differ: {top.cols} vs {bottom.cols}")
    return Matrix(top.field, top.to_lists() + bottom.to_lists(), cols=top.cols)


def matrix_from_lists(field: PrimeField, data: Sequence[Sequence[int]], *, cols: int | None = None) -> Matrix:
    """Strict boundary constructor: rejects entries outside [0, q)."""
    q = field.q
    for row in data:
        for v in row:
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < q:
                raise ValueError(f"entry {v!r} is not an integer in [0, {q})")
    return Matrix(field, data, cols=cols)


def random_matrix(rows: int, cols: int, field: PrimeField, rng: Random) -> Matrix:
    """Uniform random matrix drawn from the given seeded generator."""
    q = field.q
    return Matrix(field, [[rng.randrange(q) for _ in range(cols)] for _ in range(rows)], cols=cols)


def random_invertible(n: int, field: PrimeField, rng: Random) -> Matrix:
    """Uniform random invertible n x n matrix, by rejection."""
    while True:
        m = random_matrix(n, n, field, rng)
        if m.rank() == n:
            return m
