"""Generalized Reed-Solomon constructions and code-level building blocks.

Provides GRS generator and dual-multiplier formulas, two ways of extending
an MDS matrix to more columns (random search, and the closed-form GRS
route), puncturing, supported subcodes, and the polynomial coefficient
vectors used to read demands out of structured answers.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random
from typing import Sequence

from .gf import PrimeField
from .matrix import Matrix, ShapeError

__all__ = [
    "ExtensionError",
    "GrsCode",
    "ExtensionChoice",
    "canonical_placement",
    "grs_generator",
    "grs_dual_multipliers",
    "dual_multipliers_for",
    "placed_grs_matrix",
    "extend_mds_grs",
    "extend_mds_generic",
    "parity_to_generator",
    "puncture",
    "supported_subcode",
    "recovery_polynomials",
]

DEFAULT_EXTENSION_RETRIES = 64


class ExtensionError(RuntimeError):
    """Raised when no MDS-preserving column extension can be found."""


@dataclass(frozen=True)
class GrsCode:
    """Parameters of a [n, dim] generalized Reed-Solomon code over GF(q):
    nonzero column multipliers and distinct evaluation points."""

    field: PrimeField
    multipliers: tuple[int, ...]
    points: tuple[int, ...]
    dim: int

    def __post_init__(self):
        q = self.field.q
        mults = tuple(v % q for v in self.multipliers)
        pts = tuple(w % q for w in self.points)
        object.__setattr__(self, "multipliers", mults)
        object.__setattr__(self, "points", pts)
        n = len(pts)
        if len(mults) != n:
            raise ValueError("multipliers and points must have equal length")
        if not 1 <= self.dim <= n:
            raise ValueError(f"need 1 <= dim <= n, got dim={self.dim}, n={n}")
        if n > q:
            raise ValueError(f"cannot place {n} distinct points in GF({q})")
        if any(v == 0 for v in mults):
            raise ValueError("multipliers must be nonzero")
        if len(set(pts)) != n:
            raise ValueError("evaluation points must be distinct")

    @property
    def length(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class ExtensionChoice:
    """Extra GRS columns and a column placement for an extension to k_total
    positions.  placement[j] is the destination column of source column j;
    sources list the original columns first, then the extras."""

    extra_multipliers: tuple[int, ...]
    extra_points: tuple[int, ...]
    placement: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "extra_multipliers", tuple(self.extra_multipliers))
        object.__setattr__(self, "extra_points", tuple(self.extra_points))
        object.__setattr__(self, "placement", tuple(self.placement))
        if len(self.extra_multipliers) != len(self.extra_points):
            raise ValueError("extra multipliers and points must have equal length")
        k = len(self.placement)
        if sorted(self.placement) != list(range(k)):
            raise ValueError("placement must be a permutation of 0..k-1")

    @classmethod
    def canonical(
        cls,
        w: Sequence[int],
        k_total: int,
        extra_multipliers: Sequence[int],
        extra_points: Sequence[int],
    ) -> "ExtensionChoice":
        return cls(
            tuple(extra_multipliers),
            tuple(extra_points),
            canonical_placement(w, k_total),
        )


def canonical_placement(w: Sequence[int], k_total: int) -> tuple[int, ...]:
    """Original columns land on the sorted index set w, extras fill the
    complement in ascending order."""
    w = list(w)
    if w != sorted(set(w)) or (w and not 0 <= w[0] <= w[-1] < k_total):
        raise ValueError("w must be strictly increasing indices in [0, k_total)")
    complement = [j for j in range(k_total) if j not in set(w)]
    return tuple(w + complement)


def grs_generator(code: GrsCode) -> Matrix:
    """Generator matrix with entries multiplier_j * point_j**i."""
    q = code.field.q
    data = [
        [v * pow(w, i, q) % q for v, w in zip(code.multipliers, code.points)]
        for i in range(code.dim)
    ]
    return Matrix(code.field, data, cols=code.length)


def grs_dual_multipliers(code: GrsCode) -> tuple[int, ...]:
    """Column multipliers of the dual code on the same evaluation points:
    1 / (multiplier_j * prod_{k != j} (point_j - point_k))."""
    return dual_multipliers_for(code.field, code.multipliers, code.points)


def dual_multipliers_for(
    field: PrimeField, multipliers: Sequence[int], points: Sequence[int]
) -> tuple[int, ...]:
    """The dual-multiplier formula on raw (multipliers, points) pairs."""
    q = field.q
    pts = [w % q for w in points]
    if len(set(pts)) != len(pts):
        raise ValueError("evaluation points must be distinct")
    out = []
    for j, wj in enumerate(pts):
        prod = multipliers[j] % q
        if prod == 0:
            raise ValueError("multipliers must be nonzero")
        for k, wk in enumerate(pts):
            if k != j:
                prod = prod * (wj - wk) % q
        out.append(pow(prod, q - 2, q))
    return tuple(out)


def placed_grs_matrix(
    field: PrimeField,
    multipliers: Sequence[int],
    points: Sequence[int],
    num_rows: int,
    placement: Sequence[int],
) -> Matrix:
    """GRS-structured matrix whose source column j sits at placement[j]."""
    q = field.q
    k = len(placement)
    data = [[0] * k for _ in range(num_rows)]
    for j, (v, w) in enumerate(zip(multipliers, points)):
        dest = placement[j]
        for i in range(num_rows):
            data[i][dest] = v * pow(w, i, q) % q
    return Matrix(field, data, cols=k)


def extend_mds_grs(
    field: PrimeField,
    dual_multipliers: Sequence[int],
    points: Sequence[int],
    num_rows: int,
    k_total: int,
    choice: ExtensionChoice,
) -> Matrix:
    """Closed-form MDS extension: place the dual GRS columns and the extra
    columns from choice into a num_rows x k_total GRS-structured matrix.

    All k_total evaluation points must be distinct, which requires
    q >= k_total.
    """
    q = field.q
    base = len(points)
    if len(dual_multipliers) != base:
        raise ValueError("dual multipliers and points must have equal length")
    if not 0 <= num_rows <= base:
        raise ValueError("num_rows must lie in [0, len(points)]")
    if len(choice.extra_points) != k_total - base:
        raise ValueError(
            f"extension needs {k_total - base} extra columns, got {len(choice.extra_points)}"
        )
    if len(choice.placement) != k_total:
        raise ValueError("placement length must equal k_total")
    if k_total > q:
        raise ExtensionError(f"cannot place {k_total} distinct points in GF({q})")
    all_m = [v % q for v in dual_multipliers] + [v % q for v in choice.extra_multipliers]
    all_p = [w % q for w in points] + [w % q for w in choice.extra_points]
    if any(v == 0 for v in all_m):
        raise ValueError("multipliers must be nonzero")
    if len(set(all_p)) != k_total:
        raise ValueError("evaluation points must be distinct")
    return placed_grs_matrix(field, all_m, all_p, num_rows, choice.placement)


def extend_mds_generic(
    lambda_matrix: Matrix,
    k_total: int,
    rng: Random,
    max_retries: int = DEFAULT_EXTENSION_RETRIES,
) -> Matrix:
    """Extend an MDS matrix to k_total columns by appending random columns,
    re-checking every square subset that touches the new column.

    Each appended column gets max_retries draws; running out raises
    ExtensionError, which typically means q is too small for this shape.
    """
    from itertools import combinations

    r = lambda_matrix.rows
    d = lambda_matrix.cols
    if k_total < d:
        raise ValueError(f"k_total={k_total} smaller than current width {d}")
    if r == 0:
        return Matrix.zeros(lambda_matrix.field, 0, k_total)
    if not lambda_matrix.is_mds():
        raise ValueError("matrix to extend must be MDS")
    q = lambda_matrix.field.q
    cols = [lambda_matrix.column(j) for j in range(d)]
    from .matrix import _invertible_submatrix

    while len(cols) < k_total:
        width = len(cols)
        for attempt in range(max_retries):
            candidate = [rng.randrange(q) for _ in range(r)]
            rows_view = [[col[i] for col in cols] + [candidate[i]] for i in range(r)]
            ok = True
            for subset in combinations(range(width), r - 1):
                if not _invertible_submatrix(rows_view, subset + (width,), q):
                    ok = False
                    break
            if ok:
                cols.append(candidate)
                break
        else:
            raise ExtensionError(
                f"no MDS-preserving column found in {max_retries} tries at width "
                f"{width + 1}; GF({q}) is likely too small"
            )
    data = [[col[i] for col in cols] for i in range(r)]
    return Matrix(lambda_matrix.field, data, cols=k_total)


def parity_to_generator(h: Matrix) -> Matrix:
    """Canonical generator of the code with parity-check h (its right
    kernel).  h must have full row rank."""
    if h.rank() < h.rows:
        raise ValueError("parity-check matrix must have full row rank")
    return h.null_space()


def puncture(g: Matrix, coords: Sequence[int]) -> Matrix:
    """Restrict g to the given column coordinates (sorted, deduplicated)."""
    idx = sorted(set(coords))
    if idx and not 0 <= idx[0] <= idx[-1] < g.cols:
        raise IndexError(f"coordinates out of range for width {g.cols}")
    return g.select_columns(idx)


def supported_subcode(g: Matrix, support: Sequence[int]) -> Matrix:
    """Canonical basis of the codewords of rowspace(g) that vanish outside
    the given support set.  g must have full row rank."""
    idx = sorted(set(support))
    if idx and not 0 <= idx[0] <= idx[-1] < g.cols:
        raise IndexError(f"support out of range for width {g.cols}")
    complement = [j for j in range(g.cols) if j not in set(idx)]
    # Coefficient vectors x with x @ g zero outside the support are the
    # kernel of the complement columns, transposed.
    coeff = g.select_columns(complement).transpose().null_space()
    words = coeff @ g
    res = words.rref()
    return res.rref.select_rows(range(res.rank))


def recovery_polynomials(
    field: PrimeField, extension_points: Sequence[int], num_rows: int
) -> list[list[int]]:
    """Coefficient vectors of x**(l-1) * prod_j (x - extension_point_j) for
    l = 1..num_rows, each padded to length len(extension_points) + num_rows.

    Row l of a GRS-structured answer matrix built on these points, when
    combined with coefficient vector l, isolates demand row l.
    """
    q = field.q
    base = [1]
    for w in extension_points:
        nxt = [0] * (len(base) + 1)
        for i, cv in enumerate(base):
            nxt[i] -= cv * w
            nxt[i + 1] += cv
        base = [v % q for v in nxt]
    width = len(extension_points) + num_rows
    out = []
    for l in range(num_rows):
        vec = [0] * l + base
        vec += [0] * (width - len(vec))
        out.append(vec)
    return out
