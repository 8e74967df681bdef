"""Client and server sides of the private linear transformation protocols.

A client holds a demand: an index set w of d dataset rows and an l x d
coefficient matrix v, and wants the l combinations v @ x[w] without the
server learning anything about (w, v) jointly.  The server holds the
dataset x and answers a query g with g @ x.

Two demand models are supported:
  model "I":  v is MDS (every l x l minor invertible),
  model "II": v merely has full row rank.

Both protocols download k - d + l rows.  Model I hides the demand inside
an MDS code built by extending the kernel of v; model II scrambles the
demand coefficients together with an MDS generator through a random
invertible matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random
from typing import Sequence

from .gf import FieldMismatchError, PrimeField
from .matrix import (
    Matrix,
    ShapeError,
    matrix_from_lists,
    random_invertible,
    vstack,
)
from .codes import (
    DEFAULT_EXTENSION_RETRIES,
    ExtensionChoice,
    GrsCode,
    canonical_placement,
    dual_multipliers_for,
    extend_mds_generic,
    grs_generator,
    parity_to_generator,
    placed_grs_matrix,
    recovery_polynomials,
)

__all__ = [
    "ProtocolError",
    "Demand",
    "Dataset",
    "Query",
    "RecoveryPlan",
    "Answer",
    "global_coefficients",
    "jplt1_query",
    "jplt1_grs_query",
    "jplt2_query",
    "server_answer",
    "recover",
    "pir_baseline_query",
    "plc_baseline_queries",
]

MODELS = ("I", "II")
PLAN_VARIANTS = ("row_reduce", "grs_poly", "unscramble", "passthrough")


class ProtocolError(ValueError):
    """Raised when protocol preconditions are violated."""


@dataclass(frozen=True)
class Demand:
    """What the client wants: rows w of the dataset, combined by v.

    w is a strictly increasing tuple of 0-based row indices, v is an
    l x d matrix of full row rank; model "I" additionally requires v MDS.
    """

    w: tuple[int, ...]
    v: Matrix
    model: str

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(self.w))
        if self.model not in MODELS:
            raise ProtocolError(f"unknown model {self.model!r}")
        d = len(self.w)
        if list(self.w) != sorted(set(self.w)) or (d and self.w[0] < 0):
            raise ProtocolError("w must be strictly increasing non-negative indices")
        if self.v.cols != d:
            raise ProtocolError(f"v has {self.v.cols} columns for {d} indices")
        if not 1 <= self.v.rows <= d:
            raise ProtocolError(f"need 1 <= l <= d, got l={self.v.rows}, d={d}")
        if self.v.rank() != self.v.rows:
            raise ProtocolError("v must have full row rank")
        if self.model == "I" and not self.v.is_mds():
            raise ProtocolError('model "I" requires an MDS coefficient matrix')

    @property
    def d(self) -> int:
        return len(self.w)

    @property
    def l(self) -> int:
        return self.v.rows

    @property
    def field(self) -> PrimeField:
        return self.v.field


@dataclass(frozen=True)
class Dataset:
    """Server-side store: k rows of n symbols each, over one field."""

    x: Matrix

    @property
    def k(self) -> int:
        return self.x.rows

    @property
    def n(self) -> int:
        return self.x.cols

    @property
    def field(self) -> PrimeField:
        return self.x.field


@dataclass(frozen=True)
class Query:
    """What the server sees: the coefficient matrix g it must apply.

    d and l are carried for client-side rate accounting only; the wire
    form of a query is a function of (g, k, model) alone.
    """

    g: Matrix
    k: int
    model: str
    protocol: str
    d: int | None = None
    l: int | None = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise ProtocolError(f"unknown model {self.model!r}")
        if self.g.cols != self.k:
            raise ProtocolError(f"g has {self.g.cols} columns for k={self.k}")
        if self.g.rows == 0 or self.g.rank() != self.g.rows:
            raise ProtocolError("query matrix must have full row rank")

    @property
    def downloaded_rows(self) -> int:
        return self.g.rows


@dataclass(frozen=True)
class Answer:
    """Server response: y = g @ x."""

    y: Matrix


@dataclass(frozen=True)
class RecoveryPlan:
    """Client-side secret needed to turn an answer back into the demand.

    Never transmitted.  variant selects the decode rule:
      row_reduce:  z = c @ y                  (c solved against the query)
      grs_poly:    z = c @ y                  (c from recovery polynomials)
      unscramble:  z = (r_inv @ y)[:l]
      passthrough: z = v @ y[w]               (identity-query baseline)
    """

    variant: str
    field: PrimeField
    l: int
    w: tuple[int, ...] | None = None
    v: Matrix | None = None
    coefficients: Matrix | None = None
    r_inv: Matrix | None = None

    def __post_init__(self):
        if self.variant not in PLAN_VARIANTS:
            raise ProtocolError(f"unknown plan variant {self.variant!r}")
        if self.l < 1:
            raise ProtocolError("l must be positive")
        if self.w is not None:
            object.__setattr__(self, "w", tuple(self.w))
        if self.variant in ("row_reduce", "grs_poly"):
            if self.coefficients is None or self.coefficients.rows != self.l:
                raise ProtocolError("plan needs an l-row coefficient matrix")
        elif self.variant == "unscramble":
            if self.r_inv is None or self.r_inv.rows != self.r_inv.cols:
                raise ProtocolError("plan needs a square unscrambling matrix")
        else:
            if self.w is None or self.v is None or self.v.cols != len(self.w):
                raise ProtocolError("passthrough plan needs matching w and v")

    def to_json_obj(self) -> dict:
        """JSON form for local storage; indices are 1-based there."""
        obj: dict = {"version": 1, "variant": self.variant, "q": self.field.q, "l": self.l}
        if self.w is not None:
            obj["w"] = [i + 1 for i in self.w]
        if self.v is not None:
            obj["v"] = self.v.to_lists()
        if self.coefficients is not None:
            obj["c"] = self.coefficients.to_lists()
        if self.r_inv is not None:
            obj["r_inv"] = self.r_inv.to_lists()
        return obj

    @classmethod
    def from_json_obj(cls, obj: dict) -> "RecoveryPlan":
        if not isinstance(obj, dict) or obj.get("version") != 1:
            raise ValueError("plan file must be a version-1 object")
        field = PrimeField(obj["q"])
        w = None
        if "w" in obj:
            raw = obj["w"]
            if not isinstance(raw, list) or any(not isinstance(i, int) or i < 1 for i in raw):
                raise ValueError("w must be a list of 1-based indices")
            w = tuple(i - 1 for i in raw)
        def mat(key):
            return matrix_from_lists(field, obj[key]) if key in obj else None
        return cls(
            variant=obj.get("variant"),
            field=field,
            l=obj.get("l"),
            w=w,
            v=mat("v"),
            coefficients=mat("c"),
            r_inv=mat("r_inv"),
        )


def _check_fits(w: Sequence[int], k: int) -> None:
    if len(w) > k or (w and w[-1] >= k):
        raise ProtocolError(f"demand indices do not fit a dataset of k={k} rows")


def global_coefficients(w: Sequence[int], v: Matrix, k: int) -> Matrix:
    """Spread the l x d demand matrix onto k columns: column w[j] of the
    result is column j of v, all other columns are zero."""
    _check_fits(tuple(w), k)
    data = [[0] * k for _ in range(v.rows)]
    for j, dest in enumerate(w):
        for i in range(v.rows):
            data[i][dest] = v[i, j]
    return Matrix(v.field, data, cols=k)


def _scatter_columns(m: Matrix, placement: Sequence[int], k: int) -> Matrix:
    data = [[0] * k for _ in range(m.rows)]
    for j in range(m.cols):
        dest = placement[j]
        for i in range(m.rows):
            data[i][dest] = m[i, j]
    return Matrix(m.field, data, cols=k)


def jplt1_query(
    demand: Demand,
    k: int,
    rng: Random,
    max_retries: int = DEFAULT_EXTENSION_RETRIES,
) -> tuple[Query, RecoveryPlan]:
    """Model I query via randomized MDS extension of the demand kernel.

    The kernel of v (itself MDS because v is) is extended to an MDS
    parity-check on k columns whose demand columns sit at w; the query is
    the canonical generator of that code.  Downloads k - d + l rows.
    """
    if demand.model != "I":
        raise ProtocolError('jplt1_query needs a model "I" demand')
    _check_fits(demand.w, k)
    lam = demand.v.null_space()
    if lam.rows and not lam.is_mds():
        raise ProtocolError("demand kernel failed the MDS sanity gate")
    ext = extend_mds_generic(lam, k, rng, max_retries)
    placement = canonical_placement(demand.w, k)
    h = _scatter_columns(ext, placement, k)
    g = parity_to_generator(h)
    u = global_coefficients(demand.w, demand.v, k)
    c = g.solve_in_rowspace(u)
    if c is None:
        raise ProtocolError("internal error: demand not in query row space")
    query = Query(g=g, k=k, model="I", protocol="jplt1", d=demand.d, l=demand.l)
    plan = RecoveryPlan(
        variant="row_reduce", field=demand.field, l=demand.l, w=demand.w, coefficients=c
    )
    return query, plan


def jplt1_grs_query(
    w: Sequence[int],
    grs: GrsCode,
    k: int,
    rng: Random | None = None,
    choice: ExtensionChoice | None = None,
) -> tuple[Query, RecoveryPlan]:
    """Model I query for a GRS-structured demand, fully closed form.

    The demand matrix is the generator of grs; the parity-check extension
    and the final query are GRS matrices on k distinct evaluation points,
    so construction never fails when q >= k.  Recovery multiplies the
    answer by polynomial coefficient vectors instead of solving.
    """
    w = tuple(w)
    d, l = grs.length, grs.dim
    if len(w) != d:
        raise ProtocolError(f"w has {len(w)} indices for a length-{d} demand")
    _check_fits(w, k)
    if list(w) != sorted(set(w)):
        raise ProtocolError("w must be strictly increasing")
    field = grs.field
    q = field.q
    if k > q:
        raise ProtocolError(f"GF({q}) too small for {k} distinct evaluation points")
    lam = dual_multipliers_for(field, grs.multipliers, grs.points)
    if choice is None:
        if rng is None:
            raise ProtocolError("need an rng when no extension choice is given")
        taken = set(grs.points)
        available = [p for p in range(q) if p not in taken]
        extra_points = rng.sample(available, k - d)
        extra_multipliers = [1 + rng.randrange(q - 1) for _ in range(k - d)]
        choice = ExtensionChoice.canonical(w, k, extra_multipliers, extra_points)
    if len(choice.extra_points) != k - d or len(choice.placement) != k:
        raise ProtocolError(f"extension choice does not fit d={d}, k={k}")
    all_multipliers = list(lam) + [v % q for v in choice.extra_multipliers]
    all_points = list(grs.points) + [p % q for p in choice.extra_points]
    # dual_multipliers_for rejects repeated points and zero multipliers.
    alphas = dual_multipliers_for(field, all_multipliers, all_points)
    g = placed_grs_matrix(field, alphas, all_points, k - d + l, choice.placement)
    c = Matrix(field, recovery_polynomials(field, choice.extra_points, l))
    query = Query(g=g, k=k, model="I", protocol="jplt1-grs", d=d, l=l)
    plan = RecoveryPlan(variant="grs_poly", field=field, l=l, w=w, coefficients=c)
    return query, plan


def jplt2_query(
    demand: Demand,
    k: int,
    rng: Random,
    mds_matrix: Matrix | None = None,
    scramble: Matrix | None = None,
) -> tuple[Query, RecoveryPlan]:
    """Model II query: stack the spread demand on an MDS generator and
    scramble with a random invertible matrix.

    mds_matrix and scramble override the random draws (both are client
    secrets; injecting them reproduces a query bit for bit).
    """
    if demand.model != "II":
        raise ProtocolError('jplt2_query needs a model "II" demand')
    _check_fits(demand.w, k)
    field = demand.field
    q = field.q
    d, l = demand.d, demand.l
    u = global_coefficients(demand.w, demand.v, k)
    if k - d == 0:
        m = Matrix.zeros(field, 0, k)
    elif mds_matrix is not None:
        if mds_matrix.field != field:
            raise FieldMismatchError("mds_matrix field differs from demand field")
        if mds_matrix.shape != (k - d, k):
            raise ProtocolError(f"mds_matrix must be {(k - d, k)}, got {mds_matrix.shape}")
        if not mds_matrix.is_mds():
            raise ProtocolError("mds_matrix is not MDS")
        m = mds_matrix
    else:
        if k > q:
            raise ProtocolError(f"GF({q}) too small for {k} distinct evaluation points")
        points = rng.sample(range(q), k)
        multipliers = [1 + rng.randrange(q - 1) for _ in range(k)]
        m = grs_generator(GrsCode(field, tuple(multipliers), tuple(points), k - d))
    ghat = vstack(u, m)
    size = k - d + l
    if scramble is not None:
        if scramble.field != field:
            raise FieldMismatchError("scramble field differs from demand field")
        if scramble.shape != (size, size):
            raise ProtocolError(f"scramble must be {(size, size)}, got {scramble.shape}")
        r = scramble
    else:
        r = random_invertible(size, field, rng)
    r_inv = r.invert()
    g = r @ ghat
    query = Query(g=g, k=k, model="II", protocol="jplt2", d=d, l=l)
    plan = RecoveryPlan(variant="unscramble", field=field, l=l, w=demand.w, r_inv=r_inv)
    return query, plan


def server_answer(query: Query, dataset: Dataset) -> Answer:
    """Apply the query to the dataset.  The server touches nothing but g."""
    if query.g.field != dataset.field:
        raise FieldMismatchError("query and dataset use different fields")
    if query.k != dataset.k or query.g.cols != dataset.k:
        raise ShapeError(f"query expects k={query.k} rows, dataset has {dataset.k}")
    return Answer(y=query.g @ dataset.x)


def recover(answer: Answer, plan: RecoveryPlan) -> Matrix:
    """Turn a server answer into the l demanded rows."""
    y = answer.y
    if y.field != plan.field:
        raise FieldMismatchError("answer and plan use different fields")
    if plan.variant in ("row_reduce", "grs_poly"):
        c = plan.coefficients
        if c.cols != y.rows:
            raise ShapeError(f"plan expects {c.cols} answer rows, got {y.rows}")
        return c @ y
    if plan.variant == "unscramble":
        r_inv = plan.r_inv
        if r_inv.cols != y.rows:
            raise ShapeError(f"plan expects {r_inv.cols} answer rows, got {y.rows}")
        return (r_inv @ y).select_rows(range(plan.l))
    # passthrough
    if plan.w and plan.w[-1] >= y.rows:
        raise ShapeError("plan indices exceed answer height")
    return plan.v @ y.select_rows(plan.w)


def pir_baseline_query(demand: Demand, k: int) -> tuple[Query, RecoveryPlan]:
    """Download-everything baseline: g is the k x k identity."""
    _check_fits(demand.w, k)
    g = Matrix.identity(demand.field, k)
    query = Query(g=g, k=k, model=demand.model, protocol="pir", d=demand.d, l=demand.l)
    plan = RecoveryPlan(
        variant="passthrough", field=demand.field, l=demand.l, w=demand.w, v=demand.v
    )
    return query, plan


def plc_baseline_queries(
    demand: Demand, k: int, rng: Random
) -> list[tuple[Query, RecoveryPlan]]:
    """One-combination-at-a-time baseline: each demand row runs as its own
    single-row query over its nonzero support, costing k - d_row + 1 rows.

    A single all-nonzero row is GRS-parametrizable (the entries are the
    multipliers), so each sub-query uses the closed-form construction.
    """
    _check_fits(demand.w, k)
    field = demand.field
    q = field.q
    out = []
    for i in range(demand.l):
        row = demand.v.row(i)
        support = tuple(demand.w[j] for j in range(demand.d) if row[j])
        entries = tuple(v for v in row if v)
        points = tuple(rng.sample(range(q), len(entries)))
        code = GrsCode(field, entries, points, 1)
        out.append(jplt1_grs_query(support, code, k, rng=rng))
    return out
