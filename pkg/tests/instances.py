"""Seeded random problem instances shared by protocol and acceptance tests.

The randomized greedy column extension degrades sharply once the code
length approaches the field size (near n = q the surviving-column count
can hit zero, with no backtracking).  generic_feasible keeps randomized
suites inside the regime where 64 retries per column succeed with
overwhelming probability; outside it the closed-form GRS construction is
used instead, which only needs q >= k.
"""

import math
from random import Random

from jplt import (
    Dataset,
    Demand,
    GrsCode,
    Matrix,
    PrimeField,
    grs_generator,
    jplt1_grs_query,
    jplt1_query,
    jplt2_query,
    random_matrix,
)

FIELDS = {q: PrimeField(q) for q in (11, 13, 101)}


def generic_feasible(q: int, k: int, d: int, l: int) -> bool:
    r = d - l
    if r == 0:
        return True
    return k <= q // 2 and math.comb(k - 1, r - 1) <= q


def random_full_rank(rng: Random, field: PrimeField, rows: int, cols: int) -> Matrix:
    while True:
        m = random_matrix(rows, cols, field, rng)
        if m.rank() == rows:
            return m


def random_grs_demand(rng: Random, field: PrimeField, k: int, d: int, l: int):
    q = field.q
    points = tuple(rng.sample(range(q), d))
    multipliers = tuple(1 + rng.randrange(q - 1) for _ in range(d))
    code = GrsCode(field, multipliers, points, l)
    w = tuple(sorted(rng.sample(range(k), d)))
    return Demand(w=w, v=grs_generator(code), model="I"), code


def build_random_instance(
    rng: Random,
    q_choices=(11, 13, 101),
    k_max: int = 12,
    d_max: int | None = None,
):
    """One random demand plus its query and plan; returns
    (demand, k, query, plan, path_tag)."""
    q = rng.choice(list(q_choices))
    field = FIELDS[q]
    k = rng.randrange(1, min(k_max, q) + 1)
    d = rng.randrange(1, k + 1)
    if d_max is not None:
        d = min(d, d_max)
    l = rng.randrange(1, d + 1)
    if rng.random() < 0.5:
        demand, code = random_grs_demand(rng, field, k, d, l)
        if generic_feasible(q, k, d, l) and rng.random() < 0.5:
            query, plan = jplt1_query(demand, k, rng)
            return demand, k, query, plan, "jplt1"
        query, plan = jplt1_grs_query(demand.w, code, k, rng=rng)
        return demand, k, query, plan, "jplt1-grs"
    v = random_full_rank(rng, field, l, d)
    w = tuple(sorted(rng.sample(range(k), d)))
    demand = Demand(w=w, v=v, model="II")
    query, plan = jplt2_query(demand, k, rng)
    return demand, k, query, plan, "jplt2"


def random_dataset(rng: Random, field: PrimeField, k: int, n: int = 3) -> Dataset:
    return Dataset(x=random_matrix(k, n, field, rng))
