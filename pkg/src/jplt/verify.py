"""Brute-force verification of protocol guarantees and exact rate accounting.

Recoverability asks whether the demand can be read out of an answer at
all.  Joint privacy asks the converse question from the server's seat:
for every candidate index set s of size d, the codewords of the query
that vanish outside s must look the same, namely an l-dimensional space
whose restriction to s is MDS (model I) or full rank (model II).  When
that holds, every (w, v) pair is equally consistent with the query.

Rates are exact fractions: demanded rows over downloaded rows, compared
against the benchmark l / (k - d + l).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from itertools import combinations
from random import Random
from typing import IO, Iterable, Sequence

from .matrix import EnumerationCapError, Matrix
from .codes import puncture, supported_subcode
from .protocols import Demand, Query, global_coefficients

__all__ = [
    "FAIL_WRONG_DIMENSION",
    "FAIL_NOT_FULL_RANK",
    "FAIL_NOT_MDS",
    "PrivacyReport",
    "RateSummary",
    "check_recoverability",
    "check_feasibility",
    "check_joint_privacy",
    "check_symmetry_property",
    "subset_dimension_profile",
    "profiles_match",
    "capacity",
    "pir_rate",
    "plc_rate",
    "rate_summary",
    "rate_table",
    "write_rate_csv",
    "CSV_COLUMNS",
]

DEFAULT_SUBSET_CAP = 10**6

FAIL_WRONG_DIMENSION = "wrong_dimension"
FAIL_NOT_FULL_RANK = "not_full_rank"
FAIL_NOT_MDS = "not_mds"


@dataclass
class PrivacyReport:
    """Outcome of a joint-privacy sweep over candidate index sets."""

    k: int
    d: int
    l: int
    model: str
    exhaustive: bool
    subsets_checked: int
    failures: list[tuple[tuple[int, ...], str]] = dataclass_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json_obj(self) -> dict:
        """JSON form; subsets are reported 1-based."""
        return {
            "k": self.k,
            "d": self.d,
            "l": self.l,
            "model": self.model,
            "exhaustive": self.exhaustive,
            "subsets_checked": self.subsets_checked,
            "passed": self.passed,
            "failures": [
                {"subset": [i + 1 for i in s], "reason": reason}
                for s, reason in self.failures
            ],
        }


@dataclass
class RateSummary:
    """Exact download accounting for one query."""

    k: int
    d: int
    l: int
    protocol: str
    downloaded_rows: int
    demand_rows: int
    rate: Fraction
    benchmark: Fraction

    def to_json_obj(self) -> dict:
        return {
            "k": self.k,
            "d": self.d,
            "l": self.l,
            "protocol": self.protocol,
            "downloaded_rows": self.downloaded_rows,
            "demand_rows": self.demand_rows,
            "rate": str(self.rate),
            "rate_float": float(self.rate),
            "benchmark": str(self.benchmark),
            "benchmark_float": float(self.benchmark),
        }


def check_recoverability(g: Matrix, demand: Demand) -> bool:
    """True when the spread demand matrix lies in the row space of g."""
    if demand.w and demand.w[-1] >= g.cols:
        raise ValueError("demand does not fit the query width")
    u = global_coefficients(demand.w, demand.v, g.cols)
    return g.solve_in_rowspace(u) is not None


def check_feasibility(g: Matrix, w: Sequence[int], v: Matrix) -> bool:
    """Subcode route to the same question: the spread demand must lie in
    the subcode of g supported on w.  Agrees with check_recoverability."""
    b = supported_subcode(g, w)
    u = global_coefficients(tuple(w), v, g.cols)
    return b.solve_in_rowspace(u) is not None


def _subset_ok(g: Matrix, s: tuple[int, ...], l: int, model: str) -> str | None:
    b = supported_subcode(g, s)
    if b.rows != l:
        return FAIL_WRONG_DIMENSION
    p = puncture(b, s)
    if model == "I":
        if not p.is_mds():
            return FAIL_NOT_MDS
    elif p.rank() != l:
        return FAIL_NOT_FULL_RANK
    return None


def check_joint_privacy(
    g: Matrix,
    d: int,
    l: int,
    model: str,
    cap: int = DEFAULT_SUBSET_CAP,
    sample: int | None = None,
    rng: Random | None = None,
) -> PrivacyReport:
    """Sweep candidate index sets of size d and test the subcode condition.

    Exhaustive by default; raises EnumerationCapError when C(k, d) exceeds
    cap unless a sample size is given, in which case the report is marked
    non-exhaustive.
    """
    k = g.cols
    if not 1 <= l <= d <= k:
        raise ValueError(f"need 1 <= l <= d <= k, got l={l}, d={d}, k={k}")
    if model not in ("I", "II"):
        raise ValueError(f"unknown model {model!r}")
    if sample is None:
        total = math.comb(k, d)
        if total > cap:
            raise EnumerationCapError(
                f"C({k},{d}) = {total} subsets exceed cap {cap}; pass a sample size"
            )
        subsets: Iterable[tuple[int, ...]] = combinations(range(k), d)
        exhaustive = True
        checked = total
    else:
        if rng is None:
            raise ValueError("sampling requires an rng")
        subsets = (tuple(sorted(rng.sample(range(k), d))) for _ in range(sample))
        exhaustive = False
        checked = sample
    failures = []
    for s in subsets:
        reason = _subset_ok(g, s, l, model)
        if reason is not None:
            failures.append((s, reason))
    return PrivacyReport(
        k=k, d=d, l=l, model=model, exhaustive=exhaustive,
        subsets_checked=checked, failures=failures,
    )


def check_symmetry_property(
    g: Matrix,
    trials: int | None = None,
    rng: Random | None = None,
    cap: int = DEFAULT_SUBSET_CAP,
) -> bool:
    """For an MDS g, every support set s must carry a subcode of dimension
    exactly |s| - (cols - rows), itself MDS on s when nonempty.

    Exhaustive over all support sizes >= cols - rows by default; pass
    trials to sample instead.
    """
    if not g.is_mds():
        raise ValueError("symmetry check expects an MDS matrix")
    n, kdim = g.cols, g.rows
    deficit = n - kdim

    def ok(s: tuple[int, ...]) -> bool:
        b = supported_subcode(g, s)
        if b.rows != len(s) - deficit:
            return False
        return b.rows == 0 or puncture(b, s).is_mds()

    if trials is None:
        total = sum(math.comb(n, size) for size in range(deficit, n + 1))
        if total > cap:
            raise EnumerationCapError(f"{total} subsets exceed cap {cap}; pass trials")
        for size in range(deficit, n + 1):
            for s in combinations(range(n), size):
                if not ok(s):
                    return False
        return True
    if rng is None:
        raise ValueError("sampling requires an rng")
    for _ in range(trials):
        size = rng.randrange(deficit, n + 1)
        s = tuple(sorted(rng.sample(range(n), size)))
        if not ok(s):
            return False
    return True


def subset_dimension_profile(g: Matrix, d: int, cap: int = DEFAULT_SUBSET_CAP) -> tuple[int, ...]:
    """Dimension of the supported subcode for every d-subset, in
    lexicographic subset order.  A stress-mode observable: queries for
    different demands must produce identical profiles."""
    k = g.cols
    total = math.comb(k, d)
    if total > cap:
        raise EnumerationCapError(f"C({k},{d}) = {total} subsets exceed cap {cap}")
    return tuple(supported_subcode(g, s).rows for s in combinations(range(k), d))


def profiles_match(gs: Sequence[Matrix], d: int, cap: int = DEFAULT_SUBSET_CAP) -> bool:
    """True when all matrices share one subset dimension profile."""
    profiles = {subset_dimension_profile(g, d, cap) for g in gs}
    return len(profiles) <= 1


def _check_params(k: int, d: int, l: int) -> None:
    if not 1 <= l <= d <= k:
        raise ValueError(f"need 1 <= l <= d <= k, got l={l}, d={d}, k={k}")


def capacity(k: int, d: int, l: int) -> Fraction:
    """Best achievable download rate for the joint-privacy setting."""
    _check_params(k, d, l)
    return Fraction(l, k - d + l)


def pir_rate(k: int, d: int, l: int) -> Fraction:
    """Rate of the download-everything baseline: l demanded of k rows."""
    _check_params(k, d, l)
    return Fraction(l, k)


def plc_rate(k: int, d: int, l: int) -> Fraction:
    """Per-combination baseline rate.  Running one single-row query per
    combination downloads l * (k - d + 1) rows in the all-nonzero case,
    one demanded row per k - d + 1 downloaded."""
    _check_params(k, d, l)
    return Fraction(1, k - d + 1)


def rate_summary(query: Query) -> RateSummary:
    """Account one query against the benchmark.  Needs the client-side
    d and l, which never travel on the wire."""
    if query.d is None or query.l is None:
        raise ValueError("query lacks client-side demand parameters")
    return RateSummary(
        k=query.k,
        d=query.d,
        l=query.l,
        protocol=query.protocol,
        downloaded_rows=query.g.rows,
        demand_rows=query.l,
        rate=Fraction(query.l, query.g.rows),
        benchmark=capacity(query.k, query.d, query.l),
    )


CSV_COLUMNS = (
    "k",
    "d",
    "l",
    "jplt_rate",
    "jplt_rate_float",
    "pir_rate",
    "pir_rate_float",
    "plc_rate",
    "plc_rate_float",
    "capacity",
    "capacity_float",
)


def rate_table(k: int, ratio, d_values: Iterable[int]) -> list[dict]:
    """Rate comparison rows for a sweep of d with l = round(ratio * d).

    Rounding is to the nearest integer (ties to even), clamped to [1, d].
    ratio may be a Fraction, a string like "0.6", or an int.
    """
    ratio = Fraction(str(ratio)) if isinstance(ratio, float) else Fraction(ratio)
    if not 0 < ratio <= 1:
        raise ValueError(f"ratio must lie in (0, 1], got {ratio}")
    rows = []
    for d in d_values:
        if not 1 <= d <= k:
            raise ValueError(f"d={d} outside [1, {k}]")
        l = min(max(round(ratio * d), 1), d)
        jplt = capacity(k, d, l)
        pir = pir_rate(k, d, l)
        plc = plc_rate(k, d, l)
        rows.append(
            {
                "k": k,
                "d": d,
                "l": l,
                "jplt_rate": str(jplt),
                "jplt_rate_float": float(jplt),
                "pir_rate": str(pir),
                "pir_rate_float": float(pir),
                "plc_rate": str(plc),
                "plc_rate_float": float(plc),
                "capacity": str(jplt),
                "capacity_float": float(jplt),
            }
        )
    return rows


def write_rate_csv(rows: Iterable[dict], fp: IO[str]) -> None:
    """Emit the fixed-column comparison table."""
    writer = csv.DictWriter(fp, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
