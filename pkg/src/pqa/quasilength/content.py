"""Normalized quasilengths over a grid of exponent tuples, and a heuristic verdict."""
from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..geometry import DEFAULT_BUDGET, Budget
from .module import NotFinite, SequenceSpec, build_quotient_module, factor_length_bound
from .search import exact_quasilength, verify_certificate

CONSISTENT = "consistent-with-Q-sequence"
INCONSISTENT = "inconsistent"
INCONCLUSIVE = "inconclusive"

VERDICT_RULE = (
    "consistent: every grid point exact with normalized value 1; "
    "inconsistent: on the diagonal t=(s,...,s) the normalized upper bound is below 1 - 1/s "
    "at the largest diagonal point and at every diagonal point after the first one where it holds; "
    "otherwise inconclusive. Heuristic evidence only."
)


@dataclass(frozen=True)
class GridPoint:
    t: tuple
    lower: int
    upper: int
    exact: bool
    finite: bool
    length: Optional[int]  # F_p-length of R/I_t when finite
    certificate_length: int
    certified: bool
    method: str
    note: str = ""

    @property
    def weight(self):
        return math.prod(self.t)

    @property
    def normalized_lower(self) -> Fraction:
        return Fraction(self.lower, self.weight)

    @property
    def normalized_upper(self) -> Fraction:
        return Fraction(self.upper, self.weight)

    @property
    def normalized(self) -> str:
        lo, hi = self.normalized_lower, self.normalized_upper
        return str(lo) if self.exact else f"[{lo}, {hi}]"


@dataclass(frozen=True)
class ContentEstimate:
    points: tuple
    verdict: str
    min_parameter: int
    rule: str = VERDICT_RULE


def expand_grid(grid, d) -> tuple:
    """An integer s means {1..s}^d; otherwise an explicit list of t-tuples."""
    if isinstance(grid, int):
        if grid < 1:
            raise ValueError("grid size must be at least 1")
        pts = itertools.product(range(1, grid + 1), repeat=d)
    else:
        pts = [tuple(int(x) for x in ([t] if isinstance(t, int) else t)) for t in grid]
    pts = sorted(set(tuple(p) for p in pts))
    if not pts:
        raise ValueError("the grid is empty")
    for p in pts:
        if len(p) != d:
            raise ValueError(f"grid point {p} does not have {d} entries")
        if min(p) < 1:
            raise ValueError(f"grid point {p} has an entry below 1")
    return tuple(pts)


def thread_count() -> int:
    raw = os.environ.get("PQA_THREADS", "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(f"PQA_THREADS must be an integer, got {raw!r}") from None
    return min(4, os.cpu_count() or 1)


def evaluate_point(R, seq: SequenceSpec, t, budget: Budget = DEFAULT_BUDGET) -> GridPoint:
    s = seq.with_t(t)
    weight = math.prod(t)
    module = build_quotient_module(R, s)
    if isinstance(module, NotFinite):
        # the staircase chain w^a, a < t, is valid without a finite model
        return GridPoint(tuple(t), 1, weight, False, False, None, weight, False,
                         "staircase bound (quotient not finite)", module.reason)
    f = factor_length_bound(R, s, module)
    res = exact_quasilength(module, f, budget)
    ok = verify_certificate(module, res.certificate)
    return GridPoint(tuple(t), res.lower, res.upper, res.exact, True, module.length,
                     res.certificate.length, ok, res.method)


def content_estimate(R, seq: SequenceSpec, grid, budget: Budget = DEFAULT_BUDGET,
                     threads: Optional[int] = None) -> ContentEstimate:
    pts = expand_grid(grid, seq.d)
    n = threads if threads is not None else thread_count()
    if n <= 1 or len(pts) == 1:
        results = [evaluate_point(R, seq, t, budget) for t in pts]
    else:
        with ThreadPoolExecutor(max_workers=min(n, len(pts))) as pool:
            results = list(pool.map(lambda t: evaluate_point(R, seq, t, budget), pts))
    return ContentEstimate(tuple(results), verdict(results), min(min(p.t) for p in results))


def verdict(points) -> str:
    if all(p.exact and p.normalized_upper == 1 for p in points):
        return CONSISTENT
    diag = sorted((p for p in points if len(set(p.t)) == 1), key=lambda p: p.t[0])
    if diag:
        below = [p.normalized_upper < 1 - Fraction(1, p.t[0]) for p in diag]
        if below[-1]:
            first = below.index(True)
            if all(below[first:]):
                return INCONSISTENT
    return INCONCLUSIVE
