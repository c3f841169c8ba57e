"""Exact values of alpha(k, n): the least number of ones in an n x n 0/1
matrix with no all-zero k x k minor.

The main strategy is an orderly row-by-row search (see
:mod:`boxfree._pykernels`) run for t = lower bound, lower bound + 1, ...;
the first t that admits a matrix is alpha, and every smaller t has been
refuted by an exhausted search.  A second, independent strategy branches on
the cells of a zero-minor witness and is used as a cross-check at small n.
"""
from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ._backend import row_module
from .canonical import CanonicalForm, canonical_form
from .constructions import ConstructionError, ConstructionId, Family, build
from .matrix import BinaryMatrix
from .verify import find_zero_minor, has_zero_minor

# Below this n the process pool costs more than it saves.
PARALLEL_MIN_N = 10
SPLIT_DEPTH_MAX = 3


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    runtime_ms: float = 0.0
    depth_limit_used: int = 0
    symmetry_prunes: int = 0
    # largest t shown infeasible by an exhausted search (-1: none needed)
    refuted_up_to: int = -1

    def to_dict(self) -> dict:
        return {
            "nodes_expanded": self.nodes_expanded,
            "runtime_ms": round(self.runtime_ms, 3),
            "depth_limit_used": self.depth_limit_used,
            "symmetry_prunes": self.symmetry_prunes,
            "refuted_up_to": self.refuted_up_to,
        }


@dataclass
class AlphaResult:
    k: int
    n: int
    value: int | None
    certificate: BinaryMatrix | None
    stats: SearchStats
    lower: int
    upper: int
    strategy: str = "rows"

    @property
    def exact(self) -> bool:
        return self.value is not None

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "value": self.value,
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "strategy": self.strategy,
            "stats": self.stats.to_dict(),
        }


@dataclass
class Enumeration:
    k: int
    n: int
    value: int
    forms: list[CanonicalForm]
    complete: bool
    raw_count: int
    stats: SearchStats = field(default_factory=SearchStats)


class SolverError(RuntimeError):
    pass


def _check_kn(k: int, n: int) -> None:
    if not (isinstance(k, int) and isinstance(n, int)) or not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")


# ------------------------------------------------------------------ bounds


def lower_bound(k: int, n: int, partial: BinaryMatrix | None = None) -> int:
    """ones(partial) plus a greedy packing of cell-disjoint zero k x k minors.

    Each packed witness still needs at least one more 1, and the witnesses
    share no cell, so the sum never exceeds the cheapest valid completion.
    """
    _check_kn(k, n)
    a = BinaryMatrix.zeros(n) if partial is None else partial
    if a.shape != (n, n):
        raise ValueError(f"partial must be {n}x{n}")
    base = a.ones_count
    rows = list(a.row_supports)
    packed = 0
    while True:
        w = find_zero_minor(BinaryMatrix(n, n, tuple(rows)), k)
        if w is None:
            return base + packed
        packed += 1
        cmask = sum(1 << j for j in w.cols)
        for i in w.rows:
            rows[i] |= cmask


def known_upper(k: int, n: int) -> tuple[int, BinaryMatrix]:
    """Best verified explicit matrix from the construction families (or all ones)."""
    _check_kn(k, n)
    best = (n * n, BinaryMatrix(n, n, ((1 << n) - 1,) * n))
    cids = []
    if 2 * k > n:
        cids.append(ConstructionId(Family.DIAGONAL, k, n=n))
    if n == 2 * k:
        cids.append(ConstructionId(Family.EVEN_MIDDLE, k))
    if n == 2 * k + 1:
        cids += [ConstructionId(Family.BAND_4K5, k), ConstructionId(Family.SEVEN_HALVES, k),
                 ConstructionId(Family.TEN_THIRDS, k)]
        cids += [ConstructionId(Family.GENERAL, k, a=a) for a in range(1, 7)]
    for cid in cids:
        try:
            bm = build(cid)
        except ConstructionError:
            continue
        m = bm.matrix
        if m.ones_count < best[0] and not has_zero_minor(m, k):
            best = (m.ones_count, m)
    return best


# ----------------------------------------------------------- row strategy


def _from_msb(n: int, rows) -> BinaryMatrix:
    """Row search output (column 0 in the top bit) to a BinaryMatrix."""
    out = []
    for r in rows:
        out.append(sum(1 << j for j in range(n) if (r >> (n - 1 - j)) & 1))
    return BinaryMatrix(n, n, tuple(out))


def _split(n: int, k: int, t: int, want: int) -> list[tuple]:
    kern = row_module(n)
    level = [()]
    for _ in range(SPLIT_DEPTH_MAX):
        if len(level) >= want:
            break
        nxt = []
        for p in level:
            if len(p) == n:
                nxt.append(p)
                continue
            nxt += [p + (c,) for c in kern.row_candidates(n, k, t, p)]
        level = nxt
    return level


def _run_prefix(args):
    n, k, t, prefix, find_all, deadline = args
    return row_module(n).row_search(n, k, t, prefix, find_all, 0, deadline)


def _threads(threads: int | None) -> int:
    if threads is None:
        threads = os.cpu_count() or 1
    return max(1, threads)


def _row_search(n, k, t, find_all, deadline, threads):
    """(solutions, nodes, complete); results do not depend on ``threads``."""
    if threads <= 1 or n < PARALLEL_MIN_N:
        return row_module(n).row_search(n, k, t, (), find_all, 0, deadline)
    prefixes = _split(n, k, t, 4 * threads)
    tasks = [(n, k, t, p, find_all, deadline) for p in prefixes]
    sols, nodes, complete = [], 0, True
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_run_prefix, a) for a in tasks]
        for i, fut in enumerate(futures):
            s, nd, done = fut.result()
            nodes += nd
            complete &= done
            sols += s
            if s and not find_all:
                # earlier prefixes are exhausted; take the first hit in order
                for f in futures[i + 1 :]:
                    f.cancel()
                break
    return sols, nodes, complete


def solve_alpha(k: int, n: int, budget: float | None = 300.0, threads: int | None = 1,
                strategy: str = "rows") -> AlphaResult:
    """Exact alpha(k, n) with a certificate, or bounds if the budget runs out.

    ``budget`` is in seconds (None for no limit).  The value does not depend
    on ``threads``.
    """
    _check_kn(k, n)
    if strategy == "witness":
        return solve_alpha_witness(k, n, budget)
    if strategy != "rows":
        raise ValueError(f"unknown strategy {strategy!r}")
    start = time.monotonic()
    deadline = None if budget is None else start + budget
    stats = SearchStats()
    upper, _ = known_upper(k, n)
    t = lower_bound(k, n)
    stats.refuted_up_to = t - 1
    threads = _threads(threads)
    while t <= upper:
        stats.depth_limit_used = t
        sols, nodes, complete = _row_search(n, k, t, False, deadline, threads)
        stats.nodes_expanded += nodes
        if sols:
            cert = _from_msb(n, sols[0])
            if cert.ones_count != t or has_zero_minor(cert, k):
                raise SolverError(f"certificate for alpha({k},{n}) failed re-verification")
            stats.runtime_ms = (time.monotonic() - start) * 1000
            return AlphaResult(k, n, t, cert, stats, t, t)
        if not complete:
            stats.runtime_ms = (time.monotonic() - start) * 1000
            return AlphaResult(k, n, None, None, stats, t, upper)
        stats.refuted_up_to = t
        t += 1
    raise SolverError(f"search refuted the verified upper bound {upper} for alpha({k},{n})")


def enumerate_optima(k: int, n: int, value: int, budget: float | None = 300.0,
                     threads: int | None = 1) -> Enumeration:
    """All row/column-permutation classes of valid matrices with ``value`` ones."""
    _check_kn(k, n)
    start = time.monotonic()
    deadline = None if budget is None else start + budget
    sols, nodes, complete = _row_search(n, k, value, True, deadline, _threads(threads))
    forms = set()
    for rows in sols:
        m = _from_msb(n, rows)
        if m.ones_count != value or has_zero_minor(m, k):
            raise SolverError("enumerated matrix failed re-verification")
        forms.add(canonical_form(m))
    stats = SearchStats(nodes_expanded=nodes, runtime_ms=(time.monotonic() - start) * 1000,
                        depth_limit_used=value, symmetry_prunes=len(sols) - len(forms))
    return Enumeration(k, n, value, sorted(forms), complete, len(sols), stats)


# ------------------------------------------------------- witness strategy


class _WitnessSearch:
    def __init__(self, k, n, t, deadline):
        self.k, self.n, self.t = k, n, t
        self.deadline = deadline
        self.nodes = 0
        self.prunes = 0
        self.timed_out = False

    def dfs(self, rows: list[int], ones: int, depth: int):
        self.nodes += 1
        if self.deadline is not None and self.nodes % 256 == 0 and time.monotonic() > self.deadline:
            self.timed_out = True
            return None
        a = BinaryMatrix(self.n, self.n, tuple(rows))
        w = find_zero_minor(a, self.k)
        if w is None:
            return a
        if ones >= self.t or lower_bound(self.k, self.n, a) > self.t:
            return None
        cells = [(i, j) for i in w.rows for j in w.cols]
        if depth == 0:
            # the group is transitive on cells
            cells, pruned = cells[:1], len(cells) - 1
        elif depth == 1:
            # orbit representatives under the stabilizer of the first cell
            i0, j0 = self.first
            kinds = {}
            for i, j in cells:
                kinds.setdefault((i == i0, j == j0), (i, j))
            pruned = len(cells) - len(kinds)
            cells = sorted(kinds.values())
        else:
            pruned = 0
        self.prunes += pruned
        for i, j in cells:
            if (rows[i] >> j) & 1:
                continue
            if depth == 0:
                self.first = (i, j)
            rows[i] |= 1 << j
            got = self.dfs(rows, ones + 1, depth + 1)
            rows[i] &= ~(1 << j)
            if got is not None or self.timed_out:
                return got
        return None


def solve_alpha_witness(k: int, n: int, budget: float | None = 300.0) -> AlphaResult:
    """Cross-check solver: branch over the k*k cells of a zero-minor witness."""
    _check_kn(k, n)
    start = time.monotonic()
    deadline = None if budget is None else start + budget
    stats = SearchStats()
    upper, _ = known_upper(k, n)
    t = lower_bound(k, n)
    stats.refuted_up_to = t - 1
    while t <= upper:
        stats.depth_limit_used = t
        s = _WitnessSearch(k, n, t, deadline)
        cert = s.dfs([0] * n, 0, 0)
        stats.nodes_expanded += s.nodes
        stats.symmetry_prunes += s.prunes
        if s.timed_out:
            stats.runtime_ms = (time.monotonic() - start) * 1000
            return AlphaResult(k, n, None, None, stats, t, upper, "witness")
        if cert is not None:
            if has_zero_minor(cert, k):
                raise SolverError("witness-branching certificate failed re-verification")
            stats.runtime_ms = (time.monotonic() - start) * 1000
            return AlphaResult(k, n, cert.ones_count, cert, stats, t, t, "witness")
        stats.refuted_up_to = t
        t += 1
    raise SolverError(f"search refuted the verified upper bound {upper} for alpha({k},{n})")


# -------------------------------------------------------------- table


# Filled cells of the published table: (k, n) -> value, for n <= 11.
TABLE: dict[tuple[int, int], int] = {}
for _n in range(1, 12):
    TABLE[(1, _n)] = _n * _n
    for _k in range(_n // 2 + 1, _n + 1):
        TABLE[(_k, _n)] = 2 * (_n - _k) + 1
TABLE.update({(2, 4): 7, (2, 5): 13, (3, 6): 10, (3, 7): 16, (4, 8): 13, (4, 9): 20,
              (5, 10): 16, (5, 11): 23})
del _n, _k

FAST_MAX_N = 7


@dataclass
class TableCell:
    k: int
    n: int
    expected: int
    result: AlphaResult

    @property
    def status(self) -> str:
        if not self.result.exact:
            return "BUDGET"
        return "MATCH" if self.result.value == self.expected else "MISMATCH"


def table_cells(max_n: int = FAST_MAX_N, min_n: int = 1) -> list[tuple[int, int]]:
    return sorted(((k, n) for (k, n) in TABLE if min_n <= n <= max_n), key=lambda c: (c[1], c[0]))


def verify_table(max_n: int = FAST_MAX_N, min_n: int = 1, budget: float | None = 300.0,
                 threads: int | None = 1) -> list[TableCell]:
    """Solve every filled table cell with min_n <= n <= max_n and compare."""
    out = []
    for k, n in table_cells(max_n, min_n):
        out.append(TableCell(k, n, TABLE[(k, n)], solve_alpha(k, n, budget, threads)))
    return out
