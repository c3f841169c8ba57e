"""Zero-minor detection and row-surplus checks.

A k x k all-zero minor exists iff some k rows have at least k common zero
columns, i.e. iff some k rows are covered by at most ``n_cols - k`` columns.

Two exact existence oracles are used:

* a depth-first search over row subsets that carries the running
  intersection of zero sets (good on dense or small inputs), and
* a profile dynamic program computing ``min |N(S)|`` over m-row subsets,
  run over a low-bandwidth row order of each connected component (good on
  the large sparse banded matrices of the constructions).

The witness returned does not depend on which oracle ran: it is the
lexicographically least k-row set (by row index), found by greedy
self-reduction, together with the k smallest of its common zero columns.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from ._backend import kernels
from .matrix import BinaryMatrix, DimensionError, bits, popcount

BRUTE_FORCE_LIMIT = 10**7
SURPLUS_ROW_LIMIT = 24
# Subset counts below this go straight to the DFS oracle.
DFS_DIRECT_LIMIT = 200_000
# Largest DP frontier (open columns) we are willing to enumerate.
DP_MAX_WIDTH = 22

_INF = np.iinfo(np.int64).max // 4


class SizeError(ValueError):
    """An exhaustive routine was asked to run past its guard."""


@dataclass(frozen=True)
class MinorWitness:
    rows: tuple[int, ...]
    cols: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.rows)

    def validate(self, a: BinaryMatrix) -> bool:
        if len(self.rows) != len(self.cols) or len(set(self.rows)) != len(self.rows):
            return False
        cmask = 0
        for j in self.cols:
            cmask |= 1 << j
        if popcount(cmask) != len(self.cols):
            return False
        return all(a.row_supports[i] & cmask == 0 for i in self.rows)

    def to_dict(self) -> dict:
        return {"rows": list(self.rows), "cols": list(self.cols)}


def _check_k(a: BinaryMatrix, k: int) -> None:
    if not isinstance(k, int) or not 1 <= k <= min(a.n_rows, a.n_cols):
        raise DimensionError(f"k={k} must lie in [1, {min(a.n_rows, a.n_cols)}]")


def _witness(a: BinaryMatrix, rows, k: int) -> MinorWitness:
    zeros = a.full_mask
    for i in rows:
        zeros &= ~a.row_supports[i]
    return MinorWitness(tuple(sorted(rows)), tuple(bits(zeros)[:k]))


# ----------------------------------------------------------------- profile DP


def _components(supports: list[int]) -> list[list[int]]:
    """Connected components of rows, two rows being adjacent when they share a column."""
    parent = list(range(len(supports)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    owner: dict[int, int] = {}
    for i, s in enumerate(supports):
        for j in bits(s):
            if j in owner:
                ri, rj = find(i), find(owner[j])
                if ri != rj:
                    parent[ri] = rj
            else:
                owner[j] = i
    groups: dict[int, list[int]] = {}
    for i in range(len(supports)):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _frontier_width(supports: list[int], order: list[int]) -> int:
    first: dict[int, int] = {}
    last: dict[int, int] = {}
    for pos, i in enumerate(order):
        for j in bits(supports[i]):
            first.setdefault(j, pos)
            last[j] = pos
    delta = [0] * (len(order) + 1)
    for j, f in first.items():
        if last[j] > f:
            delta[f] += 1
            delta[last[j]] -= 1
    width = cur = 0
    for d in delta:
        cur += d
        width = max(width, cur)
    return width


def _row_orders(supports: list[int]) -> list[list[int]]:
    """Candidate row orders for the DP; the narrowest frontier wins."""
    n = len(supports)
    natural = list(range(n))
    orders = [natural]
    if n <= 2:
        return orders
    lows = [(s & -s).bit_length() if s else 0 for s in supports]
    orders.append(sorted(natural, key=lambda i: (lows[i], i)))
    means = [sum(bits(s)) / max(1, popcount(s)) for s in supports]
    orders.append(sorted(natural, key=lambda i: (means[i], i)))
    try:
        from scipy.sparse import csr_matrix
        from scipy.sparse.csgraph import reverse_cuthill_mckee

        cells = [(i, j) for i, s in enumerate(supports) for j in bits(s)]
        if cells:
            r, c = zip(*cells)
            inc = csr_matrix((np.ones(len(cells), dtype=np.int8), (r, c)))
            adj = (inc @ inc.T).tocsr()
            orders.append([int(i) for i in reverse_cuthill_mckee(adj, symmetric_mode=True)])
    except ImportError:  # pragma: no cover - scipy is a declared dependency
        pass
    return orders


def _best_order(supports: list[int]) -> tuple[list[int], int]:
    best = None
    for order in _row_orders(supports):
        w = _frontier_width(supports, order)
        if best is None or w < best[1]:
            best = (order, w)
    return best


def _component_profile(supports: list[int], order: list[int], kmax: int) -> np.ndarray:
    """f[m] = min over m-row subsets of the number of covered columns."""
    last: dict[int, int] = {}
    for pos, i in enumerate(order):
        for j in bits(supports[i]):
            last[j] = pos
    closing = [0] * len(order)
    for j, pos in last.items():
        closing[pos] |= 1 << j
    start = np.full(kmax + 1, _INF, dtype=np.int64)
    start[0] = 0
    states = {0: start}
    for pos, i in enumerate(order):
        sup = supports[i]
        close = closing[pos]
        nxt: dict[int, np.ndarray] = {}
        for mask, vec in states.items():
            keep = mask & ~close
            v = vec + popcount(mask & close) if mask & close else vec
            old = nxt.get(keep)
            nxt[keep] = v if old is None else np.minimum(old, v)
            u = mask | sup
            took = np.empty_like(vec)
            took[0] = _INF
            took[1:] = vec[:-1] + popcount(u & close)
            keep = u & ~close
            old = nxt.get(keep)
            nxt[keep] = took if old is None else np.minimum(old, took)
        states = nxt
    out = states[0]
    out[out >= _INF // 2] = _INF
    return out


def _minplus(f: np.ndarray, g: np.ndarray, kmax: int) -> np.ndarray:
    out = np.full(kmax + 1, _INF, dtype=np.int64)
    for m in range(kmax + 1):
        if f[m] >= _INF:
            continue
        top = kmax - m
        np.minimum(out[m:], f[m] + g[: top + 1], out=out[m:])
    out[out >= _INF // 2] = _INF
    return out


def neighbourhood_profile(supports: list[int], kmax: int) -> list[int] | None:
    """Exact ``min |N(S)|`` for every subset size 0..kmax, or None when some
    component is too wide for the DP.  Unreachable sizes map to -1."""
    total = np.full(kmax + 1, _INF, dtype=np.int64)
    total[0] = 0
    for comp in _components(supports):
        sub = [supports[i] for i in comp]
        order, width = _best_order(sub)
        if width > DP_MAX_WIDTH:
            return None
        prof = _component_profile(sub, order, min(kmax, len(sub)))
        total = _minplus(total, _pad(prof, kmax), kmax)
    return [int(x) if x < _INF else -1 for x in total]


def _pad(vec: np.ndarray, kmax: int) -> np.ndarray:
    if len(vec) == kmax + 1:
        return vec
    out = np.full(kmax + 1, _INF, dtype=np.int64)
    out[: len(vec)] = vec
    return out


# ------------------------------------------------------------------ oracles


def _exists(pool: list[int], base: int, need: int, n_cols: int, k: int, method: str) -> bool:
    """Can ``need`` rows of ``pool`` be added to a set already covering
    ``base`` while keeping at most ``n_cols - k`` columns covered?"""
    room = n_cols - k - popcount(base)
    if room < 0:
        return False
    if need == 0:
        return True
    if need > len(pool):
        return False
    reduced = [s & ~base for s in pool]
    if method == "auto":
        method = "dfs" if comb(len(pool), need) <= DFS_DIRECT_LIMIT else "dp"
    if method == "dp":
        prof = neighbourhood_profile(reduced, need)
        if prof is not None:
            return 0 <= prof[need] <= room
    order = sorted(range(len(reduced)), key=lambda i: (popcount(reduced[i]), i))
    full = (1 << n_cols) - 1
    zeros = [full & ~reduced[i] for i in order]
    return kernels.kset_search(zeros, full & ~base, need, k) is not None


def find_zero_minor(a: BinaryMatrix, k: int, method: str = "auto") -> MinorWitness | None:
    """Witness of an all-zero k x k minor of ``a``, or None.

    ``method`` selects the existence oracle (``"dfs"``, ``"dp"`` or ``"auto"``).
    """
    _check_k(a, k)
    if method not in ("auto", "dfs", "dp"):
        raise ValueError(f"unknown method {method!r}")
    sup = list(a.row_supports)
    if not _exists(sup, 0, k, a.n_cols, k, method):
        return None
    chosen: list[int] = []
    base = 0
    for i in range(a.n_rows):
        if len(chosen) == k:
            break
        need = k - len(chosen) - 1
        trial = base | sup[i]
        if _exists(sup[i + 1 :], trial, need, a.n_cols, k, method):
            chosen.append(i)
            base = trial
    return _witness(a, chosen, k)


def brute_force_zero_minor(a: BinaryMatrix, k: int) -> MinorWitness | None:
    """Test oracle: try every k-row subset in lexicographic order."""
    _check_k(a, k)
    if comb(a.n_rows, k) > BRUTE_FORCE_LIMIT:
        raise SizeError(f"C({a.n_rows},{k}) exceeds {BRUTE_FORCE_LIMIT}")
    full = a.full_mask
    for rows in itertools.combinations(range(a.n_rows), k):
        zeros = full
        for i in rows:
            zeros &= ~a.row_supports[i]
        if popcount(zeros) >= k:
            return _witness(a, rows, k)
    return None


def has_zero_minor(a: BinaryMatrix, k: int, method: str = "auto") -> bool:
    _check_k(a, k)
    return _exists(list(a.row_supports), 0, k, a.n_cols, k, method)


def surplus_violation(a: BinaryMatrix, c: int, max_size: int | None = None) -> tuple[int, ...] | None:
    """First row subset S (by DFS order) with fewer than |S| + c covered columns.

    Only subsets with at most ``max_size`` rows are examined; the default is
    ``n_cols - c``, since any larger subset fails for counting reasons alone.
    """
    if c < 0:
        raise ValueError("c must be nonnegative")
    if a.n_rows > SURPLUS_ROW_LIMIT:
        raise SizeError(f"surplus check limited to {SURPLUS_ROW_LIMIT} rows, got {a.n_rows}")
    if max_size is None:
        max_size = a.n_cols - c
    if max_size < 1:
        return None
    found = kernels.surplus_violation(list(a.row_supports), c, min(max_size, a.n_rows))
    return None if found is None else tuple(found)


def check_row_surplus(a: BinaryMatrix, c: int, max_size: int | None = None) -> bool:
    """True iff every nonempty row subset S with |S| <= max_size covers at
    least |S| + c columns (``max_size`` defaults to ``n_cols - c``)."""
    return surplus_violation(a, c, max_size) is None
