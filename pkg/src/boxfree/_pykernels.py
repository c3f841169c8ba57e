"""Pure-Python hot kernels.

This module and the compiled ``_kernels`` extension expose the same functions
with the same results; :mod:`boxfree._backend` picks one at import time.
Row supports are plain ints (bit ``j`` = column ``j``) except inside
:func:`row_search`, which uses a column-0-is-MSB layout so that lexicographic
comparison of rows is integer comparison.
"""
from __future__ import annotations

import time
from math import comb

BACKEND = "python"


class BudgetExceeded(Exception):
    pass


def _pc(x: int) -> int:
    return bin(x).count("1")


def kset_search(zeros, start, need, k):
    """First ``need`` positions whose zero masks meet ``start`` in >= k columns.

    Depth-first over positions in increasing order, carrying the running
    intersection.  The intersection only shrinks, so a branch is dead as soon
    as it holds fewer than k columns.  Callers ask for exactly k rows in total:
    a larger row set has a smaller intersection, so it can never succeed where
    all of its k-subsets failed.
    """
    n = len(zeros)
    if _pc(start) < k:
        return None
    if need == 0:
        return []
    if need > n:
        return None
    chosen = []

    def rec(lo, inter):
        depth = len(chosen)
        if depth == need:
            return True
        for i in range(lo, n - (need - depth) + 1):
            nxt = inter & zeros[i]
            if _pc(nxt) < k:
                continue
            chosen.append(i)
            if rec(i + 1, nxt):
                return True
            chosen.pop()
        return False

    return list(chosen) if rec(0, start) else None


def surplus_violation(supports, c, max_size):
    """First nonempty subset S (|S| <= max_size) whose union has < |S| + c columns."""
    n = len(supports)
    chosen = []

    def rec(start, union):
        for i in range(start, n):
            u = union | supports[i]
            chosen.append(i)
            if _pc(u) < len(chosen) + c:
                return True
            if len(chosen) < max_size and rec(i + 1, u):
                return True
            chosen.pop()
        return False

    return list(chosen) if max_size >= 1 and rec(0, 0) else None


def max_future_zeros(rows, zmax, cap, k):
    """Largest total zero count of ``rows`` rows, each with at most ``zmax`` zeros,
    when every row with z zeros consumes comb(z, k) of ``cap``."""
    if rows <= 0:
        return 0
    if zmax < 0:
        return -1
    q = zmax
    while q > 0 and rows * comb(q, k) > cap:
        q -= 1
    if rows * comb(q, k) > cap:
        return -1
    total = rows * q
    if q < zmax:
        step = comb(q + 1, k) - comb(q, k)
        left = cap - rows * comb(q, k)
        extra = rows if step == 0 else min(rows, left // step)
        total += extra
    return total


class _RowSearch:
    """Orderly row-by-row generation of n x n matrices with no zero k x k minor.

    Rows are produced in non-decreasing weight order; rows of equal weight are
    lexicographically non-increasing; columns are lexicographically
    non-increasing.  Every row/column orbit contains such a matrix.  Columns
    that agree on all rows placed so far form contiguous groups, and inside a
    group the next row must put its ones first, which is how the column order
    is enforced incrementally.
    """

    def __init__(self, n, k, t, find_all, max_solutions, deadline, check_every=4096):
        self.n, self.k, self.t = n, k, t
        self.full = (1 << n) - 1
        self.find_all = find_all
        self.max_solutions = max_solutions
        self.deadline = deadline
        self.check_every = check_every
        self.nodes = 0
        self.solutions = []
        self.rows = []
        # stacks[s] holds zero-set intersections of s placed rows with >= k columns
        self.stacks = [[self.full]] + [[] for _ in range(k - 1)]
        self.need = [n if k == 1 else 0]
        self.cap = (k - 1) * comb(n, k)
        self.used = [0]
        self.groups = [[n]]

    # state -------------------------------------------------------------

    def fits(self, z):
        k = self.k
        for inter in self.stacks[k - 1]:
            if _pc(inter & z) >= k:
                return False
        return True

    def push(self, row, z):
        k = self.k
        marks = [len(s) for s in self.stacks]
        need = self.need[-1]
        for s in range(k - 1, 0, -1):
            dst = self.stacks[s]
            for inter in self.stacks[s - 1][: marks[s - 1]]:
                j = inter & z
                pc = _pc(j)
                if pc >= k:
                    dst.append(j)
                    if s == k - 1 and pc - (k - 1) > need:
                        need = pc - (k - 1)
        groups = []
        pos = self.n
        for g in self.groups[-1]:
            gmask = ((1 << g) - 1) << (pos - g)
            ones = _pc(row & gmask)
            if ones:
                groups.append(ones)
            if g - ones:
                groups.append(g - ones)
            pos -= g
        self.rows.append(row)
        self.need.append(need)
        self.used.append(self.used[-1] + comb(_pc(z), k))
        self.groups.append(groups)
        return marks

    def pop(self, marks):
        for s, m in enumerate(marks):
            del self.stacks[s][m:]
        self.rows.pop()
        self.need.pop()
        self.used.pop()
        self.groups.pop()

    # search ------------------------------------------------------------

    def candidates(self, w):
        """Rows of weight w respecting the column groups, in decreasing order."""
        groups = self.groups[-1]
        n = self.n
        out = []
        suffix = [0] * (len(groups) + 1)
        for i in range(len(groups) - 1, -1, -1):
            suffix[i] = suffix[i + 1] + groups[i]

        def rec(gi, pos, rem, mask):
            if gi == len(groups):
                if rem == 0:
                    out.append(mask)
                return
            g = groups[gi]
            hi = min(g, rem)
            lo = max(0, rem - suffix[gi + 1])
            for c in range(hi, lo - 1, -1):
                rec(gi + 1, pos - g, rem - c, mask | (((1 << c) - 1) << (pos - c)))

        rec(0, n, w, 0)
        return out

    def tick(self):
        self.nodes += 1
        if self.deadline is not None and self.nodes % self.check_every == 0:
            if time.monotonic() > self.deadline:
                raise BudgetExceeded

    def bound_ok(self, ones, w):
        """Can the remaining rows (weights >= w) still fit in the budget t?"""
        n, k = self.n, self.k
        rest = n - len(self.rows)
        if rest == 0:
            return ones <= self.t
        wmin = max(w, self.need[-1])
        if ones + rest * wmin > self.t:
            return False
        if k >= 2:
            zeros = max_future_zeros(rest, n - wmin, self.cap - self.used[-1], k)
            if zeros < 0 or ones + rest * n - zeros > self.t:
                return False
        return True

    def dfs(self, ones, prev_w, prev_row):
        self.tick()
        n = self.n
        r = len(self.rows)
        if r == n:
            if self.find_all and ones != self.t:
                return False
            self.solutions.append(list(self.rows))
            if not self.find_all:
                return True
            return 0 < self.max_solutions <= len(self.solutions)
        rest = n - r
        wmin = max(prev_w, self.need[-1])
        wmax = min(n, (self.t - ones) // rest)
        for w in range(wmin, wmax + 1):
            for row in self.candidates(w):
                if w == prev_w and row > prev_row:
                    continue
                z = self.full & ~row
                if not self.fits(z):
                    continue
                marks = self.push(row, z)
                stop = False
                if self.bound_ok(ones + w, w):
                    stop = self.dfs(ones + w, w, row)
                self.pop(marks)
                if stop:
                    return True
        return False


def _replay(search, prefix):
    ones, prev_w, prev_row = 0, 0, search.full
    for row in prefix:
        z = search.full & ~row
        if not search.fits(z):
            return None
        search.push(row, z)
        ones += _pc(row)
        prev_w, prev_row = _pc(row), row
    return ones, prev_w, prev_row


def row_search(n, k, t, prefix=(), find_all=False, max_solutions=0, deadline=None):
    """Search for n x n matrices with at most t ones (exactly t when ``find_all``)
    and no zero k x k minor.

    Returns ``(solutions, nodes, complete)``; rows are in the MSB-first layout.
    """
    s = _RowSearch(n, k, t, find_all, max_solutions, deadline)
    start = _replay(s, prefix)
    if start is None:
        return [], 0, True
    ones, prev_w, prev_row = start
    try:
        if s.bound_ok(ones, prev_w):
            s.dfs(ones, prev_w, prev_row)
        complete = True
    except BudgetExceeded:
        complete = False
    return s.solutions, s.nodes, complete


def row_candidates(n, k, t, prefix=()):
    """Children of ``prefix`` that survive the row checks; used to split work."""
    s = _RowSearch(n, k, t, False, 0, None)
    start = _replay(s, prefix)
    if start is None:
        return []
    ones, prev_w, prev_row = start
    r = len(prefix)
    if r == n:
        return []
    out = []
    for w in range(max(prev_w, s.need[-1]), min(n, (t - ones) // (n - r)) + 1):
        for row in s.candidates(w):
            if w == prev_w and row > prev_row:
                continue
            z = s.full & ~row
            if not s.fits(z):
                continue
            marks = s.push(row, z)
            if s.bound_ok(ones + w, w):
                out.append(row)
            s.pop(marks)
    return out
