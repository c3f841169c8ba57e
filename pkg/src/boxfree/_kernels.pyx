# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels in :mod:`boxfree._pykernels`.

Same functions, same arguments, same results.  Masks wider than 64 bits are
split into little-endian uint64 words.
"""
import time

from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memset

BACKEND = "cython"
MAX_ROW_SEARCH_N = 40


class BudgetExceeded(Exception):
    pass


cdef extern from *:
    int popcount64 "__builtin_popcountll"(unsigned long long) nogil


cdef inline int pc_words(const uint64_t* a, int w) noexcept nogil:
    cdef int i, c = 0
    for i in range(w):
        c += popcount64(a[i])
    return c


cdef int n_words_for(object x):
    cdef int bl = (<object>x).bit_length()
    return max(1, (bl + 63) // 64)


cdef void fill_words(uint64_t* dst, object x, int w):
    cdef int i
    cdef object m = (1 << 64) - 1
    for i in range(w):
        dst[i] = <uint64_t>((x >> (64 * i)) & m)


# ---------------------------------------------------------------- zero minor

cdef bint kset_rec(const uint64_t* zeros, int n, int w, int k, int need,
                   int lo, int depth, uint64_t* inter, int* chosen) noexcept nogil:
    cdef int i, j
    cdef uint64_t* nxt = inter + w
    if depth == need:
        return True
    for i in range(lo, n - (need - depth) + 1):
        for j in range(w):
            nxt[j] = inter[j] & zeros[i * w + j]
        if pc_words(nxt, w) < k:
            continue
        chosen[depth] = i
        if kset_rec(zeros, n, w, k, need, i + 1, depth + 1, nxt, chosen):
            return True
    return False


def kset_search(zeros, start, int need, int k):
    """First ``need`` positions whose zero masks meet ``start`` in >= k columns."""
    cdef int n = len(zeros)
    cdef int w, i
    cdef uint64_t* zbuf
    cdef uint64_t* ibuf
    cdef int* chosen
    cdef bint found
    if bin(start).count("1") < k:
        return None
    if need == 0:
        return []
    if need > n:
        return None
    w = n_words_for(start)
    zbuf = <uint64_t*>malloc(n * w * sizeof(uint64_t))
    ibuf = <uint64_t*>malloc((need + 1) * w * sizeof(uint64_t))
    chosen = <int*>malloc(need * sizeof(int))
    try:
        for i in range(n):
            fill_words(zbuf + i * w, zeros[i] & start, w)
        fill_words(ibuf, start, w)
        with nogil:
            found = kset_rec(zbuf, n, w, k, need, 0, 0, ibuf, chosen)
        if not found:
            return None
        return [chosen[i] for i in range(need)]
    finally:
        free(zbuf)
        free(ibuf)
        free(chosen)


# ------------------------------------------------------------------- surplus

cdef bint surplus_rec(const uint64_t* sup, int n, int w, int c, int max_size,
                      int lo, int depth, uint64_t* union_, int* chosen) noexcept nogil:
    cdef int i, j
    cdef uint64_t* nxt = union_ + w
    for i in range(lo, n):
        for j in range(w):
            nxt[j] = union_[j] | sup[i * w + j]
        chosen[depth] = i
        if pc_words(nxt, w) < depth + 1 + c:
            chosen[max_size] = depth + 1
            return True
        if depth + 1 < max_size and surplus_rec(sup, n, w, c, max_size, i + 1, depth + 1, nxt, chosen):
            return True
    return False


def surplus_violation(supports, int c, int max_size):
    """First nonempty subset S (|S| <= max_size) whose union has < |S| + c columns."""
    cdef int n = len(supports)
    cdef int w = 1, i
    cdef uint64_t* sbuf
    cdef uint64_t* ubuf
    cdef int* chosen
    cdef bint found
    if max_size < 1 or n == 0:
        return None
    max_size = min(max_size, n)
    for s in supports:
        w = max(w, n_words_for(s))
    sbuf = <uint64_t*>malloc(n * w * sizeof(uint64_t))
    ubuf = <uint64_t*>malloc((max_size + 1) * w * sizeof(uint64_t))
    chosen = <int*>malloc((max_size + 1) * sizeof(int))
    try:
        for i in range(n):
            fill_words(sbuf + i * w, supports[i], w)
        memset(ubuf, 0, w * sizeof(uint64_t))
        with nogil:
            found = surplus_rec(sbuf, n, w, c, max_size, 0, 0, ubuf, chosen)
        if not found:
            return None
        return [chosen[i] for i in range(chosen[max_size])]
    finally:
        free(sbuf)
        free(ubuf)
        free(chosen)


# ---------------------------------------------------------------- row search

cdef int64_t CB[65][65]


cdef void init_comb():
    cdef int a, b
    for a in range(65):
        for b in range(65):
            CB[a][b] = 0
        CB[a][0] = 1
        for b in range(1, a + 1):
            CB[a][b] = CB[a - 1][b - 1] + CB[a - 1][b]


init_comb()


cdef int64_t max_future_zeros_c(int rows, int zmax, int64_t cap, int k) noexcept nogil:
    cdef int q
    cdef int64_t total, step, left, extra
    if rows <= 0:
        return 0
    if zmax < 0:
        return -1
    q = zmax
    while q > 0 and rows * CB[q][k] > cap:
        q -= 1
    if rows * CB[q][k] > cap:
        return -1
    total = <int64_t>rows * q
    if q < zmax:
        step = CB[q + 1][k] - CB[q][k]
        left = cap - rows * CB[q][k]
        if step == 0:
            extra = rows
        else:
            extra = left // step
            if extra > rows:
                extra = rows
        total += extra
    return total


def max_future_zeros(int rows, int zmax, cap, int k):
    return max_future_zeros_c(rows, zmax, cap, k)


cdef class _RowSearch:
    cdef int n, k, t
    cdef uint64_t full
    cdef bint find_all
    cdef long max_solutions
    cdef object deadline
    cdef public long long nodes
    cdef public list solutions
    cdef uint64_t* st[64]
    cdef int st_len[64]
    cdef int st_cap[64]
    cdef uint64_t rows[64]
    cdef int need[65]
    cdef int64_t used[65]
    cdef int64_t cap
    cdef int gsz[65][64]
    cdef int gcnt[65]
    cdef int depth

    def __cinit__(self, int n, int k, int t, bint find_all, long max_solutions, deadline):
        cdef int s
        self.n, self.k, self.t = n, k, t
        self.full = (<uint64_t>1 << n) - 1 if n < 64 else <uint64_t>0xFFFFFFFFFFFFFFFF
        self.find_all = find_all
        self.max_solutions = max_solutions
        self.deadline = deadline
        self.nodes = 0
        self.solutions = []
        for s in range(k):
            self.st_cap[s] = 64
            self.st_len[s] = 0
            self.st[s] = <uint64_t*>malloc(64 * sizeof(uint64_t))
        self.st[0][0] = self.full
        self.st_len[0] = 1
        self.need[0] = n if k == 1 else 0
        self.used[0] = 0
        self.cap = (k - 1) * CB[n][k]
        self.gsz[0][0] = n
        self.gcnt[0] = 1
        self.depth = 0

    def __dealloc__(self):
        cdef int s
        for s in range(self.k):
            free(self.st[s])

    cdef inline bint fits(self, uint64_t z) noexcept nogil:
        cdef int i
        cdef int k = self.k
        cdef uint64_t* a = self.st[k - 1]
        for i in range(self.st_len[k - 1]):
            if popcount64(a[i] & z) >= k:
                return False
        return True

    cdef void append(self, int s, uint64_t v) noexcept nogil:
        if self.st_len[s] == self.st_cap[s]:
            self.st_cap[s] *= 2
            self.st[s] = <uint64_t*>realloc(self.st[s], self.st_cap[s] * sizeof(uint64_t))
        self.st[s][self.st_len[s]] = v
        self.st_len[s] += 1

    cdef void push(self, uint64_t row, uint64_t z, int* marks) noexcept nogil:
        cdef int k = self.k
        cdef int r = self.depth
        cdef int s, i, g, gi, pos, ones, pc, nd
        cdef uint64_t j, gmask
        for s in range(k):
            marks[s] = self.st_len[s]
        nd = self.need[r]
        for s in range(k - 1, 0, -1):
            for i in range(marks[s - 1]):
                j = self.st[s - 1][i] & z
                pc = popcount64(j)
                if pc >= k:
                    self.append(s, j)
                    if s == k - 1 and pc - (k - 1) > nd:
                        nd = pc - (k - 1)
        self.gcnt[r + 1] = 0
        pos = self.n
        for gi in range(self.gcnt[r]):
            g = self.gsz[r][gi]
            gmask = ((<uint64_t>1 << g) - 1) << (pos - g) if g < 64 else self.full
            ones = popcount64(row & gmask)
            if ones:
                self.gsz[r + 1][self.gcnt[r + 1]] = ones
                self.gcnt[r + 1] += 1
            if g - ones:
                self.gsz[r + 1][self.gcnt[r + 1]] = g - ones
                self.gcnt[r + 1] += 1
            pos -= g
        self.rows[r] = row
        self.need[r + 1] = nd
        self.used[r + 1] = self.used[r] + CB[popcount64(z)][k]
        self.depth = r + 1

    cdef void pop(self, int* marks) noexcept nogil:
        cdef int s
        for s in range(self.k):
            self.st_len[s] = marks[s]
        self.depth -= 1

    cdef bint bound_ok(self, int ones, int w) noexcept nogil:
        cdef int rest = self.n - self.depth
        cdef int wmin
        cdef int64_t zeros
        if rest == 0:
            return ones <= self.t
        wmin = w if w > self.need[self.depth] else self.need[self.depth]
        if ones + rest * wmin > self.t:
            return False
        if self.k >= 2:
            zeros = max_future_zeros_c(rest, self.n - wmin, self.cap - self.used[self.depth], self.k)
            if zeros < 0 or ones + <int64_t>rest * self.n - zeros > self.t:
                return False
        return True

    cdef int tick(self) except -1:
        self.nodes += 1
        if self.deadline is not None and (self.nodes & 4095) == 0:
            if time.monotonic() > self.deadline:
                raise BudgetExceeded
        return 0

    cdef int try_row(self, uint64_t row, int w, int ones, int prev_w, uint64_t prev_row) except -1:
        cdef int marks[64]
        cdef uint64_t z
        cdef int stop = 0
        if w == prev_w and row > prev_row:
            return 0
        z = self.full & ~row
        if not self.fits(z):
            return 0
        self.push(row, z, marks)
        try:
            if self.bound_ok(ones + w, w):
                stop = self.dfs(ones + w, w, row)
        finally:
            self.pop(marks)
        return stop

    cdef int gen(self, int gi, int pos, int rem, int suffix, uint64_t mask,
                 int w, int ones, int prev_w, uint64_t prev_row) except -1:
        cdef int r = self.depth
        cdef int g, c, hi, lo
        if gi == self.gcnt[r]:
            if rem == 0:
                return self.try_row(mask, w, ones, prev_w, prev_row)
            return 0
        g = self.gsz[r][gi]
        hi = g if g < rem else rem
        lo = rem - (suffix - g)
        if lo < 0:
            lo = 0
        c = hi
        while c >= lo:
            if self.gen(gi + 1, pos - g, rem - c, suffix - g,
                        mask | (((<uint64_t>1 << c) - 1) << (pos - c)),
                        w, ones, prev_w, prev_row):
                return 1
            c -= 1
        return 0

    cdef int dfs(self, int ones, int prev_w, uint64_t prev_row) except -1:
        cdef int r = self.depth
        cdef int rest, w, wmin, wmax
        self.tick()
        if r == self.n:
            if self.find_all and ones != self.t:
                return 0
            self.solutions.append([self.rows[i] for i in range(self.n)])
            if not self.find_all:
                return 1
            return 1 if 0 < self.max_solutions <= len(self.solutions) else 0
        rest = self.n - r
        wmin = prev_w if prev_w > self.need[r] else self.need[r]
        wmax = (self.t - ones) // rest
        if wmax > self.n:
            wmax = self.n
        for w in range(wmin, wmax + 1):
            if self.gen(0, self.n, w, self.n, 0, w, ones, prev_w, prev_row):
                return 1
        return 0

    def replay(self, prefix):
        cdef int marks[64]
        cdef uint64_t row, z
        ones, prev_w, prev_row = 0, 0, self.full
        for row in prefix:
            z = self.full & ~row
            if not self.fits(z):
                return None
            self.push(row, z, marks)
            ones += popcount64(row)
            prev_w, prev_row = popcount64(row), row
        return ones, prev_w, prev_row

    def run(self, int ones, int prev_w, uint64_t prev_row):
        if self.bound_ok(ones, prev_w):
            self.dfs(ones, prev_w, prev_row)

    def children(self, int ones, int prev_w, uint64_t prev_row):
        saved = self.solutions
        out = []
        cdef int r = self.depth
        cdef int w, wmin, wmax
        cdef int marks[64]
        cdef uint64_t z
        if r == self.n:
            return out
        wmin = max(prev_w, self.need[r])
        wmax = min(self.n, (self.t - ones) // (self.n - r))
        for w in range(wmin, wmax + 1):
            for row in _candidates(self.n, [self.gsz[r][i] for i in range(self.gcnt[r])], w):
                if w == prev_w and row > prev_row:
                    continue
                z = self.full & ~(<uint64_t>row)
                if not self.fits(z):
                    continue
                self.push(row, z, marks)
                if self.bound_ok(ones + w, w):
                    out.append(row)
                self.pop(marks)
        self.solutions = saved
        return out


def _candidates(n, groups, w):
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
        for c in range(min(g, rem), max(0, rem - suffix[gi + 1]) - 1, -1):
            rec(gi + 1, pos - g, rem - c, mask | (((1 << c) - 1) << (pos - c)))

    rec(0, n, w, 0)
    return out


def row_search(int n, int k, int t, prefix=(), bint find_all=False, long max_solutions=0, deadline=None):
    """Compiled twin of :func:`boxfree._pykernels.row_search` (n <= 40)."""
    if n > MAX_ROW_SEARCH_N:
        raise ValueError(f"compiled row search supports n <= {MAX_ROW_SEARCH_N}")
    s = _RowSearch(n, k, t, find_all, max_solutions, deadline)
    start = s.replay(prefix)
    if start is None:
        return [], 0, True
    try:
        s.run(*start)
        complete = True
    except BudgetExceeded:
        complete = False
    return [list(x) for x in s.solutions], s.nodes, complete


def row_candidates(int n, int k, int t, prefix=()):
    if n > MAX_ROW_SEARCH_N:
        raise ValueError(f"compiled row search supports n <= {MAX_ROW_SEARCH_N}")
    s = _RowSearch(n, k, t, False, 0, None)
    start = s.replay(prefix)
    if start is None:
        return []
    return s.children(*start)
