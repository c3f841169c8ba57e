"""Point sets in the N x N x N grid that meet every axis-parallel box.

A box is given by two distinct values on each axis; its 8 corners are the
points using one chosen value per axis.  A set of marks hits the box when it
contains at least one corner.  Points are encoded as ``x + N*y + N*N*z``.

Two marks sets are equivalent under G = S_N^3 x| S_3: independent
permutations of the values on each axis followed by a permutation of the
axes.  Rotations and reflections of the cube are elements of this group.
"""
from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .verify import SizeError

Point = tuple[int, int, int]

# Exact 3D search and orbit computations enumerate masks of one N x N layer.
MAX_LAYER_N = 4


class BudgetExceeded3D(Exception):
    pass


def _check_point(n: int, p) -> Point:
    if len(p) != 3 or not all(isinstance(c, (int, np.integer)) and 0 <= c < n for c in p):
        raise ValueError(f"point {p!r} outside the {n}x{n}x{n} grid")
    return (int(p[0]), int(p[1]), int(p[2]))


@dataclass(frozen=True)
class PointSet3:
    N: int
    marks: frozenset

    def __init__(self, N: int, marks=()):
        if not isinstance(N, int) or N < 1:
            raise ValueError(f"grid size must be a positive integer, got {N!r}")
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "marks", frozenset(_check_point(N, p) for p in marks))

    def __len__(self) -> int:
        return len(self.marks)

    def codes(self) -> list[int]:
        n = self.N
        return sorted(x + n * y + n * n * z for x, y, z in self.marks)

    @classmethod
    def from_codes(cls, n: int, codes) -> "PointSet3":
        return cls(n, [(c % n, (c // n) % n, c // (n * n)) for c in codes])

    def sorted_points(self) -> list[Point]:
        return sorted(self.marks)

    def to_json(self) -> list[list[int]]:
        return [list(p) for p in self.sorted_points()]


@dataclass(frozen=True)
class BoxWitness:
    xs: tuple[int, int]
    ys: tuple[int, int]
    zs: tuple[int, int]

    def __post_init__(self):
        for pair in (self.xs, self.ys, self.zs):
            if not pair[0] < pair[1]:
                raise ValueError(f"box sides must be strictly increasing, got {pair}")

    def corners(self) -> list[Point]:
        return [(x, y, z) for x in self.xs for y in self.ys for z in self.zs]

    def to_dict(self) -> dict:
        return {"x": list(self.xs), "y": list(self.ys), "z": list(self.zs)}


def boxes(n: int):
    """All boxes in lexicographic order of (x-pair, y-pair, z-pair)."""
    pairs = list(itertools.combinations(range(n), 2))
    for xs in pairs:
        for ys in pairs:
            for zs in pairs:
                yield BoxWitness(xs, ys, zs)


def find_unhit_box(s: PointSet3) -> BoxWitness | None:
    """Lexicographically least box with no marked corner, or None."""
    marks = s.marks
    for b in boxes(s.N):
        if not any(c in marks for c in b.corners()):
            return b
    return None


def hits_all_boxes(s: PointSet3) -> bool:
    return find_unhit_box(s) is None


# --------------------------------------------------------------- 2D grids


def rectangles(n: int):
    pairs = list(itertools.combinations(range(n), 2))
    return [(xs, ys) for xs in pairs for ys in pairs]


def find_unhit_rectangle(n: int, marks2d) -> tuple | None:
    marks = set(marks2d)
    for xs, ys in rectangles(n):
        if not any((x, y) in marks for x in xs for y in ys):
            return xs, ys
    return None


def hits_all_rectangles(n: int, marks2d) -> bool:
    return find_unhit_rectangle(n, marks2d) is None


@lru_cache(maxsize=None)
def solve_min_marks_2d_certificate(n: int) -> tuple[int, frozenset]:
    """Minimum rectangle-hitting set of the n x n grid, by integer programming."""
    from scipy.optimize import Bounds, LinearConstraint, milp

    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be a positive integer")
    rects = rectangles(n)
    if not rects:
        return 0, frozenset()
    a = np.zeros((len(rects), n * n))
    for r, (xs, ys) in enumerate(rects):
        for x in xs:
            for y in ys:
                a[r, x * n + y] = 1
    res = milp(
        c=np.ones(n * n),
        constraints=LinearConstraint(a, lb=np.ones(len(rects)), ub=np.inf),
        integrality=np.ones(n * n),
        bounds=Bounds(0, 1),
    )
    if not res.success:
        raise RuntimeError(f"integer program failed: {res.message}")
    chosen = frozenset((i // n, i % n) for i, v in enumerate(res.x) if v > 0.5)
    if not hits_all_rectangles(n, chosen):
        raise RuntimeError("integer program returned a set missing a rectangle")
    return len(chosen), chosen


def solve_min_marks_2d(n: int) -> int:
    """Fewest marks meeting every rectangle of the n x n grid."""
    return solve_min_marks_2d_certificate(n)[0]


# ------------------------------------------------------------ side diagrams


def side_diagram(s: PointSet3, axis: int, layer_i: int, layer_j: int) -> frozenset:
    """Marks in layers ``layer_i`` and ``layer_j`` orthogonal to ``axis``,
    projected onto the remaining two coordinates (kept in order)."""
    if axis not in (0, 1, 2):
        raise ValueError("axis must be 0, 1 or 2")
    if layer_i == layer_j:
        raise ValueError("side diagram needs two different layers")
    for v in (layer_i, layer_j):
        if not 0 <= v < s.N:
            raise ValueError(f"layer {v} outside [0, {s.N})")
    keep = [a for a in range(3) if a != axis]
    return frozenset((p[keep[0]], p[keep[1]]) for p in s.marks if p[axis] in (layer_i, layer_j))


def side_diagrams_ok(s: PointSet3) -> bool:
    """Every pair of parallel layers, on all three axes, gives a
    rectangle-hitting side diagram."""
    for axis in range(3):
        for i, j in itertools.combinations(range(s.N), 2):
            if not hits_all_rectangles(s.N, side_diagram(s, axis, i, j)):
                return False
    return True


# ---------------------------------------------------------------- symmetry


@dataclass(frozen=True)
class GridSymmetry:
    """(x, y, z) -> permute axes by ``sigma`` after relabelling each axis.

    The image of point p has coordinate ``sigma[a]`` equal to ``perms[a][p[a]]``.
    """

    perms: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    sigma: tuple[int, int, int] = (0, 1, 2)

    def __post_init__(self):
        n = len(self.perms[0])
        for p in self.perms:
            if sorted(p) != list(range(n)):
                raise ValueError(f"{p} is not a permutation of range({n})")
        if sorted(self.sigma) != [0, 1, 2]:
            raise ValueError(f"{self.sigma} is not a permutation of the axes")

    @property
    def N(self) -> int:
        return len(self.perms[0])

    @classmethod
    def identity(cls, n: int) -> "GridSymmetry":
        ident = tuple(range(n))
        return cls((ident, ident, ident))

    @classmethod
    def random(cls, n: int, rng: random.Random) -> "GridSymmetry":
        perms = []
        for _ in range(3):
            p = list(range(n))
            rng.shuffle(p)
            perms.append(tuple(p))
        sigma = [0, 1, 2]
        rng.shuffle(sigma)
        return cls(tuple(perms), tuple(sigma))

    def apply_point(self, p: Point) -> Point:
        out = [0, 0, 0]
        for a in range(3):
            out[self.sigma[a]] = self.perms[a][p[a]]
        return tuple(out)

    def compose(self, other: "GridSymmetry") -> "GridSymmetry":
        """``self`` after ``other``."""
        perms = [None, None, None]
        sigma = [0, 0, 0]
        for a in range(3):
            b = other.sigma[a]
            sigma[a] = self.sigma[b]
            perms[a] = tuple(self.perms[b][other.perms[a][v]] for v in range(self.N))
        return GridSymmetry(tuple(perms), tuple(sigma))

    def inverse(self) -> "GridSymmetry":
        perms = [None, None, None]
        sigma = [0, 0, 0]
        for a in range(3):
            b = self.sigma[a]
            sigma[b] = a
            inv = [0] * self.N
            for v, w in enumerate(self.perms[a]):
                inv[w] = v
            perms[b] = tuple(inv)
        return GridSymmetry(tuple(perms), tuple(sigma))


def apply_symmetry(g: GridSymmetry, s: PointSet3) -> PointSet3:
    if g.N != s.N:
        raise ValueError(f"symmetry is for N={g.N}, point set has N={s.N}")
    return PointSet3(s.N, [g.apply_point(p) for p in s.marks])


def group_order(n: int) -> int:
    return 6 * math.factorial(n) ** 3


@lru_cache(maxsize=None)
def _group_maps(n: int) -> np.ndarray:
    """Every group element as an array mapping point codes to point codes."""
    if n > MAX_LAYER_N:
        raise SizeError(f"orbit enumeration limited to N <= {MAX_LAYER_N}, got N={n}")
    coords = np.array([(c % n, (c // n) % n, c // (n * n)) for c in range(n ** 3)])
    perms = np.array(list(itertools.permutations(range(n))))
    weights = np.array([1, n, n * n])
    maps = []
    for sigma in itertools.permutations(range(3)):
        # value moved to axis sigma[a] contributes weights[sigma[a]]
        parts = [perms[:, coords[:, a]] * weights[sigma[a]] for a in range(3)]
        full = (parts[0][:, None, None, :] + parts[1][None, :, None, :] + parts[2][None, None, :, :])
        maps.append(full.reshape(-1, n ** 3))
    return np.concatenate(maps).astype(np.int16)


def canonical_form_3d(s: PointSet3) -> bytes:
    """Lexicographically least sorted code list over the orbit of ``s``."""
    n = s.N
    if n > MAX_LAYER_N:
        raise SizeError(f"canonical_form_3d is limited to N <= {MAX_LAYER_N}, got N={n}")
    codes = np.array(s.codes(), dtype=np.int64)
    if len(codes) == 0:
        return bytes([n])
    imgs = np.sort(_group_maps(n)[:, codes], axis=1)
    best = imgs[np.lexsort(imgs.T[::-1])[0]]
    return bytes([n]) + bytes(int(c) for c in best)


# ---------------------------------------------------------------- bounds


def layer_count_lower_bound(n: int, m2d: int | None = None) -> int:
    """Least sum of per-layer mark counts with every two layers together
    holding at least the 2D minimum; computed by enumeration."""
    if m2d is None:
        m2d = solve_min_marks_2d(n)
    if n == 1:
        return 0
    best = None
    for c in itertools.combinations_with_replacement(range(n * n + 1), n):
        # c is nondecreasing, so the two smallest entries decide every pair
        if c[0] + c[1] >= m2d:
            tot = sum(c)
            if best is None or tot < best:
                best = tot
    return best


# --------------------------------------------------------- layer search


@lru_cache(maxsize=None)
def _rect_table(n: int) -> np.ndarray:
    """H[m] is True when layer mask m (bit x + N*y) meets every rectangle."""
    size = 1 << (n * n)
    masks = np.arange(size, dtype=np.int64)
    ok = np.ones(size, dtype=bool)
    for xs, ys in rectangles(n):
        r = sum(1 << (x + n * y) for x in xs for y in ys)
        ok &= (masks & r) != 0
    return ok


@lru_cache(maxsize=None)
def _layer_bit_perms(n: int) -> np.ndarray:
    """Bit permutations of a layer mask for every x/y relabelling and the x<->y swap."""
    out = []
    for px in itertools.permutations(range(n)):
        for py in itertools.permutations(range(n)):
            for swap in (False, True):
                row = []
                for b in range(n * n):
                    tx, ty = px[b % n], py[b // n]
                    if swap:
                        tx, ty = ty, tx
                    row.append(tx + n * ty)
                out.append(row)
    return np.array(out, dtype=np.int64)


def _layer_images(n: int, masks: np.ndarray) -> np.ndarray:
    perms = _layer_bit_perms(n)
    img = np.zeros((len(perms), len(masks)), dtype=np.int64)
    for b in range(n * n):
        img |= ((masks[None, :] >> b) & 1) << perms[:, b : b + 1]
    return img


def _popcounts(n: int) -> np.ndarray:
    size = 1 << (n * n)
    masks = np.arange(size, dtype=np.int64)
    pc = np.zeros(size, dtype=np.int64)
    for b in range(n * n):
        pc += (masks >> b) & 1
    return pc


@dataclass
class Solve3DResult:
    N: int
    value: int | None
    certificate: PointSet3 | None
    lower: int
    upper: int
    nodes: int
    runtime_ms: float
    strategy: str = "layers"

    @property
    def exact(self) -> bool:
        return self.value is not None

    @property
    def order(self) -> int | None:
        return None if self.value is None else self.N ** 3 - self.value

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "value": self.value,
            "order": self.order,
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "strategy": self.strategy,
            "nodes": self.nodes,
            "runtime_ms": round(self.runtime_ms, 3),
        }


class _LayerSearch:
    """Choose one mask per z-layer so that every two layers together meet
    every rectangle (equivalent to meeting every box).  Layers are kept in
    (weight, mask) order and the first is the least of its x/y orbit."""

    def __init__(self, n: int, t: int, find_all: bool, deadline):
        self.n, self.t = n, t
        self.find_all = find_all
        self.deadline = deadline
        self.H = _rect_table(n)
        self.pc = _popcounts(n)
        self.m2d = int(self.pc[self.H].min())
        size = 1 << (n * n)
        order = np.lexsort((np.arange(size), self.pc))
        self.order = order
        self.rank = np.empty(size, dtype=np.int64)
        self.rank[order] = np.arange(size)
        self.solutions: list[list[int]] = []
        self.nodes = 0

    def _orbit_min(self, cands: np.ndarray) -> np.ndarray:
        return cands[_layer_images(self.n, cands).min(axis=0) == cands]

    def run(self) -> None:
        n = self.n
        first = self.order[self.pc[self.order] <= self.t // n]
        first = self._orbit_min(first)
        self._dfs([], first, 0)

    def _dfs(self, chosen: list[int], cands: np.ndarray, ones: int) -> bool:
        self.nodes += 1
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded3D
        n = self.n
        depth = len(chosen)
        if depth == n:
            if self.find_all and ones != self.t:
                return False
            self.solutions.append(list(chosen))
            return not self.find_all
        rest = n - depth
        w = self.pc[cands]
        # remaining layers are at least as heavy as this one
        cands = cands[ones + w * rest <= self.t]
        for m in cands:
            m = int(m)
            wm = int(self.pc[m])
            nxt_ones = ones + wm
            if depth == 0:
                nxt = self.order[self.rank[self.order] >= self.rank[m]]
            else:
                nxt = cands[self.rank[cands] >= self.rank[m]]
            nxt = nxt[self.H[nxt | m]]
            if rest > 1 and len(nxt) == 0:
                continue
            if self._dfs(chosen + [m], nxt, nxt_ones):
                return True
        return False


def _layers_to_points(n: int, layers: list[int]) -> PointSet3:
    pts = []
    for z, m in enumerate(layers):
        for b in range(n * n):
            if (m >> b) & 1:
                pts.append((b % n, b // n, z))
    return PointSet3(n, pts)


def solve_min_marks_3d(n: int, budget: float | None = 300.0) -> Solve3DResult:
    """Exact minimum number of marks meeting every box of the N^3 grid.

    Iterative deepening from the layer-count bound; each value below the
    answer is refuted by an exhausted layer search (or by the bound itself).
    """
    if not isinstance(n, int) or n < 2:
        raise ValueError("N must be an integer >= 2")
    if n > MAX_LAYER_N:
        raise SizeError(f"exact 3D search is limited to N <= {MAX_LAYER_N}, got N={n}")
    start = time.monotonic()
    deadline = None if budget is None else start + budget
    lower = layer_count_lower_bound(n)
    upper = n ** 3
    t = lower
    nodes = 0
    while t <= upper:
        s = _LayerSearch(n, t, False, deadline)
        try:
            s.run()
        except BudgetExceeded3D:
            return Solve3DResult(n, None, None, t, upper, nodes + s.nodes, (time.monotonic() - start) * 1000)
        nodes += s.nodes
        if s.solutions:
            cert = _layers_to_points(n, s.solutions[0])
            if len(cert) != t or not hits_all_boxes(cert):
                raise RuntimeError("3D certificate failed re-verification")
            return Solve3DResult(n, t, cert, t, t, nodes, (time.monotonic() - start) * 1000)
        t += 1
    raise RuntimeError("layer search found no hitting set at all")


def enumerate_min_marks_3d(n: int, value: int, budget: float | None = 300.0) -> tuple[list[bytes], bool]:
    """Canonical forms of all hitting sets with ``value`` marks, and whether
    the search completed."""
    if n > MAX_LAYER_N:
        raise SizeError(f"enumeration is limited to N <= {MAX_LAYER_N}, got N={n}")
    deadline = None if budget is None else time.monotonic() + budget
    s = _LayerSearch(n, value, True, deadline)
    complete = True
    try:
        s.run()
    except BudgetExceeded3D:
        complete = False
    forms = set()
    for layers in s.solutions:
        p = _layers_to_points(n, layers)
        if not hits_all_boxes(p):
            raise RuntimeError("enumerated set failed re-verification")
        forms.add(canonical_form_3d(p))
    return sorted(forms), complete


# ------------------------------------------------------- independent checks


def _box_masks(n: int) -> tuple[list[int], int]:
    """For every point code, the bit mask of boxes having it as a corner."""
    per_point = [0] * n ** 3
    count = 0
    for bi, b in enumerate(boxes(n)):
        for x, y, z in b.corners():
            per_point[x + n * y + n * n * z] |= 1 << bi
        count += 1
    return per_point, (1 << count) - 1


def exhaustive_hitting_sets(n: int, t: int) -> list[tuple[int, ...]]:
    """Every t-subset of the grid (as point codes) meeting all boxes, by
    trying all C(N^3, t) subsets."""
    if math.comb(n ** 3, t) > 5_000_000:
        raise SizeError(f"C({n ** 3},{t}) subsets is too many to try")
    per_point, full = _box_masks(n)
    out = []
    for combo in itertools.combinations(range(n ** 3), t):
        acc = 0
        for c in combo:
            acc |= per_point[c]
        if acc == full:
            out.append(combo)
    return out


class _WitnessSearch3D:
    def __init__(self, n: int, t: int):
        self.n, self.t = n, t
        self.per_point, self.full = _box_masks(n)
        self.box_list = list(boxes(n))
        self.nodes = 0

    def _packing(self, hit: int) -> int:
        """Greedy count of unhit boxes with pairwise disjoint corner sets."""
        used: set = set()
        count = 0
        for bi, b in enumerate(self.box_list):
            if (hit >> bi) & 1:
                continue
            cs = b.corners()
            if used.isdisjoint(cs):
                used.update(cs)
                count += 1
        return count

    def dfs(self, marks: list[Point], hit: int):
        self.nodes += 1
        if hit == self.full:
            return list(marks)
        if len(marks) + self._packing(hit) > self.t:
            return None
        n = self.n
        # least unhit box
        bi = ((~hit) & self.full & -((~hit) & self.full)).bit_length() - 1
        corners = self.box_list[bi].corners()
        if not marks:
            corners = corners[:1]  # G is transitive on points
        for p in corners:
            code = p[0] + n * p[1] + n * n * p[2]
            marks.append(p)
            got = self.dfs(marks, hit | self.per_point[code])
            marks.pop()
            if got is not None:
                return got
        return None


def solve_min_marks_3d_witness(n: int) -> Solve3DResult:
    """Cross-check: branch over the corners of the least unhit box (small N)."""
    start = time.monotonic()
    t = 1
    nodes = 0
    while True:
        s = _WitnessSearch3D(n, t)
        got = s.dfs([], 0)
        nodes += s.nodes
        if got is not None:
            cert = PointSet3(n, got)
            return Solve3DResult(n, t, cert, t, t, nodes, (time.monotonic() - start) * 1000, "witness")
        t += 1
