"""Canonical forms of 0/1 matrices under row and column permutations.

The canonical form is the lexicographically least row-major text over the
orbit.  For a fixed row order the best column order is forced: columns are
kept in ordered cells and each new row splits every cell into its zero part
followed by its one part.  So only row orders are searched, and at every
depth only rows with the least split signature can continue the minimum.
Ties are cut with automorphisms found along the way (two leaves with equal
text differ by a symmetry of the matrix).
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .matrix import BinaryMatrix, bits, permute, popcount, transpose
from .verify import SizeError

MAX_CANON_DIM = 16


@dataclass(frozen=True)
class CanonicalForm:
    n_rows: int
    n_cols: int
    body: bytes

    @property
    def text(self) -> str:
        return f"{self.n_rows} {self.n_cols}\n" + self.body.decode() + "\n"

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.text.encode()).hexdigest()

    def matrix(self) -> BinaryMatrix:
        from .matrix import parse_matrix

        return parse_matrix(self.text)

    def __lt__(self, other: "CanonicalForm") -> bool:
        return (self.n_rows, self.n_cols, self.body) < (other.n_rows, other.n_cols, other.body)


@dataclass(frozen=True)
class Labeling:
    """``permute(a, row_perm, col_perm)`` is the canonical matrix."""

    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    transposed: bool = False


@dataclass
class CanonStats:
    leaves: int = 0
    nodes: int = 0
    automorphisms: int = 0


def _split(cells: list[int], row: int) -> list[int]:
    out = []
    for c in cells:
        lo, hi = c & ~row, c & row
        if lo:
            out.append(lo)
        if hi:
            out.append(hi)
    return out


class _Search:
    def __init__(self, a: BinaryMatrix):
        self.a = a
        self.sup = a.row_supports
        self.n = a.n_rows
        self.best_keys: list[tuple] | None = None
        self.best_order: list[int] | None = None
        self.best_cells: list[int] | None = None
        self.gens: list[list[int]] = []
        self.stats = CanonStats()

    def run(self):
        self._dfs([], [self.a.full_mask], list(range(self.n)), [])

    def _worse(self, keys) -> bool:
        return self.best_keys is not None and keys > self.best_keys[: len(keys)]

    def _orbit_reps(self, prefix: list[int], cands: list[int]) -> list[int]:
        """Candidates that are not images of an earlier candidate under a
        known automorphism fixing ``prefix`` pointwise."""
        live = [g for g in self.gens if all(g[p] == p for p in prefix)]
        if not live:
            return cands
        parent = {c: c for c in cands}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        changed = True
        while changed:
            changed = False
            for g in live:
                for c in cands:
                    d = g[c]
                    if d in parent:
                        rc, rd = find(c), find(d)
                        if rc != rd:
                            parent[max(rc, rd)] = min(rc, rd)
                            changed = True
        return [c for c in cands if find(c) == c]

    def _dfs(self, prefix, cells, rest, keys):
        self.stats.nodes += 1
        if not rest:
            self._leaf(prefix, cells, keys)
            return
        scored = [(tuple(popcount(self.sup[r] & c) for c in cells), r) for r in rest]
        low = min(s for s, _ in scored)
        here = keys + [low]
        cands = [r for s, r in scored if s == low]
        done: list[int] = []
        for r in cands:
            if self._worse(here):
                return
            if done and r not in self._orbit_reps(prefix, done + [r]):
                continue
            done.append(r)
            self._dfs(prefix + [r], _split(cells, self.sup[r]), [x for x in rest if x != r], here)

    def _leaf(self, order, cells, keys):
        self.stats.leaves += 1
        if self.best_keys is None or keys < self.best_keys:
            self.best_keys, self.best_order, self.best_cells = keys, order, cells
            return
        if keys == self.best_keys:
            pos = {r: i for i, r in enumerate(self.best_order)}
            gen = [order[pos[r]] for r in range(self.n)]
            if any(gen[r] != r for r in range(self.n)):
                self.gens.append(gen)
                self.stats.automorphisms += 1

    def labeling(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        row_perm = [0] * self.n
        for i, r in enumerate(self.best_order):
            row_perm[r] = i
        col_perm = [0] * self.a.n_cols
        pos = 0
        for c in self.best_cells:
            for j in bits(c):
                col_perm[j] = pos
                pos += 1
        return tuple(row_perm), tuple(col_perm)


def _body(a: BinaryMatrix) -> bytes:
    from .matrix import serialize_matrix

    return "\n".join(serialize_matrix(a).splitlines()[1:]).encode()


def _canon_plain(a: BinaryMatrix) -> tuple[CanonicalForm, Labeling, CanonStats]:
    s = _Search(a)
    s.run()
    rp, cp = s.labeling()
    b = permute(a, rp, cp)
    return CanonicalForm(a.n_rows, a.n_cols, _body(b)), Labeling(rp, cp), s.stats


def canonical_labeling(a: BinaryMatrix, with_transpose: bool = False) -> tuple[CanonicalForm, Labeling]:
    """Canonical form plus a labeling realizing it.

    With ``with_transpose`` the labeling may apply to ``transpose(a)``, which
    is flagged in the result.
    """
    if max(a.n_rows, a.n_cols) > MAX_CANON_DIM:
        raise SizeError(f"canonical form limited to {MAX_CANON_DIM} rows and columns, got {a.n_rows}x{a.n_cols}")
    if with_transpose and a.n_rows != a.n_cols:
        raise ValueError("with_transpose needs a square matrix")
    form, lab, _ = _canon_plain(a)
    if with_transpose:
        tform, tlab, _ = _canon_plain(transpose(a))
        if tform.body < form.body:
            return tform, Labeling(tlab.row_perm, tlab.col_perm, True)
    return form, lab


def canonical_form(a: BinaryMatrix, with_transpose: bool = False) -> CanonicalForm:
    return canonical_labeling(a, with_transpose)[0]


def canonical_stats(a: BinaryMatrix) -> CanonStats:
    return _canon_plain(a)[2]


def _inverse(p) -> list[int]:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return out


def equivalence_mapping(a: BinaryMatrix, b: BinaryMatrix, with_transpose: bool = False):
    """``(transposed, row_perm, col_perm)`` with
    ``permute(transpose(a) if transposed else a, row_perm, col_perm) == b``,
    or None when the matrices are not equivalent."""
    if a.shape != b.shape:
        return None
    fa, la = canonical_labeling(a, with_transpose)
    fb, lb = canonical_labeling(b, with_transpose)
    if fa != fb:
        return None
    # x -> canon via la and y -> canon via lb, so y = permute(x, lb^-1 . la)
    rb, cb = _inverse(lb.row_perm), _inverse(lb.col_perm)
    rows = [rb[p] for p in la.row_perm]
    cols = [cb[p] for p in la.col_perm]
    if lb.transposed:
        # the composite maps x onto b^T; transposing swaps the two factors
        rows, cols = cols, rows
    transposed = la.transposed != lb.transposed
    src = transpose(a) if transposed else a
    if permute(src, rows, cols) != b:
        raise AssertionError("canonical labeling failed to validate")
    return transposed, tuple(rows), tuple(cols)


def are_equivalent(a: BinaryMatrix, b: BinaryMatrix, with_transpose: bool = False) -> bool:
    """True iff some row/column permutation (and transpose when enabled) maps
    ``a`` to ``b``.  Mismatched dimensions give False rather than an error."""
    if a.shape != b.shape:
        return False
    return canonical_form(a, with_transpose) == canonical_form(b, with_transpose)
