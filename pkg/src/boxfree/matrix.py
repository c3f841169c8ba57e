"""Immutable 0/1 matrices stored as one integer bit vector per row.

Bit ``j`` of ``row_supports[i]`` is set iff entry ``(i, j)`` is 1.  Python
integers are arbitrary precision, so a row support is a single int no matter
how wide the matrix is; kernels that need fixed-width words convert with
:meth:`BinaryMatrix.as_words`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_DIM = 4096
WORD_BITS = 64


class MatrixFormatError(ValueError):
    """Raised when matrix text cannot be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DimensionError(ValueError):
    pass


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits(x: int) -> list[int]:
    """Indices of the set bits of ``x`` in increasing order."""
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


@dataclass(frozen=True)
class BinaryMatrix:
    n_rows: int
    n_cols: int
    row_supports: tuple[int, ...]

    def __post_init__(self):
        if not (1 <= self.n_rows <= MAX_DIM and 1 <= self.n_cols <= MAX_DIM):
            raise DimensionError(f"dimensions must lie in [1, {MAX_DIM}], got {self.n_rows}x{self.n_cols}")
        if len(self.row_supports) != self.n_rows:
            raise DimensionError(f"expected {self.n_rows} row supports, got {len(self.row_supports)}")
        limit = 1 << self.n_cols
        for i, r in enumerate(self.row_supports):
            if r < 0 or r >= limit:
                raise DimensionError(f"row {i} has bits outside the {self.n_cols} columns")

    # construction helpers -------------------------------------------------

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int | None = None) -> "BinaryMatrix":
        n_cols = n_rows if n_cols is None else n_cols
        return cls(n_rows, n_cols, (0,) * n_rows)

    @classmethod
    def identity(cls, n: int) -> "BinaryMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "BinaryMatrix":
        """Build from a nested sequence of 0/1 values (e.g. a list of lists)."""
        if not rows:
            raise DimensionError("matrix needs at least one row")
        n_cols = len(rows[0])
        supports = []
        for i, row in enumerate(rows):
            if len(row) != n_cols:
                raise DimensionError(f"row {i} has length {len(row)}, expected {n_cols}")
            supports.append(mask_of(j for j, v in enumerate(row) if v))
        return cls(len(rows), n_cols, tuple(supports))

    @classmethod
    def from_cells(cls, n_rows: int, n_cols: int, cells: Iterable[tuple[int, int]]) -> "BinaryMatrix":
        supports = [0] * n_rows
        for i, j in cells:
            if not (0 <= i < n_rows and 0 <= j < n_cols):
                raise DimensionError(f"cell ({i}, {j}) outside {n_rows}x{n_cols}")
            supports[i] |= 1 << j
        return cls(n_rows, n_cols, tuple(supports))

    @classmethod
    def from_array(cls, arr) -> "BinaryMatrix":
        a = np.asarray(arr)
        if a.ndim != 2:
            raise DimensionError("expected a 2-d array")
        return cls.from_rows(a.astype(bool).tolist())

    # queries --------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    @property
    def full_mask(self) -> int:
        return (1 << self.n_cols) - 1

    @property
    def ones_count(self) -> int:
        return sum(popcount(r) for r in self.row_supports)

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return (self.row_supports[i] >> j) & 1

    def cells(self) -> list[tuple[int, int]]:
        return [(i, j) for i, r in enumerate(self.row_supports) for j in bits(r)]

    def row_weights(self) -> list[int]:
        return [popcount(r) for r in self.row_supports]

    def column_supports(self) -> tuple[int, ...]:
        cols = [0] * self.n_cols
        for i, r in enumerate(self.row_supports):
            for j in bits(r):
                cols[j] |= 1 << i
        return tuple(cols)

    def to_array(self) -> np.ndarray:
        a = np.zeros((self.n_rows, self.n_cols), dtype=np.uint8)
        for i, j in self.cells():
            a[i, j] = 1
        return a

    def to_lists(self) -> list[list[int]]:
        return self.to_array().tolist()

    def as_words(self) -> np.ndarray:
        """Row supports as an ``(n_rows, ceil(n_cols/64))`` uint64 array."""
        n_words = (self.n_cols + WORD_BITS - 1) // WORD_BITS
        out = np.zeros((self.n_rows, n_words), dtype=np.uint64)
        word_mask = (1 << WORD_BITS) - 1
        for i, r in enumerate(self.row_supports):
            for w in range(n_words):
                out[i, w] = (r >> (WORD_BITS * w)) & word_mask
        return out

    # derived matrices -----------------------------------------------------

    def with_cell(self, i: int, j: int, value: int = 1) -> "BinaryMatrix":
        rows = list(self.row_supports)
        if value:
            rows[i] |= 1 << j
        else:
            rows[i] &= ~(1 << j)
        return BinaryMatrix(self.n_rows, self.n_cols, tuple(rows))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "BinaryMatrix":
        out = []
        for i in rows:
            r = self.row_supports[i]
            out.append(mask_of(c for c, j in enumerate(cols) if (r >> j) & 1))
        return BinaryMatrix(len(rows), len(cols), tuple(out))

    def __str__(self) -> str:
        return serialize_matrix(self)


def parse_matrix(text: str) -> BinaryMatrix:
    """Parse the ``"<n_rows> <n_cols>"`` header followed by rows of 0/1 characters."""
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise MatrixFormatError("empty input", 1)
    header = lines[0].split()
    if len(header) != 2 or not all(h.isdigit() for h in header):
        raise MatrixFormatError(f"malformed header {lines[0]!r}", 1)
    n_rows, n_cols = int(header[0]), int(header[1])
    if not (1 <= n_rows <= MAX_DIM and 1 <= n_cols <= MAX_DIM):
        raise MatrixFormatError(f"dimensions {n_rows}x{n_cols} out of range", 1)
    body = lines[1:]
    if len(body) != n_rows:
        raise MatrixFormatError(f"expected {n_rows} rows, found {len(body)}", len(lines) + 1)
    supports = []
    for offset, raw in enumerate(body):
        line_no = offset + 2
        row = raw.rstrip("\r")
        if len(row) != n_cols:
            raise MatrixFormatError(f"expected {n_cols} characters, found {len(row)}", line_no)
        bad = set(row) - {"0", "1"}
        if bad:
            raise MatrixFormatError(f"invalid character {sorted(bad)[0]!r}", line_no)
        supports.append(mask_of(j for j, ch in enumerate(row) if ch == "1"))
    return BinaryMatrix(n_rows, n_cols, tuple(supports))


def serialize_matrix(a: BinaryMatrix) -> str:
    lines = [f"{a.n_rows} {a.n_cols}"]
    for r in a.row_supports:
        lines.append("".join("1" if (r >> j) & 1 else "0" for j in range(a.n_cols)))
    return "\n".join(lines) + "\n"


def _check_perm(perm: Sequence[int], n: int, what: str) -> None:
    if len(perm) != n:
        raise DimensionError(f"{what} permutation has length {len(perm)}, expected {n}")
    if sorted(perm) != list(range(n)):
        raise DimensionError(f"{what} permutation is not a permutation of range({n})")


def permute(a: BinaryMatrix, row_perm: Sequence[int], col_perm: Sequence[int]) -> BinaryMatrix:
    """Return ``B`` with ``B[row_perm[i], col_perm[j]] = A[i, j]``.

    Equivalently ``B(i, j) = A(row_perm^-1(i), col_perm^-1(j))``.
    """
    _check_perm(row_perm, a.n_rows, "row")
    _check_perm(col_perm, a.n_cols, "column")
    rows = [0] * a.n_rows
    for i, r in enumerate(a.row_supports):
        rows[row_perm[i]] = mask_of(col_perm[j] for j in bits(r))
    return BinaryMatrix(a.n_rows, a.n_cols, tuple(rows))


def transpose(a: BinaryMatrix) -> BinaryMatrix:
    return BinaryMatrix(a.n_cols, a.n_rows, a.column_supports())


def block_diag(*blocks: BinaryMatrix) -> BinaryMatrix:
    rows = []
    offset = 0
    for b in blocks:
        rows.extend(r << offset for r in b.row_supports)
        offset += b.n_cols
    return BinaryMatrix(len(rows), offset, tuple(rows))


def common_zero_columns(a: BinaryMatrix, rows: int | Iterable[int]) -> int:
    """Columns that are 0 on every selected row, as a bit mask.

    ``rows`` is either a row bit mask or an iterable of row indices.
    """
    idx = bits(rows) if isinstance(rows, int) else list(rows)
    if not idx:
        raise ValueError("common_zero_columns needs a nonempty row set")
    for i in idx:
        if not 0 <= i < a.n_rows:
            raise DimensionError(f"row index {i} out of range")
    zeros = a.full_mask
    for i in idx:
        zeros &= ~a.row_supports[i]
    return zeros
