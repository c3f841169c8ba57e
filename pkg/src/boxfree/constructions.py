"""Explicit matrix families without all-zero k x k minors.

Every builder returns a :class:`BuiltMatrix` whose one-count equals the
family's closed form.  All families for ``n = 2k + 1`` share one skeleton:

* ``d`` pendant rows, each a single 1 on a private column;
* an optional *tail* row ``[.. 1 1]`` hanging off the last pendant column;
* ``m`` column groups.  A group of width ``w`` carries ``w - 1`` path rows
  with two adjacent 1s each (the ``Q_w`` block);
* ``m`` star rows with three 1s each, one per group of
  :func:`star_pattern`.  Every group receives exactly three stars.

How the three stars are spread over a group's columns is not fixed by the
source drawings.  The rule used here: the star row that "owns" the group
(row ``g`` for group ``g``) takes the middle column, the other two take the
end columns.  In a width-2 group the owner sits alone on the first column
and the other two share the second (``shared_pair`` instead puts the owner
and the lower other star on the first column, which the tail layouts of
the 10k/3 family need); in a width-1 group all three stars share the column.
Validity of every instance is decided by :mod:`boxfree.verify`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .matrix import BinaryMatrix

GOLDEN_PATH = Path(__file__).with_name("data") / "min_k.json"


class ConstructionError(ValueError):
    """Parameters outside a family's domain."""


class Family(str, Enum):
    DIAGONAL = "diagonal"
    EVEN_MIDDLE = "even-middle"
    BAND_4K5 = "band-4k5"
    SEVEN_HALVES = "seven-halves"
    TEN_THIRDS = "ten-thirds"
    GENERAL = "general"


@dataclass(frozen=True)
class ConstructionId:
    family: Family
    k: int
    n: int | None = None  # diagonal family only
    a: int | None = None  # general family only

    @property
    def size(self) -> int:
        if self.family is Family.DIAGONAL:
            return self.n
        if self.family is Family.EVEN_MIDDLE:
            return 2 * self.k
        return 2 * self.k + 1

    def label(self) -> str:
        if self.family is Family.DIAGONAL:
            return f"{self.family.value}(n={self.n},k={self.k})"
        if self.family is Family.GENERAL:
            return f"{self.family.value}(k={self.k},a={self.a})"
        return f"{self.family.value}(k={self.k})"


@dataclass(frozen=True)
class BuiltMatrix:
    matrix: BinaryMatrix
    claimed_ones: int
    construction: ConstructionId
    # the block carrying the surplus argument (B or C), when the family has one
    inner_block: BinaryMatrix | None = field(default=None, compare=False)
    # realized constant C in ((3a+1)k + C)/a for the general family
    constant: int | None = None

    @property
    def k(self) -> int:
        return self.construction.k

    def to_dict(self) -> dict:
        c = self.construction
        return {"family": c.family.value, "k": c.k, "n": self.matrix.n_rows, "a": c.a, "ones": self.claimed_ones}


# ---------------------------------------------------------------- skeleton


def star_pattern(m: int) -> list[list[int]]:
    """Groups hit by each of m star rows; symmetric, three per row and column.

    Rows 0 and 1 are {0,1,2} and {0,1,3}, rows i in the middle are
    {i-2, i, i+2}, and the last two rows are {m-4, m-2, m-1} and
    {m-3, m-2, m-1}.  For m = 3 every row hits all three groups.
    """
    if m < 3:
        raise ConstructionError(f"star pattern needs at least 3 groups, got {m}")
    if m == 3:
        return [[0, 1, 2]] * 3
    out = []
    for i in range(m):
        if i == 0:
            s = [0, 1, 2]
        elif i == 1:
            s = [0, 1, 3]
        elif i == m - 2:
            s = [m - 4, m - 2, m - 1]
        elif i == m - 1:
            s = [m - 3, m - 2, m - 1]
        else:
            s = [i - 2, i, i + 2]
        out.append(s)
    return out


def _assemble(n: int, pendants: int, tail: bool, widths: list[int], shared_pair: bool = False) -> BinaryMatrix:
    rows: list[list[int]] = [[i] for i in range(pendants)]
    col = pendants
    if tail:
        if pendants < 1:
            raise ConstructionError("a tail row needs at least one pendant row")
        rows.append([pendants - 1, pendants])
        col += 1
    groups = []
    for w in widths:
        cs = list(range(col, col + w))
        col += w
        groups.append(cs)
        rows.extend([cs[j], cs[j + 1]] for j in range(w - 1))
    if col != n:
        raise ConstructionError(f"layout uses {col} columns, expected {n}")
    pattern = star_pattern(len(widths))
    owners: dict[int, list[int]] = {g: [] for g in range(len(widths))}
    for i, gs in enumerate(pattern):
        for g in gs:
            owners[g].append(i)
    star_rows: list[list[int]] = [[] for _ in pattern]
    for g, cs in enumerate(groups):
        hits = owners[g]
        own = g if g in hits else hits[1]
        others = [r for r in hits if r != own]
        w = len(cs)
        if w == 1:
            places = {own: cs[0], others[0]: cs[0], others[1]: cs[0]}
        elif w == 2 and shared_pair:
            places = {own: cs[0], others[0]: cs[0], others[1]: cs[1]}
        elif w == 2:
            places = {own: cs[0], others[0]: cs[1], others[1]: cs[1]}
        else:
            places = {own: cs[w // 2], others[0]: cs[0], others[1]: cs[-1]}
        for r, c in places.items():
            star_rows[r].append(c)
    rows.extend(star_rows)
    if len(rows) != n:
        raise ConstructionError(f"layout has {len(rows)} rows, expected {n}")
    return BinaryMatrix.from_cells(n, n, [(i, j) for i, r in enumerate(rows) for j in r])


# ----------------------------------------------------------------- builders


def build_diagonal(n: int, k: int) -> BuiltMatrix:
    """First 2(n-k)+1 diagonal entries set; valid for n/2 < k <= n."""
    if not (isinstance(n, int) and isinstance(k, int)) or not (2 * k > n and k <= n):
        raise ConstructionError(f"diagonal family needs n/2 < k <= n, got n={n}, k={k}")
    t = 2 * (n - k) + 1
    m = BinaryMatrix.from_cells(n, n, [(i, i) for i in range(t)])
    return BuiltMatrix(m, t, ConstructionId(Family.DIAGONAL, k, n=n))


def _even_middle_block(k: int) -> BinaryMatrix:
    rows = [[0, 1]] + [[j - 1, j + 1] for j in range(1, k)] + [[k - 1, k]]
    return BinaryMatrix.from_cells(k + 1, k + 1, [(i, j) for i, r in enumerate(rows) for j in r])


def build_even_middle(k: int) -> BuiltMatrix:
    """2k x 2k matrix with 3k+1 ones: k-1 pendants plus the path block B."""
    if not isinstance(k, int) or k < 2:
        raise ConstructionError(f"even-middle family needs k >= 2, got {k}")
    b = _even_middle_block(k)
    n = 2 * k
    cells = [(i, i) for i in range(k - 1)]
    cells += [(k - 1 + i, k - 1 + j) for i, j in b.cells()]
    return BuiltMatrix(BinaryMatrix.from_cells(n, n, cells), 3 * k + 1, ConstructionId(Family.EVEN_MIDDLE, k), b)


def band_block(k: int) -> BinaryMatrix:
    """The (k+2) x (k+2) block C of the 4k+5 family."""
    m = k + 2
    pat = star_pattern(m)
    return BinaryMatrix.from_cells(m, m, [(i, j) for i, r in enumerate(pat) for j in r])


def build_band_4k5(k: int) -> BuiltMatrix:
    """(2k+1) x (2k+1) matrix with 4k+5 ones: k-1 pendants plus block C."""
    if not isinstance(k, int) or k < 1:
        raise ConstructionError(f"band family needs k >= 1, got {k}")
    c = band_block(k)
    n = 2 * k + 1
    cells = [(i, i) for i in range(k - 1)]
    cells += [(k - 1 + i, k - 1 + j) for i, j in c.cells()]
    return BuiltMatrix(BinaryMatrix.from_cells(n, n, cells), 4 * k + 5, ConstructionId(Family.BAND_4K5, k), c)


def _seven_halves_matrix(k: int) -> BinaryMatrix:
    n = 2 * k + 1
    base = k - 2
    rows = [[i] for i in range(base)]
    if k % 2:
        # L: triple t has its own pair's left column and the right columns
        # of the two previous pairs, cyclically
        q = (k + 3) // 2
        rows += [[base + 2 * p, base + 2 * p + 1] for p in range(q)]
        rows += [[base + 2 * t, base + 2 * ((t - 1) % q) + 1, base + 2 * ((t - 2) % q) + 1] for t in range(q)]
    else:
        # L': pairs 0..p-3 as in L; the last two pairs and the empty last
        # column form three intertwined triples wrapping to the top rows
        p = (k + 2) // 2
        m = p + 1

        def left(i):
            return base + 2 * i

        def right(i):
            return base + 2 * i + 1

        last = n - 1
        rows += [[left(i), right(i)] for i in range(p)]
        tri: list[list[int]] = [[] for _ in range(m)]
        for j in range(p - 2):
            tri[j].append(left(j))
            tri[j + 1].append(right(j))
            tri[j + 2].append(right(j))
        tri[p - 2].append(left(p - 1))
        tri[p - 1].append(last)
        tri[p].append(last)
        tri[p - 1].append(right(p - 2))
        tri[p].append(right(p - 1))
        tri[0].append(right(p - 1))
        tri[p].append(left(p - 2))
        tri[0].append(right(p - 2))
        tri[1].append(left(p - 2))
        rows += tri
    return BinaryMatrix.from_cells(n, n, [(i, j) for i, r in enumerate(rows) for j in r])


def build_seven_halves(k: int) -> BuiltMatrix:
    """(7k+11)/2 ones for odd k, (7k+12)/2 for even k (k <= 2 uses the 4k+5 family)."""
    if not isinstance(k, int) or k < 1:
        raise ConstructionError(f"seven-halves family needs k >= 1, got {k}")
    cid = ConstructionId(Family.SEVEN_HALVES, k)
    if k <= 2:
        band = build_band_4k5(k)
        return BuiltMatrix(band.matrix, band.claimed_ones, cid)
    return BuiltMatrix(_seven_halves_matrix(k), formula_ones(cid), cid)


def ten_thirds_layout(k: int) -> tuple[int, bool, list[int]]:
    """(pendants, tail, group widths) for the 10k/3 family."""
    d = k - 4
    r = k % 3
    if r == 0:
        return d, False, [3] * ((k + 3) // 3) + [2]
    if r == 1:
        return d, True, [3] * ((k + 2) // 3) + [2]
    # k = 2 mod 3: two short groups, no tail
    return d, False, [3] * ((k + 1) // 3) + [2, 2]


def general_layout(k: int, a: int) -> tuple[int, bool, list[int]]:
    """(pendants, tail, group widths) for the general family with parameter a.

    a = 1 keeps k - 1 pendants (the 4k+5 family); with k pendants the
    one-count would drop below the known value of alpha(2, 5).
    """
    d = k - 1 if a == 1 else k - 2 * a + 2
    width = 2 * k + 1 - d
    q, rho = divmod(width, a)
    widths = [a] * q + ([rho] if rho else [])
    return d, False, widths


def _check_min_k(name: str, k: int, min_k: int) -> None:
    if k < min_k:
        raise ConstructionError(f"{name} is validated only for k >= min_k = {min_k}, got k={k}")


def build_ten_thirds(k: int) -> BuiltMatrix:
    """(10k+24)/3, (10k+23)/3, (10k+25)/3 ones for k = 0, 1, 2 mod 3."""
    if not isinstance(k, int):
        raise ConstructionError("k must be an integer")
    _check_min_k("ten-thirds family", k, min_k_ten_thirds())
    d, tail, widths = ten_thirds_layout(k)
    cid = ConstructionId(Family.TEN_THIRDS, k)
    return BuiltMatrix(_assemble(2 * k + 1, d, tail, widths, shared_pair=True), formula_ones(cid), cid)


def general_constant(k: int, a: int) -> int:
    """Realized C with ones = ((3a+1)k + C)/a."""
    d, tail, widths = general_layout(k, a)
    ones = d + 2 * tail + sum(2 * (w - 1) for w in widths) + 3 * len(widths)
    return a * ones - (3 * a + 1) * k


def build_general(k: int, a: int) -> BuiltMatrix:
    """Group width a; pendants k-2a+2, then full Q_a groups and one remainder group."""
    if not (isinstance(k, int) and isinstance(a, int)) or a < 1:
        raise ConstructionError(f"general family needs integer a >= 1, got a={a}")
    _check_min_k(f"general family (a={a})", k, min_k_general(a))
    d, tail, widths = general_layout(k, a)
    if d < 0:
        raise ConstructionError(f"k={k} too small for a={a}")
    cid = ConstructionId(Family.GENERAL, k, a=a)
    m = _assemble(2 * k + 1, d, tail, widths)
    c = general_constant(k, a)
    return BuiltMatrix(m, ((3 * a + 1) * k + c) // a, cid, constant=c)


def formula_ones(cid: ConstructionId) -> int:
    """Closed-form one-count of a family member."""
    k = cid.k
    f = cid.family
    if f is Family.DIAGONAL:
        n = cid.n
        if n is None or not (2 * k > n and k <= n):
            raise ConstructionError("diagonal family needs n/2 < k <= n")
        return 2 * (n - k) + 1
    if f is Family.EVEN_MIDDLE:
        if k < 2:
            raise ConstructionError("even-middle family needs k >= 2")
        return 3 * k + 1
    if f is Family.BAND_4K5:
        if k < 1:
            raise ConstructionError("band family needs k >= 1")
        return 4 * k + 5
    if f is Family.SEVEN_HALVES:
        if k < 1:
            raise ConstructionError("seven-halves family needs k >= 1")
        return (7 * k + 11) // 2 if k % 2 else (7 * k + 12) // 2
    if f is Family.TEN_THIRDS:
        if k < 1:
            raise ConstructionError("ten-thirds family needs k >= 1")
        return (10 * k + (24, 23, 25)[k % 3]) // 3
    if f is Family.GENERAL:
        a = cid.a
        if a is None or a < 1:
            raise ConstructionError("general family needs a >= 1")
        return ((3 * a + 1) * k + general_constant(k, a)) // a
    raise ConstructionError(f"unknown family {f}")


def build(cid: ConstructionId) -> BuiltMatrix:
    f = cid.family
    if f is Family.DIAGONAL:
        return build_diagonal(cid.n, cid.k)
    if f is Family.EVEN_MIDDLE:
        return build_even_middle(cid.k)
    if f is Family.BAND_4K5:
        return build_band_4k5(cid.k)
    if f is Family.SEVEN_HALVES:
        return build_seven_halves(cid.k)
    if f is Family.TEN_THIRDS:
        return build_ten_thirds(cid.k)
    return build_general(cid.k, cid.a)


# ------------------------------------------------------------ min_k golden


def _layout_valid(k: int, layout, shared_pair: bool = False) -> bool:
    from .verify import has_zero_minor

    d, tail, widths = layout
    if d < 0 or (tail and d < 1) or len(widths) < 3:
        return False
    try:
        m = _assemble(2 * k + 1, d, tail, widths, shared_pair)
    except ConstructionError:
        return False
    return not has_zero_minor(m, k)


def discover_min_k(kmax: int = 100, amax: int = 6) -> dict:
    """Smallest k0 such that every k in [k0, kmax] verifies, per family."""

    def threshold(valid) -> int:
        k0 = kmax + 1
        for k in range(kmax, 0, -1):
            if not valid(k):
                break
            k0 = k
        return k0

    return {
        "kmax": kmax,
        "ten_thirds": threshold(lambda k: _layout_valid(k, ten_thirds_layout(k), True)),
        "general": {str(a): threshold(lambda k, a=a: _layout_valid(k, general_layout(k, a))) for a in range(1, amax + 1)},
    }


def write_golden(path: Path = GOLDEN_PATH, kmax: int = 100, amax: int = 6) -> dict:
    data = discover_min_k(kmax, amax)
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    return data


def _golden() -> dict:
    try:
        return json.loads(GOLDEN_PATH.read_text())
    except FileNotFoundError:
        return {}


def min_k_ten_thirds() -> int:
    return int(_golden().get("ten_thirds", 1))


def min_k_general(a: int) -> int:
    return int(_golden().get("general", {}).get(str(a), 1))


if __name__ == "__main__":
    print(json.dumps(write_golden(), indent=2))
