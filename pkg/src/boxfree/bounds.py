"""Closed-form bounds: the counting bounds for selected sets in the 2D and 3D
grids, and the upper bounds on alpha(k, 2k+1) from the construction families."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .constructions import min_k_ten_thirds

# Slack for comparing real-valued bounds with integers.
EPS = 1e-9

FAMILIES = ("band-4k5", "seven-halves", "ten-thirds")


def cs_bound_3d(n: int) -> float:
    """2 N^(11/4): an upper bound on the order of the N x N x N grid."""
    if n < 1:
        raise ValueError("N must be positive")
    return 2.0 * n ** 2.75


def cs_bound_2d(n: int) -> float:
    """sqrt(2) N^(3/2): an upper bound on a rectangle-free subset of the N x N grid."""
    if n < 1:
        raise ValueError("N must be positive")
    return math.sqrt(2.0) * n ** 1.5


def strictly_below(value: int, bound: float) -> bool:
    return value < bound - EPS


def family_values(k: int) -> dict[str, int]:
    if k < 1:
        raise ValueError("k must be positive")
    return {
        "band-4k5": 4 * k + 5,
        "seven-halves": (7 * k + 11) // 2 if k % 2 else (7 * k + 12) // 2,
        "ten-thirds": (10 * k + (24, 23, 25)[k % 3]) // 3,
    }


def family_min_k() -> dict[str, int]:
    return {"band-4k5": 1, "seven-halves": 1, "ten-thirds": min_k_ten_thirds()}


@dataclass
class BoundReport:
    k: int
    values: dict[str, int]
    applicable: dict[str, bool]
    best_upper: int
    best_families: tuple[str, ...]

    @property
    def best_family(self) -> str:
        return self.best_families[0]

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "values": dict(self.values),
            "applicable": dict(self.applicable),
            "best_upper": self.best_upper,
            "best_families": list(self.best_families),
        }


def upper_bound_report(k: int) -> BoundReport:
    """Every family's one-count at n = 2k+1 and the least applicable one."""
    values = family_values(k)
    mins = family_min_k()
    applicable = {f: k >= mins[f] for f in FAMILIES}
    best = min(values[f] for f in FAMILIES if applicable[f])
    fams = tuple(f for f in FAMILIES if applicable[f] and values[f] == best)
    return BoundReport(k, values, applicable, best, fams)


def crossover_scan(k_max: int) -> list[tuple[int, str, str]]:
    """(k, old, new) whenever a different family becomes strictly best.

    On a tie the family already in the lead keeps it.
    """
    if k_max < 1:
        raise ValueError("k_max must be positive")
    out = []
    current = upper_bound_report(1).best_family
    for k in range(2, k_max + 1):
        r = upper_bound_report(k)
        if current not in r.best_families:
            out.append((k, current, r.best_family))
            current = r.best_family
    return out


def first_strict_win(k_max: int, new: str = "ten-thirds", old: str = "seven-halves") -> dict[int, int | None]:
    """For each residue of k mod 3, the least applicable k <= k_max where
    ``new`` is strictly below ``old``."""
    out: dict[int, int | None] = {0: None, 1: None, 2: None}
    mins = family_min_k()
    for k in range(max(1, mins[new]), k_max + 1):
        v = family_values(k)
        if v[new] < v[old] and out[k % 3] is None:
            out[k % 3] = k
    return out
