import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boxfree import BinaryMatrix
from boxfree.constructions import build_band_4k5, build_even_middle
from boxfree.verify import (
    SizeError,
    brute_force_zero_minor,
    check_row_surplus,
    find_zero_minor,
    has_zero_minor,
    surplus_violation,
)
from known_matrices import FIVE_LEFT, FIVE_RIGHT, NINE_LEFT, NINE_RIGHT, SEVEN, SIX_TEN


def random_matrix(rng, r, c, p):
    return BinaryMatrix(r, c, tuple(sum(1 << j for j in range(c) if rng.random() < p) for _ in range(r)))


def test_all_zero_witness():
    w = find_zero_minor(BinaryMatrix.zeros(3), 2)
    assert w.rows == (0, 1) and w.cols == (0, 1)


@pytest.mark.parametrize("a,k", [(FIVE_LEFT, 2), (FIVE_RIGHT, 2), (SIX_TEN, 3), (SEVEN, 3),
                                 (NINE_LEFT, 4), (NINE_RIGHT, 4)])
def test_known_matrices_have_no_zero_minor(a, k):
    assert find_zero_minor(a, k) is None
    assert brute_force_zero_minor(a, k) is None


def test_seven_every_deletion_breaks_it():
    for i, j in SEVEN.cells():
        b = SEVEN.with_cell(i, j, 0)
        w = brute_force_zero_minor(b, 3)
        assert w is not None and w.validate(b)
        assert find_zero_minor(b, 3) == w


def test_identity_cases():
    i4 = BinaryMatrix.identity(4)
    w = brute_force_zero_minor(i4, 2)
    assert w.rows == (0, 1) and w.cols == (2, 3)
    assert brute_force_zero_minor(i4, 3) is None
    assert find_zero_minor(i4, 3) is None


@pytest.mark.parametrize("method", ["dfs", "dp", "auto"])
def test_methods_agree_with_brute_force(method):
    rng = random.Random(7)
    for _ in range(500):
        a = random_matrix(rng, 6, 6, rng.random())
        assert find_zero_minor(a, 3, method) == brute_force_zero_minor(a, 3)


@settings(max_examples=200)
@given(st.integers(2, 9), st.integers(2, 9), st.floats(0, 1), st.randoms())
def test_witness_matches_oracle_rectangular(r, c, p, rnd):
    a = random_matrix(rnd, r, c, p)
    for k in range(1, min(r, c) + 1):
        w = find_zero_minor(a, k)
        assert w == brute_force_zero_minor(a, k)
        if w is not None:
            assert w.validate(a) and w.k == k


def test_dp_on_large_banded_matrix():
    small = build_band_4k5(12).matrix
    assert not has_zero_minor(small, 12, "dp")
    assert not has_zero_minor(small, 12, "dfs")
    bm = build_band_4k5(40).matrix
    assert not has_zero_minor(bm, 40, "dp")
    assert not has_zero_minor(bm, 40, "auto")
    broken = bm.with_cell(*bm.cells()[-1], 0)
    w = find_zero_minor(broken, 40)
    assert w is not None and w.validate(broken)


def test_bad_k_and_method():
    with pytest.raises(ValueError):
        find_zero_minor(SEVEN, 0)
    with pytest.raises(ValueError):
        find_zero_minor(SEVEN, 8)
    with pytest.raises(ValueError):
        find_zero_minor(SEVEN, 2, method="magic")


def test_brute_force_size_guard():
    with pytest.raises(SizeError):
        brute_force_zero_minor(BinaryMatrix.zeros(60), 20)


def test_block_surplus():
    assert check_row_surplus(build_even_middle(3).inner_block, 1)
    assert check_row_surplus(build_band_4k5(4).inner_block, 2)
    for k in range(2, 12):
        assert check_row_surplus(build_even_middle(k).inner_block, 1)
        assert check_row_surplus(build_band_4k5(k).inner_block, 2)


def test_surplus_counting_limit():
    b = build_even_middle(3).inner_block
    assert not check_row_surplus(b, 1, max_size=4)
    assert surplus_violation(b, 1, max_size=4) == (0, 1, 2, 3)


def test_zero_row_fails_surplus():
    a = BinaryMatrix.from_rows([[1, 0], [0, 0]])
    assert not check_row_surplus(a, 0)
    bad = surplus_violation(a, 0)
    assert bad is not None and 1 in bad
