import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boxfree import BinaryMatrix, permute, transpose
from boxfree.canonical import (
    are_equivalent,
    canonical_form,
    canonical_labeling,
    canonical_stats,
    equivalence_mapping,
)
from boxfree.verify import SizeError
from known_matrices import FIVE_LEFT, FIVE_RIGHT, NINE_LEFT, NINE_RIGHT
from oracles import orbit_min


def shuffled(a, rng):
    rp = list(range(a.n_rows))
    cp = list(range(a.n_cols))
    rng.shuffle(rp)
    rng.shuffle(cp)
    return permute(a, rp, cp)


def random_matrix(rng, r, c, p):
    return BinaryMatrix(r, c, tuple(sum(1 << j for j in range(c) if rng.random() < p) for _ in range(r)))


@settings(max_examples=150)
@given(st.integers(1, 4), st.integers(1, 5), st.floats(0, 1), st.randoms())
def test_matches_brute_force_orbit_minimum(r, c, p, rnd):
    a = random_matrix(rnd, r, c, p)
    form = canonical_form(a)
    assert tuple(tuple(row) for row in form.matrix().to_lists()) == orbit_min(a)


def test_identity_orbit():
    rng = random.Random(1)
    for n in (1, 5, 12):
        ref = canonical_form(BinaryMatrix.identity(n))
        for _ in range(5):
            assert canonical_form(shuffled(BinaryMatrix.identity(n), rng)) == ref


def test_displayed_pairs_differ():
    assert canonical_form(FIVE_LEFT) != canonical_form(FIVE_RIGHT)
    assert canonical_form(NINE_LEFT) != canonical_form(NINE_RIGHT)
    assert not are_equivalent(FIVE_LEFT, FIVE_RIGHT)
    assert not are_equivalent(FIVE_LEFT, FIVE_RIGHT, with_transpose=True)
    assert not are_equivalent(NINE_LEFT, NINE_RIGHT, with_transpose=True)


@pytest.mark.parametrize("n", [4, 7, 10, 16])
def test_invariance_and_mapping(n):
    rng = random.Random(n)
    for _ in range(10):
        a = random_matrix(rng, n, n, rng.choice([0.2, 0.5]))
        b = shuffled(a, rng)
        assert canonical_form(a) == canonical_form(b)
        t, rows, cols = equivalence_mapping(a, b)
        assert not t and permute(a, rows, cols) == b


def test_transpose_option():
    rng = random.Random(3)
    a = random_matrix(rng, 6, 6, 0.4)
    b = shuffled(transpose(a), rng)
    assert are_equivalent(a, b, with_transpose=True)
    t, rows, cols = equivalence_mapping(a, b, with_transpose=True)
    src = transpose(a) if t else a
    assert permute(src, rows, cols) == b
    with pytest.raises(ValueError):
        canonical_form(BinaryMatrix.zeros(2, 3), with_transpose=True)


def test_labeling_produces_form():
    rng = random.Random(5)
    a = random_matrix(rng, 8, 8, 0.3)
    form, lab = canonical_labeling(a)
    assert permute(a, lab.row_perm, lab.col_perm) == form.matrix()


def test_form_text_and_digest():
    f = canonical_form(BinaryMatrix.identity(2))
    assert f.text == "2 2\n01\n10\n"
    assert len(f.digest) == 64


def test_symmetric_inputs_are_fast():
    for a in (BinaryMatrix.identity(16), BinaryMatrix.zeros(16)):
        st_ = canonical_stats(a)
        assert st_.leaves < 1000


def test_size_limit_and_mismatch():
    with pytest.raises(SizeError):
        canonical_form(BinaryMatrix.zeros(17))
    assert not are_equivalent(BinaryMatrix.zeros(2), BinaryMatrix.zeros(3))
    assert equivalence_mapping(BinaryMatrix.identity(3), BinaryMatrix.zeros(3)) is None
