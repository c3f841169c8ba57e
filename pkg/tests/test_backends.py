import random

import pytest

from boxfree import _backend
from boxfree import _pykernels as py

compiled = _backend.compiled
needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")


def test_backend_selected():
    assert _backend.BACKEND in ("python", "cython")
    assert _backend.row_module(50) is not None


@needs_compiled
def test_kset_search_agrees():
    rng = random.Random(0)
    for _ in range(300):
        n = rng.randint(3, 12)
        zeros = [rng.getrandbits(n) for _ in range(rng.randint(1, 10))]
        k = rng.randint(1, n)
        need = rng.randint(0, len(zeros))
        start = (1 << n) - 1
        assert py.kset_search(zeros, start, need, k) == compiled.kset_search(zeros, start, need, k)


@needs_compiled
def test_surplus_agrees():
    rng = random.Random(1)
    for _ in range(300):
        n = rng.randint(2, 10)
        sup = [rng.getrandbits(n) for _ in range(rng.randint(1, 10))]
        c = rng.randint(0, 3)
        m = rng.randint(1, len(sup))
        assert py.surplus_violation(sup, c, m) == compiled.surplus_violation(sup, c, m)


@needs_compiled
def test_max_future_zeros_agrees():
    rng = random.Random(2)
    for _ in range(500):
        args = (rng.randint(0, 8), rng.randint(-1, 8), rng.randint(0, 200), rng.randint(1, 5))
        assert py.max_future_zeros(*args) == compiled.max_future_zeros(*args)


@needs_compiled
@pytest.mark.parametrize("k,n,t", [(2, 4, 7), (2, 4, 6), (3, 6, 10), (2, 5, 13), (3, 7, 15)])
def test_row_search_agrees(k, n, t):
    a = py.row_search(n, k, t, find_all=True)
    b = compiled.row_search(n, k, t, find_all=True)
    assert sorted(a[0]) == sorted(b[0]) and a[2] == b[2]
    assert py.row_candidates(n, k, t) == compiled.row_candidates(n, k, t)
