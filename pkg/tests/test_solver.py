import pytest

from boxfree import BinaryMatrix
from boxfree.canonical import are_equivalent, canonical_form
from boxfree.constructions import build_even_middle
from boxfree.solver import (
    TABLE,
    enumerate_optima,
    known_upper,
    lower_bound,
    solve_alpha,
    solve_alpha_witness,
    table_cells,
    verify_table,
)
from boxfree.verify import find_zero_minor
from oracles import brute_alpha, brute_classes


@pytest.mark.parametrize("k,n,value", [(2, 4, 7), (3, 6, 10), (2, 5, 13), (3, 7, 16), (1, 4, 16), (5, 5, 1)])
def test_solve_examples(k, n, value):
    r = solve_alpha(k, n, budget=60)
    assert r.value == value
    assert r.certificate.ones_count == value
    assert find_zero_minor(r.certificate, k) is None
    assert r.stats.refuted_up_to == value - 1


@pytest.mark.parametrize("n", range(1, 6))
def test_against_brute_force(n):
    for k in range(1, n + 1):
        assert solve_alpha(k, n).value == brute_alpha(k, n)


@pytest.mark.parametrize("n", range(2, 6))
def test_witness_strategy_agrees(n):
    # (2, 5) takes over a minute under witness branching
    for k in range(3 if n == 5 else 2, n + 1):
        w = solve_alpha_witness(k, n, budget=60)
        assert w.value == solve_alpha(k, n).value
        assert find_zero_minor(w.certificate, k) is None


def test_lower_bound_examples():
    assert lower_bound(2, 4) >= 4
    cert = solve_alpha(3, 6).certificate
    assert lower_bound(3, 6, cert) == cert.ones_count
    assert lower_bound(5, 5) >= 1
    for n in range(2, 8):
        for k in range(1, n + 1):
            if (k, n) in TABLE:
                assert lower_bound(k, n) <= TABLE[(k, n)]


def test_known_upper_is_valid():
    for k, n in [(2, 5), (3, 7), (4, 9), (2, 6)]:
        ub, m = known_upper(k, n)
        assert m.ones_count == ub and find_zero_minor(m, k) is None


def test_bad_arguments():
    with pytest.raises(ValueError):
        solve_alpha(3, 2)
    with pytest.raises(ValueError):
        solve_alpha(0, 2)


def test_budget_exhaustion_reports_bounds():
    r = solve_alpha(4, 12, budget=0.2)
    assert not r.exact and r.value is None
    assert r.lower <= r.upper


@pytest.mark.parametrize("k,n,value", [(2, 3, 3), (2, 4, 7), (3, 4, 3), (2, 5, 13), (3, 5, 5)])
def test_enumeration_matches_brute_force_classes(k, n, value):
    e = enumerate_optima(k, n, value)
    assert e.complete
    assert len(e.forms) == brute_classes(k, n, value)


def test_enumeration_examples():
    e = enumerate_optima(2, 4, 7)
    assert len(e.forms) == 1
    assert are_equivalent(build_even_middle(2).matrix, e.forms[0].matrix())
    assert len(enumerate_optima(3, 6, 10).forms) == 1
    assert len(enumerate_optima(3, 7, 16).forms) == 1


def test_enumerated_forms_are_valid_and_distinct():
    e = enumerate_optima(4, 9, 20)
    assert e.complete and len(e.forms) >= 2
    assert len({f.digest for f in e.forms}) == len(e.forms)
    for f in e.forms:
        m = f.matrix()
        assert m.ones_count == 20 and find_zero_minor(m, 4) is None
        assert canonical_form(m) == f


def test_table_ordering_and_diagonal_cells():
    cells = table_cells(7)
    assert cells == sorted(cells, key=lambda c: (c[1], c[0]))
    for c in verify_table(max_n=7):
        assert c.status == "MATCH"
        if 2 * c.k > c.n:
            assert c.result.value == 2 * (c.n - c.k) + 1


def test_alpha_5_10():
    assert solve_alpha(5, 10).value == 16
