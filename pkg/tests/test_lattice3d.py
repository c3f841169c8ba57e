import itertools
import random

import pytest

from boxfree.lattice3d import (
    GridSymmetry,
    PointSet3,
    apply_symmetry,
    boxes,
    canonical_form_3d,
    enumerate_min_marks_3d,
    exhaustive_hitting_sets,
    find_unhit_box,
    hits_all_boxes,
    hits_all_rectangles,
    layer_count_lower_bound,
    side_diagram,
    side_diagrams_ok,
    solve_min_marks_2d,
    solve_min_marks_2d_certificate,
    solve_min_marks_3d,
    solve_min_marks_3d_witness,
)
from boxfree.verify import SizeError


def random_set(n, rng, size):
    pts = [(x, y, z) for x in range(n) for y in range(n) for z in range(n)]
    return PointSet3(n, rng.sample(pts, size))


def test_unhit_box_examples():
    w = find_unhit_box(PointSet3(2))
    assert (w.xs, w.ys, w.zs) == ((0, 1), (0, 1), (0, 1))
    assert len(w.corners()) == 8
    assert find_unhit_box(PointSet3(2, [(0, 0, 0)])) is None
    assert sum(1 for _ in boxes(3)) == 27


def test_no_four_point_hitting_set_at_three():
    assert exhaustive_hitting_sets(3, 4) == []
    assert len(exhaustive_hitting_sets(3, 5)) > 0


def test_point_validation():
    with pytest.raises(ValueError):
        PointSet3(2, [(0, 0, 2)])
    with pytest.raises(ValueError):
        PointSet3(0)


@pytest.mark.parametrize("n,value", [(2, 1), (3, 5)])
def test_small_minima(n, value):
    r = solve_min_marks_3d(n)
    assert r.value == value and r.order == n ** 3 - value
    assert hits_all_boxes(r.certificate) and len(r.certificate) == value
    assert solve_min_marks_3d_witness(n).value == value


def test_four_is_fifteen():
    r = solve_min_marks_3d(4)
    assert r.value == 15 and r.order == 49
    assert hits_all_boxes(r.certificate)


def test_three_dimensional_size_guard():
    with pytest.raises(SizeError):
        solve_min_marks_3d(5)
    with pytest.raises(SizeError):
        canonical_form_3d(PointSet3(5))


@pytest.mark.parametrize("n,value", [(2, 1), (3, 3), (4, 7), (5, 13)])
def test_min_marks_2d(n, value):
    assert solve_min_marks_2d(n) == value
    m, marks = solve_min_marks_2d_certificate(n)
    assert hits_all_rectangles(n, marks) and len(marks) == m


def test_side_diagram_examples():
    s = PointSet3(3, [(0, 1, 0), (2, 2, 0)])
    assert side_diagram(s, 2, 0, 1) == frozenset({(0, 1), (2, 2)})
    assert side_diagram(PointSet3(3), 0, 0, 2) == frozenset()
    with pytest.raises(ValueError):
        side_diagram(s, 2, 1, 1)


def test_side_diagrams_of_optimal_three():
    cert = solve_min_marks_3d(3).certificate
    for axis in range(3):
        for i, j in itertools.combinations(range(3), 2):
            assert hits_all_rectangles(3, side_diagram(cert, axis, i, j))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_side_diagrams_match_box_check(n):
    rng = random.Random(n)
    agree_true = 0
    for _ in range(200):
        s = random_set(n, rng, rng.randint(0, n ** 3 // 2 + 2))
        ok = hits_all_boxes(s)
        assert side_diagrams_ok(s) == ok
        agree_true += ok
    assert agree_true > 0


def test_symmetry_action():
    rng = random.Random(11)
    cert = solve_min_marks_3d(3).certificate
    assert apply_symmetry(GridSymmetry.identity(3), cert) == cert
    for _ in range(30):
        g = GridSymmetry.random(3, rng)
        h = GridSymmetry.random(3, rng)
        assert hits_all_boxes(apply_symmetry(g, cert))
        assert apply_symmetry(g.compose(g.inverse()), cert) == cert
        assert apply_symmetry(g.compose(h), cert) == apply_symmetry(g, apply_symmetry(h, cert))
        assert canonical_form_3d(apply_symmetry(g, cert)) == canonical_form_3d(cert)


def test_orbit_classes_small():
    singles = {canonical_form_3d(PointSet3(2, [p])) for p in itertools.product(range(2), repeat=3)}
    assert len(singles) == 1
    forms, complete = enumerate_min_marks_3d(2, 1)
    assert complete and len(forms) == 1
    raw = exhaustive_hitting_sets(3, 5)
    assert len({canonical_form_3d(PointSet3.from_codes(3, c)) for c in raw}) == 1
    forms, complete = enumerate_min_marks_3d(3, 5)
    assert complete and len(forms) == 1


def test_enumeration_at_four():
    forms, complete = enumerate_min_marks_3d(4, 15)
    assert complete and len(forms) == 1


def test_layer_bounds():
    assert layer_count_lower_bound(2) == 1
    assert layer_count_lower_bound(3) == 5
    assert layer_count_lower_bound(4) == 15
    assert layer_count_lower_bound(4, 7) == 15


def test_json_roundtrip():
    s = PointSet3(3, [(2, 1, 0), (0, 0, 1)])
    assert s.to_json() == [[0, 0, 1], [2, 1, 0]]
    assert PointSet3.from_codes(3, s.codes()) == s
