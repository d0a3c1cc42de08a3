import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dsteiner import (
    PointSet,
    build_hanan_grid,
    generate_random_points,
    solve,
    validate_tree,
)
from dsteiner.errors import GridTooLarge
from dsteiner.hanan import hanan_grid_size, parse_points, write_points

from gen import rectilinear_smt_bruteforce


def grid_counts(points: PointSet) -> tuple[int, int]:
    counts = [len({p[i] for p in points.points}) for i in range(points.dimension)]
    v = 1
    for c in counts:
        v *= c
    e = sum((c - 1) * (v // c) for c in counts)
    return v, e


def test_single_point_grid():
    inst, mapping = build_hanan_grid(PointSet(3, [(5, 5, 5)]))
    assert (inst.n, inst.m, inst.k) == (1, 0, 1)
    assert mapping[(5, 5, 5)] == 0


def test_two_points_2d():
    inst, _ = build_hanan_grid(PointSet(2, [(0, 0), (3, 4)]))
    assert (inst.n, inst.m) == (4, 4)
    rec = solve(inst)
    assert rec.opt == 7  # L1 distance


def test_duplicate_points_one_terminal():
    inst, mapping = build_hanan_grid(PointSet(2, [(1, 2), (1, 2), (4, 6)]))
    assert inst.k == 2
    assert mapping[(1, 2)] == mapping[(1, 2)]


def test_counts_formula_with_repeats():
    pts = PointSet(3, [(0, 0, 0), (0, 1, 2), (1, 0, 2), (1, 1, 0)])
    inst, _ = build_hanan_grid(pts)
    v, e = grid_counts(pts)
    assert (inst.n, inst.m) == (v, e)
    assert (v, e) == hanan_grid_size(pts)


@given(
    st.lists(
        st.tuples(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6)),
        min_size=1,
        max_size=8,
    )
)
@settings(max_examples=40, deadline=None)
def test_counts_formula_property(raw_points):
    pts = PointSet(3, raw_points)
    inst, mapping = build_hanan_grid(pts)
    assert (inst.n, inst.m) == grid_counts(pts)
    # every input point maps onto a terminal with matching coordinates
    for p in raw_points:
        vid = mapping[p]
        assert inst.coords[vid] == p
        assert vid in inst.terminals


@pytest.mark.parametrize("seed", range(6))
def test_grid_optimum_matches_rectilinear_bruteforce(seed):
    pts = generate_random_points(2, 4, 9, seed)
    unique = list(dict.fromkeys(pts.points))
    inst, _ = build_hanan_grid(pts)
    rec = solve(inst)
    assert validate_tree(inst, rec.edges) == rec.opt
    assert rec.opt == rectilinear_smt_bruteforce(unique)


def test_random_points_deterministic():
    a = generate_random_points(3, 40, 999, 11)
    b = generate_random_points(3, 40, 999, 11)
    assert a.points == b.points
    assert generate_random_points(3, 40, 999, 12).points != a.points


def test_random_points_grid_at_most_k_cubed():
    pts = generate_random_points(3, 40, 999, 5)
    v, e = hanan_grid_size(pts)
    assert v <= 40 ** 3
    counts = [len({p[i] for p in pts.points}) for i in range(3)]
    assert v == counts[0] * counts[1] * counts[2]


def test_grid_too_large():
    pts = generate_random_points(3, 30, 10 ** 6, 1)
    with pytest.raises(GridTooLarge):
        build_hanan_grid(pts, vertex_cap=1000)


def test_dimension_must_be_at_least_two():
    with pytest.raises(ValueError):
        PointSet(1, [(3,)])


def test_point_file_roundtrip():
    pts = generate_random_points(4, 7, 99, 3)
    again = parse_points(write_points(pts))
    assert again.dimension == 4
    assert again.points == pts.points


def test_point_file_count_checked():
    with pytest.raises(ValueError):
        parse_points("2 3\n1 2\n3 4\n")


def test_vertex_ids_row_major_deterministic():
    pts = PointSet(2, [(0, 0), (2, 1)])
    inst1, m1 = build_hanan_grid(pts)
    inst2, m2 = build_hanan_grid(PointSet(2, [(2, 1), (0, 0)]))
    # same geometry, same ids, terminal order follows input order
    assert m1 == m2
    assert dict(inst1.graph.edges()) == dict(inst2.graph.edges())
    assert inst1.terminals == list(reversed(inst2.terminals))
