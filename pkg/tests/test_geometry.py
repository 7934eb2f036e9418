from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from coversplit.arrangement import DiskArrangement, enumerate_cells
from coversplit.geometry import RationalPoint, Rect, UnitDisk, contains, in_closure, sq_dist, unit_side

coords = st.fractions(min_value=-5, max_value=5, max_denominator=1000)


@pytest.mark.parametrize(
    "p,expected",
    [((0, 0), True), ((1, 0), False), ((F(3, 5), F(4, 5)), False), ((F(3, 5), F(79, 100)), True)],
)
def test_open_disk_boundary_excluded(p, expected):
    d = UnitDisk(RationalPoint(0, 0))
    assert contains(d, RationalPoint(*p)) is expected


def test_closure_includes_boundary():
    d = UnitDisk(RationalPoint(0, 0))
    assert in_closure(d, RationalPoint(F(3, 5), F(4, 5)))
    assert not in_closure(d, RationalPoint(F(3, 5), F(81, 100)))


@given(coords, coords, coords, coords)
def test_unit_side_agrees_with_squared_distance(cx, cy, px, py):
    d2 = sq_dist(cx, cy, px, py)
    assert unit_side(cx, cy, px, py) == (d2 > 1) - (d2 < 1)


def test_extreme_points():
    d = UnitDisk(RationalPoint(F(1, 3), F(-2)))
    assert d.top == RationalPoint(F(1, 3), F(-1))
    assert d.bottom == RationalPoint(F(1, 3), F(-3))


def test_rect():
    r = Rect.bounding([RationalPoint(0, 1), RationalPoint(2, -1)])
    assert (r.x0, r.y0, r.x1, r.y1) == (0, -1, 2, 1)
    assert r.contains(2, 1) and not r.contains(F(21, 10), 0)
    assert r.expanded(1) == Rect(-1, -2, 3, 2)


# -- arrangement ------------------------------------------------------------


def test_two_disjoint_disks():
    cells = enumerate_cells([(0, 0), (3, 0)], include_outside=True)
    assert set(cells) == {frozenset(), frozenset({0}), frozenset({1})}


def test_lens():
    cells = enumerate_cells([(0, 0), (1, 0)], include_outside=True)
    assert set(cells) == {frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 1})}


def test_tangent_disks_have_no_common_cell():
    cells = enumerate_cells([(0, 0), (2, 0)], include_outside=True)
    assert set(cells) == {frozenset(), frozenset({0}), frozenset({1})}


def test_three_disk_venn():
    # centers on a small triangle: all 7 nonempty regions plus the outside
    cells = enumerate_cells([(0, 0), (1, 0), (F(1, 2), F(4, 5))], include_outside=True)
    assert len(cells) == 8


def test_cell_hidden_below_a_circle_top():
    # the region outside disk 0 but inside 1 and 2 lies above 0's top
    cells = enumerate_cells([(0, 0), (F(-7, 10), F(17, 10)), (F(7, 10), F(17, 10))])
    assert frozenset({1, 2}) in cells


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(coords, coords), min_size=1, max_size=5, unique=True))
def test_representatives_reproduce_signatures(centers):
    arr = DiskArrangement(centers)
    for sig, (x, y) in enumerate_cells(centers, include_outside=True).items():
        exact = frozenset(i for i, (cx, cy) in enumerate(centers) if sq_dist(cx, cy, x, y) < 1)
        assert exact == sig
        assert arr.signature(x, y) == sig


def test_region_clipping_keeps_only_cells_meeting_the_rectangle():
    region = Rect(F(-1, 10), F(-1, 10), F(1, 10), F(1, 10))
    cells = enumerate_cells([(0, 0), (3, 0)], region=region)
    assert set(cells) == {frozenset({0})}
    for x, y in cells.values():
        assert region.contains(x, y)
