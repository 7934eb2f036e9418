from fractions import Fraction as F

import numpy as np
import pytest

from coversplit.geometry import RationalPoint, UnitDisk, contains, sq_dist
from coversplit.hypergraph import Colorability, build_hypergraph, is_two_colorable
from coversplit.realization import (
    CapacityError,
    ExtendedPointSet,
    Realization,
    add_escape_points,
    build_realization,
    check_no_foreign_disk_inside_union,
    extend_with_grid,
    find_escape_points,
    hypergraph_incidence,
    incidence_matrix,
    is_exposed,
    min_disk_coverage,
    realized_hypergraph,
    verify_realization,
)
from coversplit.svg import export_svg, render_svg


@pytest.mark.parametrize("k,l", [(1, 1), (1, 4), (4, 1), (2, 2), (2, 3), (3, 3), (4, 3)])
def test_realization_verifies(k, l):
    r = build_realization(k, l, F(1, 100))
    rep = verify_realization(r)
    assert rep.ok, list(rep.lines())
    assert (incidence_matrix(r) == hypergraph_incidence(build_hypergraph(k, l))).all()


@pytest.mark.parametrize("eps", [F(1, 11), F(1, 1000), F(3, 700)])
def test_other_eps(eps):
    assert verify_realization(build_realization(2, 3, eps)).ok


def test_sizes():
    r = build_realization(2, 2)
    assert len(r.points) == 5 and len(r.disks) == 6


def test_translated_copy_verifies_with_translated_boxes():
    r = build_realization(3, 2)
    t = r.translated(F(7, 3), F(-5, 11))
    assert verify_realization(t).ok
    assert not verify_realization(t, origin=RationalPoint(0, 0)).properties[3].passed


def test_moving_a_blue_disk_breaks_property_five():
    r = build_realization(2, 2)
    disks = list(r.disks)
    i = next(j for j, d in enumerate(disks) if d.color.value == "B")
    disks[i] = disks[i].translated(0, 2)
    bad = Realization(r.hypergraph, r.points, disks, r.eps, r.origin)
    rep = verify_realization(bad)
    assert not rep.properties[5].passed
    assert rep.properties[5].witnesses[0][0] == disks[i].id


def test_json_round_trip():
    r = build_realization(2, 3)
    assert Realization.from_dict(r.to_dict()).to_dict() == r.to_dict()


def test_eps_range():
    with pytest.raises(ValueError):
        build_realization(2, 2, F(1, 10))


def test_capacity_guard():
    with pytest.raises(CapacityError):
        build_realization(6, 5)


def test_realized_incidences_not_colorable():
    r = build_realization(3, 3)
    assert is_two_colorable(realized_hypergraph(r)).status is Colorability.NOT_COLORABLE


# -- exposedness --------------------------------------------------------------


def test_exposed_examples():
    far = [UnitDisk(RationalPoint(0, 0), id=0), UnitDisk(RationalPoint(3, 0), id=1)]
    near = [UnitDisk(RationalPoint(0, 0), id=0), UnitDisk(RationalPoint(0, F(1, 2)), id=1)]
    assert is_exposed(far)
    assert not is_exposed(near)
    assert is_exposed(build_realization(3, 3).disks)


# -- extension and coverage ---------------------------------------------------


def test_single_disk_grid():
    h = build_hypergraph(1, 1)
    r = Realization(h, [RationalPoint(0, 0)], [UnitDisk(RationalPoint(0, F(1, 2)), None, 0)], F(1), RationalPoint(0, 0))
    e = extend_with_grid(r, step=F(1, 2), pad=F(2))
    assert e.extra_points
    assert all(sq_dist(0, F(1, 2), p.x, p.y) >= 1 for p in e.extra_points)


def test_pad_must_be_at_least_two():
    with pytest.raises(ValueError):
        extend_with_grid(build_realization(1, 1), m=2, pad=F(1))


def test_extension_points_avoid_member_disks():
    r = build_realization(2, 2)
    e = extend_with_grid(r, m=2, step=F(1, 8))
    assert not any(contains(d, p) for d in r.disks for p in e.extra_points)
    # forced monochromatic disks unchanged: incidences on base points only
    assert is_two_colorable(realized_hypergraph(r)).status is Colorability.NOT_COLORABLE


def test_coverage_counts_match_direct_count():
    r = build_realization(2, 2)
    e = extend_with_grid(r, m=2, step=F(1, 4))
    probes = [RationalPoint(F(i, 3), F(j, 5)) for i in range(-4, 5) for j in range(-6, 7)]
    rep = min_disk_coverage(e, 2, probes=probes)
    direct = min(sum(1 for p in e.all_points if sq_dist(c.x, c.y, p.x, p.y) < 1) for c in probes)
    assert rep.minimum == direct
    lattice = min_disk_coverage(e, 2, probe_step=F(1, 4))
    pts = np.array([[float(p.x), float(p.y)] for p in e.all_points])
    box = e.probe_box()
    worst = None
    for i in range(int(box.x0 * 4), int(box.x1 * 4) + 1, 3):
        for j in range(int(box.y0 * 4), int(box.y1 * 4) + 1, 3):
            c = RationalPoint(F(i, 4), F(j, 4))
            if not box.contains(c.x, c.y):
                continue
            n = sum(1 for p in e.all_points if sq_dist(c.x, c.y, p.x, p.y) < 1)
            worst = n if worst is None else min(worst, n)
    assert lattice.minimum <= worst
    assert len(pts) == len(e.all_points)


def test_empty_extension_leaves_far_probes_empty():
    r = build_realization(2, 2)
    e = ExtendedPointSet(r, [], F(1, 8), r.bounding_box().expanded(5))
    rep = min_disk_coverage(e, 2, probes=[RationalPoint(3, 3)])
    assert rep.minimum == 0


def test_probe_at_member_center_holds_k_points():
    r = build_realization(3, 2)
    e = ExtendedPointSet(r, [], F(1, 8), r.bounding_box().expanded(3))
    for d in r.disks:
        n = min_disk_coverage(e, 1, probes=[d.center]).minimum
        assert n >= (r.k if d.color.value == "R" else r.l)


@pytest.mark.parametrize("m", [2, 3])
def test_extended_coverage_reaches_m(m):
    r = build_realization(m, m)
    e = add_escape_points(extend_with_grid(r, m), m, F(1, 16))
    assert min_disk_coverage(e, m, F(1, 16)).minimum >= m
    assert not any(contains(d, p) for d in r.disks for p in e.extra_points)


def test_extended_json_round_trip():
    e = extend_with_grid(build_realization(1, 2), 2, F(1, 4))
    assert ExtendedPointSet.from_dict(e.to_dict()).to_dict() == e.to_dict()


# -- escape points -----------------------------------------------------------


def test_escape_from_a_single_disk():
    disks = [UnitDisk(RationalPoint(0, 0), None, 0)]
    pts = find_escape_points(disks, RationalPoint(F(1, 2), 0), 1)
    assert pts
    p = pts[0]
    assert sq_dist(F(1, 2), 0, p.x, p.y) < 1 and sq_dist(0, 0, p.x, p.y) >= 1


def test_escape_near_a_member_center():
    r = build_realization(2, 2)
    d = r.disks[0]
    probe = RationalPoint(d.center.x, d.center.y + r.eps**3)
    rep = check_no_foreign_disk_inside_union(r, [probe, d.center])
    (_, p, note), (_, q, skipped) = rep.results
    assert p is not None and not any(contains(x, p) for x in r.disks)
    assert q is None and skipped.startswith("skipped")
    assert rep.exposed and rep.all_escaped


# -- svg ---------------------------------------------------------------------


@pytest.mark.parametrize("k,l,circles,dots", [(2, 2, 6, 5), (1, 3, 4, 3)])
def test_svg_counts(k, l, circles, dots):
    text = render_svg(build_realization(k, l))
    assert text.count('class="disk"') == circles
    assert text.count('class="point"') == dots
    assert text.count('class="eps-box"') == 3


def test_svg_extended_and_deterministic(tmp_path):
    e = extend_with_grid(build_realization(1, 1), 2, F(1, 2))
    text = render_svg(e)
    assert text.count('class="grid"') == len(e.extra_points)
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    export_svg(e, 100, a)
    export_svg(e, 100, b)
    assert a.read_bytes() == b.read_bytes()
