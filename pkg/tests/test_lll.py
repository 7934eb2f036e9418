import random
from fractions import Fraction as F
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coversplit.geometry import RationalPoint, Rect, UnitDisk
from coversplit.lll import (
    CellHypergraph,
    CoveringInstance,
    VacuousBound,
    ball_threshold,
    ball_threshold_k,
    build_cell_hypergraph,
    dual_shatter_count,
    edge_intersection_degrees,
    eq1_bound,
    grid_signatures,
    homothet_threshold,
    lll_degree_threshold,
    max_multiplicity,
    random_covering,
    random_family,
    resample_split,
    shatter_neighborhood_bound,
    threshold_table,
    verify_split,
    well_conditioned,
)


def disk(x, y, i):
    return UnitDisk(RationalPoint(F(x), F(y)), None, i)


def cells(edges, vertices=None):
    vs = vertices or sorted({v for e in edges for v in e})
    return CellHypergraph(vs, [tuple(e) for e in edges], [RationalPoint(0, 0)] * len(edges))


# -- cells --------------------------------------------------------------------


def test_disjoint_disks():
    inst = CoveringInstance([disk(0, 0, 1), disk(3, 0, 2)], Rect(-2, -2, 5, 2), 1)
    h = build_cell_hypergraph(inst)
    assert h.edges == [(1,), (2,)]
    assert h.uncovered is not None
    assert max_multiplicity(h) == 1


def test_lens_cells():
    inst = CoveringInstance([disk(0, 0, 1), disk(1, 0, 2)], Rect(-2, -2, 3, 2), 1)
    h = build_cell_hypergraph(inst)
    assert h.edges == [(1,), (1, 2), (2,)]
    assert max_multiplicity(h) == 2
    assert edge_intersection_degrees(h) == [1, 2, 1]


def test_single_disk_multiplicity():
    h = build_cell_hypergraph(CoveringInstance([disk(0, 0, 7)], Rect(0, 0, F(1, 2), F(1, 2)), 1))
    assert h.edges == [(7,)] and h.uncovered is None and max_multiplicity(h) == 1


def test_degrees_of_disjoint_edges():
    assert edge_intersection_degrees(cells([(1,), (2,)])) == [0, 0]


def test_representatives_reproduce_edges():
    inst, h, _ = random_covering(3, m_target=4, n_range=(8, 12))
    by_id = {d.id: d for d in inst.disks}
    for e, p in zip(h.edges, h.representatives):
        got = tuple(sorted(i for i, d in by_id.items() if (d.center.x - p.x) ** 2 + (d.center.y - p.y) ** 2 < 1))
        assert got == e
        assert inst.region.contains(p.x, p.y)
    assert len(set(h.edges)) == len(h.edges)
    assert h.min_edge_size() >= 4


def test_forty_disk_covering():
    rng = random.Random(40)
    pick = lambda: F(rng.randrange(-200, 1201), 1000)  # noqa: E731
    inst = CoveringInstance([disk(pick(), pick(), i) for i in range(40)], Rect(0, 0, 1, 1), 4)
    h = build_cell_hypergraph(inst)
    assert h.uncovered is None and h.min_edge_size() >= 4
    g = np.linspace(0, 1, 257)
    gx, gy = np.meshgrid(g, g)
    cnt = np.zeros(gx.shape, dtype=int)
    for d in inst.disks:
        cnt += (gx - float(d.center.x)) ** 2 + (gy - float(d.center.y)) ** 2 < 1
    # the grid can only miss thin cells, so it stays within the exact range
    assert h.min_edge_size() <= cnt.min() and cnt.max() <= max_multiplicity(h)
    res = resample_split(h, 2, seed=40)
    assert res.success and verify_split(inst, res.colors, 2, h).ok
    n_deg = max(edge_intersection_degrees(h))
    assert n_deg <= len(h.edges) - 1 <= shatter_neighborhood_bound(max_multiplicity(h))


def test_covering_json_round_trip():
    inst, _, _ = random_covering(1)
    back = CoveringInstance.from_dict(inst.to_dict())
    assert back.to_dict() == inst.to_dict()


def test_duplicate_ids_rejected():
    data = CoveringInstance([disk(0, 0, 1), disk(1, 0, 1)], Rect(0, 0, 1, 1), 1).to_dict()
    with pytest.raises(ValueError):
        CoveringInstance.from_dict(data)


# -- thresholds ---------------------------------------------------------------


@pytest.mark.parametrize("k,m,value", [(2, 10, F(128)), (2, 3, F(1)), (3, 5, F(81, 128))])
def test_lll_degree_examples(k, m, value):
    assert lll_degree_threshold(k, m) == value


def test_lll_degree_k2_is_power_of_two():
    for m in range(2, 65):
        assert lll_degree_threshold(2, m) == 2 ** (m - 3)


def test_ball_threshold_examples():
    b = ball_threshold(2, 20)
    assert b.exponent == F(9, 2) and b.floor == 22
    b = ball_threshold(2, 11)
    assert b.exponent == 0 and b.floor == 1


@given(st.integers(2, 5), st.integers(1, 200))
def test_ball_threshold_exponent_formula(d, m):
    # c_d 2^(m/d) with c_d = 2^(-2d - 3/d)
    assert ball_threshold(d, m).exponent == F(m, d) - 2 * d - F(3, d)


@given(st.integers(2, 5), st.integers(2, 4), st.integers(2, 60))
def test_ball_threshold_k_power(k, d, m):
    b = ball_threshold_k(k, d, m)
    # (k^(-1/d) 4^(-d-1/d) (k/(k-1))^(m/d))^d
    assert b.radicand == F(1, k) * F(1, 4 ** (d * d + 1)) * F(k, k - 1) ** m
    assert b.floor**d <= b.radicand < (b.floor + 1) ** d


def test_k2_ball_variant_agrees_with_plain_bound_at_d2():
    # for k = 2 the two constants give the same number
    for m in range(3, 40):
        assert ball_threshold_k(2, 2, m).floor == ball_threshold(2, m).floor


@pytest.mark.parametrize("m,value", [(11, 1), (12, 1), (13, 2), (21, 32)])
def test_homothet_threshold(m, value):
    assert homothet_threshold(m) == value


def test_homothet_vacuous_below_11():
    with pytest.raises(VacuousBound):
        homothet_threshold(10)


def test_threshold_monotone_in_m():
    prev = None
    for m in range(11, 40):
        t = threshold_table(2, m)
        if prev is not None:
            assert t.values["lll_degree"] > prev.values["lll_degree"]
            assert t.values["ball_exponent"] > prev.values["ball_exponent"]
            assert t.values["homothet"] >= prev.values["homothet"]
        prev = t


def test_shatter_neighborhood_bound():
    # pi(M (2D)^d) with pi(n) = n^2, D = 2, d = 2
    assert shatter_neighborhood_bound(3) == (3 * 16) ** 2


# -- resampling ---------------------------------------------------------------


def test_resample_path():
    h = cells([(1, 2), (2, 3)])
    res = resample_split(h, 2, seed=4)
    assert res.success
    assert all(len({res.colors[v] for v in e}) == 2 for e in h.edges)


def test_resample_singleton_edge_fails_at_once():
    res = resample_split(cells([(1,)]), 2, seed=0)
    assert not res.success and res.rounds == 0 and res.stuck == [(1,)]


def test_resample_round_limit_reports_stuck_edge():
    # both edges {1,2}, {1,3}, {2,3} cannot all be bichromatic with 2 colors
    res = resample_split(cells([(1, 2), (1, 3), (2, 3)]), 2, seed=0, max_rounds=50)
    assert not res.success and res.rounds == 50 and len(res.stuck) == 1


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 1000))
def test_resample_deterministic(seed):
    inst, h, _ = random_covering(seed % 5)
    a = resample_split(h, 2, seed)
    b = resample_split(h, 2, seed)
    assert a == b
    assert a.success and verify_split(inst, a.colors, 2, h).ok


def test_three_colors():
    inst, h, _ = random_covering(2, m_target=10)
    res = resample_split(h, 3, seed=1)
    assert res.success and verify_split(inst, res.colors, 3, h).ok


def test_verify_split_stacked_disks():
    inst = CoveringInstance([disk(0, 0, 1), disk(0, F(1, 10), 2)], Rect(0, 0, F(1, 10), F(1, 10)), 2)
    assert verify_split(inst, {1: 0, 2: 1}, 2).ok
    rep = verify_split(inst, {1: 0, 2: 0}, 2)
    assert not rep.ok and {cl for _, cl in rep.failures} == {1}


# -- dual shatter -------------------------------------------------------------


def test_eq1_values():
    assert eq1_bound(2) == 4
    assert eq1_bound(1) == 2
    for n in range(1, 30):
        assert eq1_bound(n) == comb(n - 1, 2) + 1 + n + comb(n, 2) == n * n - n + 2


def test_shatter_small():
    assert dual_shatter_count([(0, 0), (1, 0)]) == 4
    assert dual_shatter_count([(0, 0)]) == 2


def test_shatter_eight_random_disks():
    cs = random_family(8, n_max=8)
    assert dual_shatter_count(cs) <= len(cs) ** 2 - len(cs) + 2


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_grid_never_finds_a_missing_cell(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 7)
    cs = [(F(rng.randrange(3001), 1000), F(rng.randrange(3001), 1000)) for _ in range(n)]
    from coversplit.arrangement import enumerate_cells

    cand = set(enumerate_cells(cs, include_outside=True))
    assert grid_signatures(cs, F(1, 64)) <= cand
    assert len(cand) <= eq1_bound(n)


def test_well_conditioned_rejects_near_tangent_pairs():
    assert not well_conditioned([(0, 0), (F(2001, 1000), 0)])
    assert well_conditioned([(0, 0), (1, 0)])
