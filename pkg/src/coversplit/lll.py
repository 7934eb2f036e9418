"""Splitting coverings of bounded multiplicity with local-lemma resampling.

Each cell of the arrangement of the covering disks (inside the region) gives
one hyperedge: the set of disks containing that cell.  When every edge has at
least m disks and meets at most k^(m-1) / (4 (k-1)^m) other edges, the disks
can be k-colored with every edge seeing all k colors; the resampling loop
below finds such a coloring.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .arrangement import enumerate_cells
from .geometry import Rect, RationalPoint, UnitDisk, unit_side
from .rational import floor_root, floor_root_of_power_of_two, format_rational, parse_rational


class VacuousBound(ValueError):
    """The threshold is below 1, so it says nothing."""


@dataclass
class CoveringInstance:
    disks: list  # UnitDisk, ids are the labels used in colorings
    region: Rect
    m_target: int

    @property
    def centers(self):
        return [(d.center.x, d.center.y) for d in self.disks]

    def to_dict(self) -> dict:
        r = self.region
        return {
            "region": {k: format_rational(getattr(r, k)) for k in ("x0", "y0", "x1", "y1")},
            "m_target": self.m_target,
            "disks": [
                {"id": d.id, "cx": format_rational(d.center.x), "cy": format_rational(d.center.y)} for d in self.disks
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CoveringInstance":
        r = data["region"]
        disks = [
            UnitDisk(RationalPoint(parse_rational(d["cx"]), parse_rational(d["cy"])), None, int(d["id"]))
            for d in data["disks"]
        ]
        ids = [d.id for d in disks]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate disk ids")
        return cls(disks, Rect(*(parse_rational(r[k]) for k in ("x0", "y0", "x1", "y1"))), int(data["m_target"]))


@dataclass
class CellHypergraph:
    vertices: list  # disk ids
    edges: list  # sorted tuples of disk ids, one per distinct cell signature
    representatives: list  # RationalPoint per edge
    uncovered: RationalPoint | None = None  # a region point in no disk, if any

    def min_edge_size(self) -> int:
        return min((len(e) for e in self.edges), default=0)


def build_cell_hypergraph(c: CoveringInstance) -> CellHypergraph:
    """One edge per nonempty cell meeting the region, with an exact representative."""
    ids = [d.id for d in c.disks]
    cells = enumerate_cells(c.centers, region=c.region)
    items = []
    uncovered = None
    for sig, (x, y) in cells.items():
        if not sig:
            uncovered = RationalPoint(x, y)
            continue
        items.append((tuple(sorted(ids[i] for i in sig)), RationalPoint(x, y)))
    items.sort()
    return CellHypergraph(ids, [e for e, _ in items], [p for _, p in items], uncovered)


def max_multiplicity(h: CellHypergraph) -> int:
    return max((len(e) for e in h.edges), default=0)


def edge_intersection_degrees(h: CellHypergraph) -> list:
    """For each edge, how many other edges share a disk with it."""
    if not h.edges:
        return []
    pos = {v: i for i, v in enumerate(h.vertices)}
    inc = np.zeros((len(h.edges), len(h.vertices)), dtype=np.int32)
    for j, e in enumerate(h.edges):
        inc[j, [pos[v] for v in e]] = 1
    meet = (inc @ inc.T) > 0
    return (meet.sum(axis=1) - 1).astype(int).tolist()


def shatter_neighborhood_bound(M: int, d: int = 2, D: int = 2) -> int:
    """pi(M (2D)^d Vol B^d / v) for unit balls (v = Vol B^d) with pi(n) = n^d."""
    return (M * (2 * D) ** d) ** d


# -- thresholds ---------------------------------------------------------------


def lll_degree_threshold(k: int, m: int) -> Fraction:
    """k^(m-1) / (4 (k-1)^m): the number of other edges an edge may meet."""
    if k < 2 or m < 2:
        raise ValueError("need k >= 2 and m >= 2")
    return Fraction(k ** (m - 1), 4 * (k - 1) ** m)


@dataclass(frozen=True)
class DyadicBound:
    """The real number 2^exponent, with its floor."""

    exponent: Fraction
    floor: int


def ball_threshold(d: int, m: int) -> DyadicBound:
    """c_d 2^(m/d) with c_d = 2^(-2d - 3/d), as an exact power of two."""
    if d < 2:
        raise ValueError("need d >= 2")
    e = Fraction(m - 3, d) - 2 * d
    return DyadicBound(e, floor_root_of_power_of_two(e.numerator, e.denominator))


@dataclass(frozen=True)
class RootBound:
    """The real number q^(1/d), with its floor."""

    radicand: Fraction
    d: int
    floor: int


def ball_threshold_k(k: int, d: int, m: int) -> RootBound:
    """c_{k,d} (1 + 1/(k-1))^(m/d) with c_{k,d} = k^(-1/d) 4^(-d-1/d).

    Its d-th power is k^(m-1) / (4^(d^2+1) (k-1)^m).
    """
    if k < 2 or d < 2:
        raise ValueError("need k >= 2 and d >= 2")
    q = Fraction(k ** (m - 1), 4 ** (d * d + 1) * (k - 1) ** m)
    return RootBound(q, d, floor_root(q, d))


def homothet_threshold(m: int) -> int:
    """floor(2^((m-11)/2)); below m = 11 the bound is under 1 and vacuous."""
    if m < 11:
        raise VacuousBound(f"2^(({m}-11)/2) < 1: the bound is vacuous for m < 11")
    return floor_root_of_power_of_two(m - 11, 2)


@dataclass
class ThresholdTable:
    d: int
    k: int
    m: int
    D: int = 2
    values: dict = field(default_factory=dict)


def threshold_table(k: int, m: int, d: int = 2) -> ThresholdTable:
    t = ThresholdTable(d, k, m)
    t.values["lll_degree"] = lll_degree_threshold(k, m)
    t.values["ball_exponent"] = ball_threshold(d, m).exponent
    t.values["ball_floor"] = ball_threshold(d, m).floor
    t.values["ball_k_floor"] = ball_threshold_k(k, d, m).floor
    try:
        t.values["homothet"] = homothet_threshold(m)
    except VacuousBound:
        t.values["homothet"] = None
    return t


# -- resampling ---------------------------------------------------------------


@dataclass
class SplitResult:
    success: bool
    colors: dict  # disk id -> color index
    rounds: int
    hypothesis_held: bool
    stuck: list = field(default_factory=list)


def _violated(edges, colors, k):
    for j, e in enumerate(edges):
        if len({colors[v] for v in e}) < k:
            return j
    return None


def resample_split(h: CellHypergraph, k: int, seed: int, max_rounds: int = 1_000_000) -> SplitResult:
    """Random k-coloring of the disks, resampling the first edge missing a color."""
    if k < 2:
        raise ValueError("need k >= 2")
    rng = random.Random(seed)
    m = h.min_edge_size()
    degs = edge_intersection_degrees(h)
    held = m >= 2 and max(degs, default=0) <= lll_degree_threshold(k, m)
    colors = {v: rng.randrange(k) for v in h.vertices}
    small = [e for e in h.edges if len(e) < k]
    if small:
        return SplitResult(False, colors, 0, held, small)
    rounds = 0
    while True:
        j = _violated(h.edges, colors, k)
        if j is None:
            return SplitResult(True, colors, rounds, held)
        if rounds >= max_rounds:
            return SplitResult(False, colors, rounds, held, [h.edges[j]])
        for v in h.edges[j]:
            colors[v] = rng.randrange(k)
        rounds += 1


@dataclass
class SplitReport:
    failures: list  # (point, missing color class)
    checked: int

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_split(c: CoveringInstance, colors: dict, k: int, cells: CellHypergraph | None = None) -> SplitReport:
    """Every cell representative in the region is covered by every color class."""
    h = cells if cells is not None else build_cell_hypergraph(c)
    pos = {d.id: d for d in c.disks}
    fails = []
    points = list(h.representatives)
    if h.uncovered is not None:
        points.append(h.uncovered)
    for p in points:
        seen = set()
        for did, d in pos.items():
            if unit_side(d.center.x, d.center.y, p.x, p.y) < 0:
                seen.add(colors[did])
        for cl in range(k):
            if cl not in seen:
                fails.append((p, cl))
    return SplitReport(fails, len(points))


# -- dual shatter function ----------------------------------------------------


def dual_shatter_count(centers) -> int:
    """Number of distinct characteristic vectors over the plane, the all-outside one included."""
    return len(enumerate_cells(centers, include_outside=True))


def eq1_bound(n: int, d: int = 2) -> int:
    """C(n-1, d) + sum_{i<=d} C(n, i)."""
    return comb(n - 1, d) + sum(comb(n, i) for i in range(d + 1))


def grid_signatures(centers, pitch=Fraction(1, 64), margin=Fraction(1)) -> set:
    """Signatures met by a lattice of the given pitch over the disks' bounding box.

    Used as an independent check of the cell enumeration: floats decide clear
    cases and exact arithmetic decides points near a circle.
    """
    if not centers:
        return {frozenset()}
    pitch = Fraction(pitch)
    cx = [Fraction(c[0]) for c in centers]
    cy = [Fraction(c[1]) for c in centers]
    x0, x1 = min(cx) - 1 - margin, max(cx) + 1 + margin
    y0, y1 = min(cy) - 1 - margin, max(cy) + 1 + margin
    from math import ceil, floor

    ii = np.arange(ceil(x0 / pitch), floor(x1 / pitch) + 1)
    jj = np.arange(ceil(y0 / pitch), floor(y1 / pitch) + 1)
    gx, gy = np.meshgrid(ii * float(pitch), jj * float(pitch), indexing="ij")
    gx, gy = gx.ravel(), gy.ravel()
    gi = np.repeat(ii, len(jj))
    gj = np.tile(jj, len(ii))
    n = len(centers)
    bits = np.zeros(gx.shape, dtype=np.int64)
    for k in range(n):
        d = (gx - float(cx[k])) ** 2 + (gy - float(cy[k])) ** 2 - 1.0
        inside = d < -1e-9
        for idx in np.flatnonzero(np.abs(d) <= 1e-9):
            inside[idx] = unit_side(cx[k], cy[k], int(gi[idx]) * pitch, int(gj[idx]) * pitch) < 0
        bits |= inside.astype(np.int64) << k
    return {frozenset(i for i in range(n) if b >> i & 1) for b in np.unique(bits).tolist()}


def _float_coverage(disks, steps=33) -> int:
    """Approximate minimum coverage of the unit square on a coarse float grid."""
    g = np.linspace(0.0, 1.0, steps)
    gx, gy = np.meshgrid(g, g)
    count = np.zeros(gx.shape, dtype=int)
    for d in disks:
        count += (gx - float(d.center.x)) ** 2 + (gy - float(d.center.y)) ** 2 < 1.0
    return int(count.min())


def random_covering(seed: int, m_target: int = 10, max_degree: int = 128, n_range=(12, 18), spread=Fraction(3, 10), tries=500):
    """Seeded disk covering of the unit square: rejection sampling on m-fold coverage and degree.

    Centers are rationals with denominator 1000 within ``spread`` of the square.
    Returns (instance, cell hypergraph, attempts).
    """
    rng = random.Random(seed)
    region = Rect(0, 0, 1, 1)
    lo = -spread
    span = 1 + 2 * spread
    for attempt in range(1, tries + 1):
        n = rng.randint(*n_range)
        disks = [
            UnitDisk(RationalPoint(lo + span * Fraction(rng.randrange(1001), 1000), lo + span * Fraction(rng.randrange(1001), 1000)), None, i)
            for i in range(n)
        ]
        if _float_coverage(disks) < m_target:
            continue  # cheap rejection; the exact check below decides the rest
        inst = CoveringInstance(disks, region, m_target)
        h = build_cell_hypergraph(inst)
        if h.uncovered is not None or h.min_edge_size() < m_target:
            continue
        if max(edge_intersection_degrees(h), default=0) > max_degree:
            continue
        return inst, h, attempt
    raise RuntimeError(f"no covering found in {tries} attempts")


def well_conditioned(centers, margin=0.05) -> bool:
    """No near-coincident or near-tangent pairs and no crossing close to a third circle.

    Under this margin every cell is wide enough for a lattice of pitch well
    below ``margin`` to hit it, which the grid oracle relies on.
    """
    pts = [(float(x), float(y)) for x, y in centers]
    n = len(pts)
    for i in range(n):
        for k in range(i + 1, n):
            dx, dy = pts[k][0] - pts[i][0], pts[k][1] - pts[i][1]
            d = (dx * dx + dy * dy) ** 0.5
            if d < margin or abs(d - 2) < margin:
                return False
            if d >= 2:
                continue
            h = (1 - d * d / 4) ** 0.5
            mx, my = (pts[i][0] + pts[k][0]) / 2, (pts[i][1] + pts[k][1]) / 2
            for sgn in (1, -1):
                vx, vy = mx - sgn * h * dy / d, my + sgn * h * dx / d
                for t in range(n):
                    if t in (i, k):
                        continue
                    r = ((vx - pts[t][0]) ** 2 + (vy - pts[t][1]) ** 2) ** 0.5
                    if abs(r - 1) < margin:
                        return False
    return True


def random_family(seed: int, n_max: int = 10, box: int = 3, margin=0.05, tries=2_000):
    """Seeded well-conditioned family of at most ``n_max`` unit disks.

    Centers are rationals with denominator 1000 in [0, box]^2; after every
    ``tries`` rejections the box grows by 1.
    """
    rng = random.Random(seed)
    n = rng.randint(1, n_max)
    for grow in range(20):
        side = box + grow
        for _ in range(tries):
            cs = [
                (Fraction(rng.randrange(side * 1000 + 1), 1000), Fraction(rng.randrange(side * 1000 + 1), 1000))
                for _ in range(n)
            ]
            if well_conditioned(cs, margin):
                return cs
    raise RuntimeError("no well-conditioned family found")
