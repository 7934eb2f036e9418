"""Exact point / unit-disk realizations of H(k, l) and their grid extension.

Coordinates are Fractions throughout.  A realization built with parameter
``eps`` keeps its points in (-eps, eps) x (-eps^2, eps^2), red centers in the
same box shifted up by 1 and blue centers shifted down by 1.  The recursive
step places the root at the origin and translates the realizations of
H(k-1, l) and H(k, l-1), built with ``eps / 128``, to (-eps/3, -eps^2/10)
and (eps/3, eps^2/10).

Base cases (one red disk over k points, or one blue disk over l points) use
the layout below, written in units where x is measured in eps and y in
eps^2.  For the l = 1 case: the red disk is centered at (0, 1 - ALPHA), each
blue disk i at (b_i, -1 + beta_i) with beta_i = -ALPHA + 9/32 b_i^2, and point
i sits at (b_i / 2, -ALPHA + 9/64 b_i^2).  Near the origin the circles are
parabolas, point i lies in the thin lens where blue disk i rises above the
red disk's lower arc, and the b_i alternate in sign with magnitudes shrinking
by a factor of 5 so that no lens reaches another point and no disk's extreme
points touch another disk.  The k = 1 case is the mirror image in the x-axis
with the colors swapped.  The construction is only trusted after
``verify_realization`` has checked it exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor

import numpy as np

from .arrangement import ArrangementError, DiskArrangement
from .geometry import RationalPoint, Rect, UnitDisk, contains, sq_dist, unit_side
from .hypergraph import AbstractHypergraph, CapacityError, Color, block_size, build_hypergraph
from .rational import format_rational, parse_rational

MAX_K_PLUS_L = 10
CHILD_SHRINK = 128
ALPHA = Fraction(1, 16)


@dataclass
class Realization:
    hypergraph: AbstractHypergraph
    points: list
    disks: list
    eps: Fraction
    origin: RationalPoint = field(default_factory=lambda: RationalPoint(0, 0))

    @property
    def k(self):
        return self.hypergraph.k

    @property
    def l(self):
        return self.hypergraph.l

    def translated(self, dx, dy) -> "Realization":
        dx, dy = Fraction(dx), Fraction(dy)
        shift = RationalPoint(dx, dy)
        return Realization(
            self.hypergraph,
            [p + shift for p in self.points],
            [d.translated(dx, dy) for d in self.disks],
            self.eps,
            self.origin + shift,
        )

    def bounding_box(self) -> Rect:
        return Rect.bounding(list(self.points) + [d.center for d in self.disks])

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "l": self.l,
            "eps": format_rational(self.eps),
            "points": [{"id": i, "x": format_rational(p.x), "y": format_rational(p.y)} for i, p in enumerate(self.points)],
            "disks": [
                {"id": d.id, "class": d.color.value, "cx": format_rational(d.center.x), "cy": format_rational(d.center.y)}
                for d in self.disks
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Realization":
        h = build_hypergraph(int(data["k"]), int(data["l"]))
        pts = sorted(data["points"], key=lambda p: p["id"])
        disks = sorted(data["disks"], key=lambda d: d["id"])
        return cls(
            h,
            [RationalPoint(parse_rational(p["x"]), parse_rational(p["y"])) for p in pts],
            [
                UnitDisk(RationalPoint(parse_rational(d["cx"]), parse_rational(d["cy"])), Color(d["class"]), int(d["id"]))
                for d in disks
            ],
            parse_rational(data["eps"]),
        )


def _base_offsets(count: int) -> list:
    """Signed positions b_i for the base layout, in units of eps."""
    out = []
    for i in range(count):
        side = 1 if i % 2 == 0 else -1
        out.append(side * Fraction(1, 2) / 5 ** (i // 2))
    return out


def _base_case(k: int, l: int, eps: Fraction, offset: int):
    """Points and disks for H(k, 1) or H(1, l); disks are (color, ids, cx, cy)."""
    many = k if l == 1 else l
    big, small = (Color.RED, Color.BLUE) if l == 1 else (Color.BLUE, Color.RED)
    flip = 1 if l == 1 else -1
    e2 = eps * eps
    points, disks = {}, []
    ids = tuple(range(offset, offset + many))
    disks.append((big, frozenset(ids), Fraction(0), flip * (1 - ALPHA * e2)))
    for v, b in zip(ids, _base_offsets(many)):
        beta = -ALPHA + Fraction(9, 32) * b * b
        points[v] = (b / 2 * eps, flip * (-ALPHA + Fraction(9, 64) * b * b) * e2)
        disks.append((small, frozenset([v]), b * eps, flip * (-1 + beta * e2)))
    return points, disks


def _raw_realization(k: int, l: int, eps: Fraction, offset: int):
    if k == 1 or l == 1:
        return _base_case(k, l, eps, offset)
    child = eps / CHILD_SHRINK
    e2 = eps * eps
    left = block_size(k - 1, l)
    root = offset + left + block_size(k, l - 1)
    pts_a, disks_a = _raw_realization(k - 1, l, child, offset)
    pts_b, disks_b = _raw_realization(k, l - 1, child, offset + left)
    ax, ay = -eps / 3, -e2 / 10
    bx, by = eps / 3, e2 / 10
    points = {v: (x + ax, y + ay) for v, (x, y) in pts_a.items()}
    points.update({v: (x + bx, y + by) for v, (x, y) in pts_b.items()})
    points[root] = (Fraction(0), Fraction(0))
    disks = []
    for color, ids, cx, cy in disks_a:
        ids = ids | {root} if color is Color.RED else ids
        disks.append((color, ids, cx + ax, cy + ay))
    for color, ids, cx, cy in disks_b:
        ids = ids | {root} if color is Color.BLUE else ids
        disks.append((color, ids, cx + bx, cy + by))
    return points, disks


def build_realization(k: int, l: int, eps=Fraction(1, 100)) -> Realization:
    eps = Fraction(eps)
    if not (0 < eps < Fraction(1, 10)):
        raise ValueError(f"eps must satisfy 0 < eps < 1/10, got {eps}")
    if k < 1 or l < 1:
        raise ValueError("k and l must be positive")
    if k + l > MAX_K_PLUS_L:
        raise CapacityError(f"k + l = {k + l} exceeds the realization guard {MAX_K_PLUS_L}")
    h = build_hypergraph(k, l)
    raw_points, raw_disks = _raw_realization(k, l, eps, 0)
    points = [RationalPoint(*raw_points[v]) for v in h.vertices]
    disks: list = [None] * h.n_edges
    for color, ids, cx, cy in raw_disks:
        eid = h.edge_id(color, ids)
        disks[eid] = UnitDisk(RationalPoint(cx, cy), color, eid)
    return Realization(h, points, disks, eps)


# -- verification -------------------------------------------------------------

PROPERTY_NAMES = {
    1: "disk sizes (red k, blue l points)",
    2: "incidence equals H(k,l)",
    3: "points in eps-box",
    4: "red centers in eps-box around (0,1)",
    5: "blue centers in eps-box around (0,-1)",
    6: "exposed (extreme points outside other closures)",
}


@dataclass
class PropertyResult:
    number: int
    passed: bool = True
    witnesses: list = field(default_factory=list)

    def fail(self, witness):
        self.passed = False
        if len(self.witnesses) < 20:
            self.witnesses.append(witness)


@dataclass
class RealizationReport:
    properties: dict
    boundary_free: bool
    boundary_witnesses: list

    @property
    def ok(self) -> bool:
        return self.boundary_free and all(p.passed for p in self.properties.values())

    def lines(self):
        for n in sorted(self.properties):
            p = self.properties[n]
            yield f"property {n} {'PASS' if p.passed else 'FAIL'}: {PROPERTY_NAMES[n]}"
        yield f"no point on a member circle: {'PASS' if self.boundary_free else 'FAIL'}"


def _in_box(x, y, cx, cy, eps) -> bool:
    e2 = eps * eps
    return -eps < x - cx < eps and -e2 < y - cy < e2


def exposure_witnesses(disks, limit=None):
    """Pairs (disk, 'top'|'bottom', other disk, squared distance) with distance^2 <= 1."""
    out = []
    for d in disks:
        for which, p in (("top", d.top), ("bottom", d.bottom)):
            for o in disks:
                if o is d:
                    continue
                if unit_side(o.center.x, o.center.y, p.x, p.y) <= 0:
                    out.append((d.id, which, o.id, sq_dist(p.x, p.y, o.center.x, o.center.y)))
                    if limit is not None and len(out) >= limit:
                        return out
    return out


def is_exposed(disks) -> bool:
    """True iff every topmost/bottommost point is at squared distance > 1 from every other center."""
    return not exposure_witnesses(list(disks), limit=1)


def verify_realization(r: Realization, origin: RationalPoint | None = None) -> RealizationReport:
    """Check the six realization properties exactly.

    ``origin`` is the center of the eps-boxes; it defaults to the
    realization's own origin so translated copies verify identically.
    """
    o = r.origin if origin is None else origin
    h, eps = r.hypergraph, r.eps
    props = {n: PropertyResult(n) for n in range(1, 7)}
    boundary = []
    if len(r.points) != h.n_vertices or len(r.disks) != h.n_edges:
        props[2].fail(("size mismatch", len(r.points), len(r.disks)))
    for d in r.disks:
        eid = d.id
        color, edge = h.edge(eid)
        want = set(edge)
        got = set()
        for i, p in enumerate(r.points):
            s = unit_side(d.center.x, d.center.y, p.x, p.y)
            if s == 0:
                boundary.append((i, eid))
            if s < 0:
                got.add(i)
        if d.color is not color:
            props[2].fail((eid, "class", d.color, color))
        for i in sorted(got ^ want):
            props[2].fail((i, eid, sq_dist(r.points[i].x, r.points[i].y, d.center.x, d.center.y)))
        size = h.k if color is Color.RED else h.l
        if len(got) != size:
            props[1].fail((eid, len(got), size))
        if color is Color.RED and not _in_box(d.center.x, d.center.y, o.x, o.y + 1, eps):
            props[4].fail((eid, d.center))
        if color is Color.BLUE and not _in_box(d.center.x, d.center.y, o.x, o.y - 1, eps):
            props[5].fail((eid, d.center))
    for i, p in enumerate(r.points):
        if not _in_box(p.x, p.y, o.x, o.y, eps):
            props[3].fail((i, p))
    for w in exposure_witnesses(r.disks, limit=20):
        props[6].fail(w)
    return RealizationReport(props, not boundary, boundary[:20])


def incidence_matrix(r: Realization) -> np.ndarray:
    """Exact point-in-disk matrix, rows are points, columns edge ids."""
    m = np.zeros((len(r.points), len(r.disks)), dtype=bool)
    for j, d in enumerate(r.disks):
        for i, p in enumerate(r.points):
            m[i, j] = contains(d, p)
    return m


def hypergraph_incidence(h: AbstractHypergraph) -> np.ndarray:
    m = np.zeros((h.n_vertices, h.n_edges), dtype=bool)
    for eid, _, edge in h.edges():
        for v in edge:
            m[v, eid] = True
    return m


def realized_hypergraph(r: Realization, points=None) -> AbstractHypergraph:
    """Read the red/blue hypergraph back off the geometry (exact incidences)."""
    pts = r.points if points is None else points
    red, blue = [], []
    for d in r.disks:
        e = tuple(i for i, p in enumerate(pts) if contains(d, p))
        (red if d.color is Color.RED else blue).append(e)
    return AbstractHypergraph(r.k, r.l, len(pts), tuple(red), tuple(blue), r.hypergraph.root)


# -- grid extension -----------------------------------------------------------


@dataclass
class ExtendedPointSet:
    base: Realization
    extra_points: list
    grid_step: Fraction
    bounding_box: Rect

    @property
    def all_points(self):
        return list(self.base.points) + list(self.extra_points)

    def probe_box(self) -> Rect:
        """Centers whose unit disk stays inside the gridded box."""
        return self.bounding_box.expanded(-1)

    def to_dict(self) -> dict:
        b = self.bounding_box
        return {
            "base": self.base.to_dict(),
            "grid_step": format_rational(self.grid_step),
            "bounding_box": {k: format_rational(getattr(b, k)) for k in ("x0", "y0", "x1", "y1")},
            "extra_points": [{"x": format_rational(p.x), "y": format_rational(p.y)} for p in self.extra_points],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExtendedPointSet":
        b = data["bounding_box"]
        return cls(
            Realization.from_dict(data["base"]),
            [RationalPoint(parse_rational(p["x"]), parse_rational(p["y"])) for p in data["extra_points"]],
            parse_rational(data["grid_step"]),
            Rect(*(parse_rational(b[k]) for k in ("x0", "y0", "x1", "y1"))),
        )


def _outside_all(arr: DiskArrangement, x, y) -> bool:
    return not arr.signature(x, y)


def extend_with_grid(r: Realization, m: int | None = None, step=None, pad=Fraction(3)) -> ExtendedPointSet:
    """Add every lattice point (i*step, j*step) of the padded box lying in no member disk.

    ``step`` defaults to 1/(8m).  The box is the bounding box of the points
    and disk centers grown by ``pad`` on every side.
    """
    pad = Fraction(pad)
    if pad < 2:
        raise ValueError("pad must be at least 2")
    if step is None:
        if not m:
            raise ValueError("give m or an explicit step")
        step = Fraction(1, 8 * m)
    step = Fraction(step)
    if step <= 0:
        raise ValueError("step must be positive")
    box = r.bounding_box().expanded(pad)
    i0, i1 = ceil(box.x0 / step), floor(box.x1 / step)
    j0, j1 = ceil(box.y0 / step), floor(box.y1 / step)
    centers = np.array([[float(d.center.x), float(d.center.y)] for d in r.disks])
    arr = DiskArrangement([(d.center.x, d.center.y) for d in r.disks])
    xs = np.arange(i0, i1 + 1)
    ys = np.arange(j0, j1 + 1)
    gx, gy = np.meshgrid(xs * float(step), ys * float(step), indexing="ij")
    near = np.zeros(gx.shape, dtype=bool)
    inside = np.zeros(gx.shape, dtype=bool)
    for cx, cy in centers:
        d = (gx - cx) ** 2 + (gy - cy) ** 2 - 1.0
        inside |= d < -1e-9
        near |= np.abs(d) <= 1e-9
    extra = []
    for a, b in zip(*np.nonzero(~inside)):
        x, y = int(xs[a]) * step, int(ys[b]) * step
        if near[a, b] and not _outside_all(arr, x, y):
            continue
        extra.append(RationalPoint(x, y))
    return ExtendedPointSet(r, extra, step, box)


def _lattice_split(points, unit: Fraction):
    """Separate points lying on the lattice unit*Z^2 from the rest."""
    on, off = [], []
    for p in points:
        a, b = p.x / unit, p.y / unit
        if a.denominator == 1 and b.denominator == 1:
            on.append((int(a), int(b)))
        else:
            off.append(p)
    return on, off


def _gcd_fraction(a: Fraction, b: Fraction) -> Fraction:
    from math import gcd

    den = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
    return Fraction(gcd(int(a * den), int(b * den)), den)


def _isqrt_below(q: Fraction) -> int:
    """Largest integer w >= 0 with w*w < q (q > 0)."""
    from math import isqrt

    w = isqrt(floor(q))
    while w * w >= q:
        w -= 1
    return w


def probe_counts(points, probe_box: Rect, probe_step, grid_step):
    """Exact count of ``points`` inside the open unit disk at every probe center.

    Returns (probe index arrays ii, jj, counts, unit).  Probe centers are
    (ii*probe_step, jj*probe_step).  Points on the lattice generated by the
    two pitches are counted with integer row prefix sums; the others exactly.
    """
    probe_step, grid_step = Fraction(probe_step), Fraction(grid_step)
    unit = _gcd_fraction(probe_step, grid_step)
    t = int(probe_step / unit)
    pi = np.arange(ceil(probe_box.x0 / probe_step), floor(probe_box.x1 / probe_step) + 1)
    pj = np.arange(ceil(probe_box.y0 / probe_step), floor(probe_box.y1 / probe_step) + 1)
    PI, PJ = np.meshgrid(pi, pj, indexing="ij")
    PI, PJ = PI.ravel(), PJ.ravel()
    counts = np.zeros(PI.shape, dtype=np.int64)
    on, off = _lattice_split(points, unit)
    q = 1 / (unit * unit)  # |offset|^2 < q in lattice units
    radius = _isqrt_below(q) if q > 0 else 0
    if on and PI.size:
        on_arr = np.array(on, dtype=np.int64)
        lo_x = min(on_arr[:, 0].min(), PI.min() * t) - radius - 2
        lo_y = min(on_arr[:, 1].min(), PJ.min() * t) - radius - 2
        hi_x = max(on_arr[:, 0].max(), PI.max() * t) + radius + 2
        hi_y = max(on_arr[:, 1].max(), PJ.max() * t) + radius + 2
        if (hi_x - lo_x + 1) * (hi_y - lo_y + 1) > 60_000_000:
            raise CapacityError("probe lattice too large; use coarser pitches")
        occ = np.zeros((hi_y - lo_y + 1, hi_x - lo_x + 2), dtype=np.int64)
        np.add.at(occ, (on_arr[:, 1] - lo_y, on_arr[:, 0] - lo_x + 1), 1)
        prefix = np.cumsum(occ, axis=1)  # prefix[r, c] = sum of columns < c in lattice coords
        cx = PI * t - lo_x
        cy = PJ * t - lo_y
        for dy in range(-radius, radius + 1):
            rest = q - dy * dy
            if rest <= 0:
                continue
            w = _isqrt_below(rest)
            rows = cy + dy
            counts += prefix[rows, cx + w + 1] - prefix[rows, cx - w]
    if off and PI.size:
        fx = PI * float(probe_step)
        fy = PJ * float(probe_step)
        for p in off:
            px, py = float(p.x), float(p.y)
            d = (fx - px) ** 2 + (fy - py) ** 2 - 1.0
            band = 1e-9 * (1 + abs(px) + abs(py) + np.abs(fx) + np.abs(fy)) ** 2
            counts += d < -band
            for idx in np.flatnonzero(np.abs(d) <= band):
                if unit_side(int(PI[idx]) * probe_step, int(PJ[idx]) * probe_step, p.x, p.y) < 0:
                    counts[idx] += 1
    return PI, PJ, counts, unit


@dataclass
class CoverageReport:
    minimum: int
    witness: RationalPoint | None
    n_probes: int
    deficient: list

    def ok(self, m: int) -> bool:
        return self.minimum >= m


def min_disk_coverage(e: ExtendedPointSet, m: int, probe_step=None, probes=None) -> CoverageReport:
    """Minimum number of points of base + extra inside the open unit disks at the probes.

    Without explicit ``probes`` the centers are the lattice of pitch
    ``probe_step`` (default half the grid step) over ``e.probe_box()``.
    """
    pts = e.all_points
    if probes is not None:
        best, wit, deficient = None, None, []
        for c in probes:
            n = sum(1 for p in pts if unit_side(c.x, c.y, p.x, p.y) < 0)
            if n < m:
                deficient.append((c, n))
            if best is None or n < best:
                best, wit = n, c
        return CoverageReport(best if best is not None else 0, wit, len(probes), deficient)
    probe_step = Fraction(probe_step) if probe_step is not None else e.grid_step / 2
    PI, PJ, counts, _ = probe_counts(pts, e.probe_box(), probe_step, e.grid_step)
    if counts.size == 0:
        return CoverageReport(0, None, 0, [])
    idx = int(np.argmin(counts))
    deficient = [
        (RationalPoint(int(PI[i]) * probe_step, int(PJ[i]) * probe_step), int(counts[i]))
        for i in np.flatnonzero(counts < m)
    ]
    witness = RationalPoint(int(PI[idx]) * probe_step, int(PJ[idx]) * probe_step)
    return CoverageReport(int(counts[idx]), witness, int(counts.size), deficient)


# -- escape points (no foreign unit disk lies inside the union) ---------------


def find_escape_points(disks, probe: RationalPoint, count: int = 1) -> list:
    """Points of the open unit disk at ``probe`` lying in no member disk.

    The part of the probe disk outside the union is a union of cells of the
    arrangement formed by the probe circle and the nearby member circles;
    each such cell is reached from a circle bottom or a crossing.  Several
    points of one cell are produced by shrinking the offset further.
    """
    near = [d for d in disks if sq_dist(d.center.x, d.center.y, probe.x, probe.y) < 4]
    arr = DiskArrangement([(probe.x, probe.y)] + [(d.center.x, d.center.y) for d in near])
    if arr.signature(probe.x, probe.y) == frozenset({0}):
        found = [probe]
        if count == 1:
            return found
    else:
        found = []
    seen = {(p.x, p.y) for p in found}
    pairs = [(0, i) for i in range(1, arr.n)] + [(i, k) for i in range(1, arr.n) for k in range(i + 1, arr.n)]
    for cand in arr.candidates(pairs=pairs):
        if cand.signature != frozenset({0}):
            continue
        # same cell, smaller offsets; each one is re-tested
        base_j = cand.j
        for extra in range(0, 4 * count + 4):
            if extra == 0:
                x, y = cand.x, cand.y
            else:
                x, y = _reoffset(arr, cand, base_j + extra)
                if x is None:
                    break
            if (x, y) in seen or arr.signature(x, y) != frozenset({0}):
                continue
            seen.add((x, y))
            found.append(RationalPoint(x, y))
            if len(found) >= count:
                return found
    return found


def _reoffset(arr: DiskArrangement, cand, j):
    """The candidate's construction redone with offset 2^-j, or (None, None)."""
    kind = cand.source[0]
    if kind == "bottom":
        i = cand.source[1]
        return arr.cx[i], arr.cy[i] - 1 + Fraction(1, 1 << j)
    if kind != "cross":
        return None, None
    _, i, k, sign, s1, s2 = cand.source
    vx, vy = arr._crossing(i, k, sign, 2 * j + 48)
    n1x, n1y = vx - arr.cx[i], vy - arr.cy[i]
    n2x, n2y = vx - arr.cx[k], vy - arr.cy[k]
    det = n1x * n2y - n1y * n2x
    wx = (s1 * n2y - s2 * n1y) / det
    wy = (s2 * n1x - s1 * n2x) / det
    d = Fraction(1, 1 << j)
    return vx + d * wx, vy + d * wy


@dataclass
class EscapeReport:
    exposed: bool
    results: list  # (probe, escape point or None, note)

    @property
    def all_escaped(self) -> bool:
        return all(p is not None or note.startswith("skipped") for _, p, note in self.results)


def check_no_foreign_disk_inside_union(r: Realization, probes) -> EscapeReport:
    """For each probe center, exhibit a point of its unit disk outside every member disk."""
    centers = {(d.center.x, d.center.y) for d in r.disks}
    results = []
    for q in probes:
        if (q.x, q.y) in centers:
            results.append((q, None, "skipped: probe is a member disk"))
            continue
        try:
            pts = find_escape_points(r.disks, q, 1)
        except ArrangementError as exc:
            results.append((q, None, f"error: {exc}"))
            continue
        if pts:
            results.append((q, pts[0], "escape point found"))
        else:
            results.append((q, None, "no escape point found"))
    return EscapeReport(is_exposed(r.disks), results)


def add_escape_points(e: ExtendedPointSet, m: int, probe_step=None) -> ExtendedPointSet:
    """Top up every probe disk holding fewer than ``m`` points with escape points.

    Near the construction the part of a probe disk outside the union can be
    far thinner than any grid pitch; the points added here come from that
    part, so they lie in no member disk just like the grid points.
    """
    probe_step = Fraction(probe_step) if probe_step is not None else e.grid_step / 2
    rep = min_disk_coverage(e, m, probe_step)
    extra = list(e.extra_points)
    known = set(extra) | set(e.base.points)
    for center, have in rep.deficient:
        need = m - have
        for p in find_escape_points(e.base.disks, center, need + 4):
            if need and p not in known:
                known.add(p)
                extra.append(p)
                need -= 1
    return ExtendedPointSet(e.base, extra, e.grid_step, e.bounding_box)
