"""Representative points for the cells of an arrangement of unit circles.

The lowest point of a bounded cell is the bottommost point of a circle (the
cell lies inside it), the topmost point of a circle (the cell lies outside
it, resting on its upper arc) or a crossing of two circles.  Representatives
are therefore taken at small exact offsets from circle bottoms, circle tops
and crossings.  Crossings of unit circles with rational centers
are generally irrational, so they are approximated by rationals; the offset
is shrunk until the signature (set of disks containing the point) agrees
with the intended side of each defining curve and does not change when the
offset is halved.  Every accepted representative is tested exactly.

When a clipping rectangle is given, crossings of circles with the rectangle
edges and the rectangle corners become candidates too, so that every cell
meeting the rectangle gets a representative inside it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .geometry import Rect, unit_side
from .rational import sqrt_approx

J_START = 6
J_STEP = 6
J_MAX = 900


class ArrangementError(RuntimeError):
    pass


@dataclass(frozen=True)
class Candidate:
    x: Fraction
    y: Fraction
    signature: frozenset
    source: tuple
    j: int

    @property
    def point(self):
        return self.x, self.y


class DiskArrangement:
    def __init__(self, centers):
        self.cx = [Fraction(c[0]) for c in centers]
        self.cy = [Fraction(c[1]) for c in centers]
        self.n = len(self.cx)
        self._fx = np.array([float(v) for v in self.cx])
        self._fy = np.array([float(v) for v in self.cy])
        self._scale = 1.0 + np.abs(self._fx) + np.abs(self._fy)

    def signature(self, x, y) -> frozenset:
        """Indices of the open disks containing (x, y), decided exactly."""
        if self.n == 0:
            return frozenset()
        fx, fy = float(x), float(y)
        d = (self._fx - fx) ** 2 + (self._fy - fy) ** 2 - 1.0
        band = 1e-9 * (self._scale + abs(fx) + abs(fy)) ** 2
        inside = d < 0
        unsure = np.flatnonzero(np.abs(d) <= band)
        if unsure.size == 0:
            return frozenset(np.flatnonzero(inside).tolist())
        result = set(np.flatnonzero(inside & (np.abs(d) > band)).tolist())
        for i in unsure.tolist():
            if unit_side(self.cx[i], self.cy[i], x, y) < 0:
                result.add(i)
        return frozenset(result)

    def clearance(self, x, y, exclude=()) -> float:
        """Approximate distance from (x, y) to the nearest circle not in ``exclude``."""
        keep = np.ones(self.n, dtype=bool)
        keep[list(exclude)] = False
        if not keep.any():
            return float("inf")
        d = np.hypot(self._fx[keep] - float(x), self._fy[keep] - float(y))
        return float(np.abs(d - 1.0).min())

    def _settle(self, make, expect, source, region=None, anchor=None, exclude=()):
        """Shrink the offset of ``make(j)`` until it is a stable representative.

        With an ``anchor`` (the curve feature the offset starts from) the
        offset must also stay below half the distance from the anchor to every
        other circle, so it cannot jump over a thin neighboring cell.  When a
        further circle passes through the anchor only stability is checked.
        """
        room = None
        if anchor is not None:
            room = self.clearance(anchor[0], anchor[1], exclude) / 2
            if room <= 1e-12:
                room = None
        ax, ay = (float(anchor[0]), float(anchor[1])) if anchor is not None else (0.0, 0.0)
        j = J_START
        while j <= J_MAX:
            x1, y1 = make(j)
            if room is not None and np.hypot(float(x1) - ax, float(y1) - ay) >= room:
                j += 1
                continue
            s1 = self.signature(x1, y1)
            if all((i in s1) == inside for i, inside in expect):
                x2, y2 = make(j + 1)
                if self.signature(x2, y2) == s1:
                    if region is None or region.contains(x1, y1) == region.contains(x2, y2):
                        return Candidate(x1, y1, s1, source, j)
            j += J_STEP
        raise ArrangementError(f"no stable offset found near {source}")

    # -- candidate generators -------------------------------------------------

    def bottom_candidates(self, region=None):
        for i in range(self.n):
            cx, cy = self.cx[i], self.cy[i]

            def make(j, cx=cx, cy=cy):
                return cx, cy - 1 + Fraction(1, 1 << j)

            yield self._settle(make, [(i, True)], ("bottom", i), region, (cx, cy - 1), (i,))

    def top_candidates(self, region=None):
        """Points just above circle tops: the lowest point of a cell lying outside a disk."""
        for i in range(self.n):
            cx, cy = self.cx[i], self.cy[i]

            def make(j, cx=cx, cy=cy):
                return cx, cy + 1 + Fraction(1, 1 << j)

            yield self._settle(make, [(i, False)], ("top", i), region, (cx, cy + 1), (i,))

    def _crossing(self, i, k, sign, bits):
        x1, y1, x2, y2 = self.cx[i], self.cy[i], self.cx[k], self.cy[k]
        dx, dy = x2 - x1, y2 - y1
        dd = dx * dx + dy * dy
        f = sqrt_approx((4 - dd) / (4 * dd), bits)
        mx, my = (x1 + x2) / 2, (y1 + y2) / 2
        return mx - sign * f * dy, my + sign * f * dx

    def pair_candidates(self, i, k, region=None):
        x1, y1, x2, y2 = self.cx[i], self.cy[i], self.cx[k], self.cy[k]
        dd = (x2 - x1) ** 2 + (y2 - y1) ** 2
        if dd == 0 or dd > 4:
            return
        if dd == 4:
            vx, vy = (x1 + x2) / 2, (y1 + y2) / 2
            nx, ny = vx - x1, vy - y1
            dirs = [
                ((-nx, -ny), [(i, True), (k, False)]),
                ((nx, ny), [(i, False), (k, True)]),
                ((-ny, nx), [(i, False), (k, False)]),
                ((ny, -nx), [(i, False), (k, False)]),
            ]
            for (wx, wy), expect in dirs:

                def make(j, wx=wx, wy=wy):
                    d = Fraction(1, 1 << j)
                    return vx + d * wx, vy + d * wy

                yield self._settle(make, expect, ("tangent", i, k), region, (vx, vy), (i, k))
            return
        for sign in (1, -1):
            cache = {}

            def vertex(j, sign=sign, cache=cache):
                bits = 2 * j + 48
                if bits not in cache:
                    cache[bits] = self._crossing(i, k, sign, bits)
                return cache[bits]

            for s1 in (1, -1):
                for s2 in (1, -1):

                    def make(j, s1=s1, s2=s2):
                        vx, vy = vertex(j)
                        n1x, n1y = vx - x1, vy - y1
                        n2x, n2y = vx - x2, vy - y2
                        det = n1x * n2y - n1y * n2x
                        wx = (s1 * n2y - s2 * n1y) / det
                        wy = (s2 * n1x - s1 * n2x) / det
                        d = Fraction(1, 1 << j)
                        return vx + d * wx, vy + d * wy

                    yield self._settle(
                        make, [(i, s1 < 0), (k, s2 < 0)], ("cross", i, k, sign, s1, s2), region, vertex(J_START), (i, k)
                    )

    def edge_candidates(self, region: Rect):
        """Crossings of circles with the rectangle sides, and the corners."""
        for i in range(self.n):
            cx, cy = self.cx[i], self.cy[i]
            for horizontal, c0 in ((True, region.y0), (True, region.y1), (False, region.x0), (False, region.x1)):
                off = c0 - (cy if horizontal else cx)
                if not (-1 < off < 1):
                    continue
                for sign in (1, -1):

                    def point(bits, c0=c0, off=off, sign=sign, horizontal=horizontal, cx=cx, cy=cy):
                        r = sqrt_approx(1 - off * off, bits) * sign
                        return (cx + r, c0) if horizontal else (c0, cy + r)

                    for s1 in (1, -1):
                        for s2 in (1, -1):

                            def make(j, point=point, s1=s1, s2=s2, horizontal=horizontal, cx=cx, cy=cy):
                                vx, vy = point(2 * j + 48)
                                nx, ny = vx - cx, vy - cy
                                if horizontal:
                                    # n.w = s1, w_y = s2
                                    wy = Fraction(s2)
                                    wx = (s1 - ny * wy) / nx
                                else:
                                    wx = Fraction(s2)
                                    wy = (s1 - nx * wx) / ny
                                d = Fraction(1, 1 << j)
                                return vx + d * wx, vy + d * wy

                            yield self._settle(
                                make, [(i, s1 < 0)], ("edge", i, c0, sign, s1, s2), region, point(64), (i,)
                            )
        for corner_x, sx in ((region.x0, 1), (region.x1, -1)):
            for corner_y, sy in ((region.y0, 1), (region.y1, -1)):

                def make(j, corner_x=corner_x, corner_y=corner_y, sx=sx, sy=sy):
                    d = Fraction(1, 1 << j)
                    return corner_x + sx * d, corner_y + sy * d

                yield self._settle(make, [], ("corner", corner_x, corner_y), region, (corner_x, corner_y))

    def candidates(self, region: Rect | None = None, pairs=None):
        yield from self.bottom_candidates(region)
        yield from self.top_candidates(region)
        if pairs is None:
            pairs = ((i, k) for i in range(self.n) for k in range(i + 1, self.n))
        for i, k in pairs:
            yield from self.pair_candidates(i, k, region)
        if region is not None:
            yield from self.edge_candidates(region)

    def far_point(self):
        """A rational point outside every disk."""
        if self.n == 0:
            return Fraction(0), Fraction(0)
        return max(self.cx) + 3, max(self.cy) + 3


def enumerate_cells(centers, region: Rect | None = None, include_outside: bool = False) -> dict:
    """Map each cell signature to one exact representative point.

    With ``region`` only cells whose representative lies in the closed
    rectangle are kept.  ``include_outside`` adds the unbounded cell (empty
    signature) via a far-away point.
    """
    arr = DiskArrangement(centers)
    cells: dict = {}
    for cand in arr.candidates(region):
        if region is not None and not region.contains(cand.x, cand.y):
            continue
        cells.setdefault(cand.signature, (cand.x, cand.y))
    if include_outside:
        fx, fy = arr.far_point()
        cells.setdefault(arr.signature(fx, fy), (fx, fy))
    return cells
