"""Exact points, open unit disks and the strict membership predicate."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .hypergraph import Color

# float results farther than this (relative) from the unit circle are trusted
_FILTER = 1e-9


@dataclass(frozen=True, order=True)
class RationalPoint:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))

    def __add__(self, other: "RationalPoint") -> "RationalPoint":
        return RationalPoint(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "RationalPoint") -> "RationalPoint":
        return RationalPoint(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class UnitDisk:
    """Open disk of radius 1."""

    center: RationalPoint
    color: Color | None = None
    id: int = 0

    @property
    def top(self) -> RationalPoint:
        return RationalPoint(self.center.x, self.center.y + 1)

    @property
    def bottom(self) -> RationalPoint:
        return RationalPoint(self.center.x, self.center.y - 1)

    def translated(self, dx, dy) -> "UnitDisk":
        return UnitDisk(RationalPoint(self.center.x + dx, self.center.y + dy), self.color, self.id)


def sq_dist(ax, ay, bx, by) -> Fraction:
    dx = Fraction(ax) - Fraction(bx)
    dy = Fraction(ay) - Fraction(by)
    return dx * dx + dy * dy


def unit_side(cx, cy, px, py) -> int:
    """Sign of |p - c|^2 - 1: -1 inside, 0 on the circle, +1 outside.

    A double-precision evaluation settles clear cases; anything within the
    filter band is decided with exact rationals.
    """
    fx = float(px) - float(cx)
    fy = float(py) - float(cy)
    d = fx * fx + fy * fy - 1.0
    scale = 1.0 + abs(float(px)) + abs(float(cx)) + abs(float(py)) + abs(float(cy))
    if abs(d) > _FILTER * scale * scale:
        return 1 if d > 0 else -1
    e = sq_dist(px, py, cx, cy) - 1
    return (e > 0) - (e < 0)


def contains(disk: UnitDisk, p: RationalPoint) -> bool:
    """Strict membership in the open unit disk."""
    return unit_side(disk.center.x, disk.center.y, p.x, p.y) < 0


def in_closure(disk: UnitDisk, p: RationalPoint) -> bool:
    return unit_side(disk.center.x, disk.center.y, p.x, p.y) <= 0


@dataclass(frozen=True)
class Rect:
    x0: Fraction
    y0: Fraction
    x1: Fraction
    y1: Fraction

    def __post_init__(self):
        for name in ("x0", "y0", "x1", "y1"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.x0 > self.x1 or self.y0 > self.y1:
            raise ValueError(f"degenerate rectangle {self}")

    def contains(self, x, y) -> bool:
        """Closed containment."""
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1

    def expanded(self, pad) -> "Rect":
        pad = Fraction(pad)
        return Rect(self.x0 - pad, self.y0 - pad, self.x1 + pad, self.y1 + pad)

    @classmethod
    def bounding(cls, points) -> "Rect":
        pts = list(points)
        return cls(min(p.x for p in pts), min(p.y for p in pts), max(p.x for p in pts), max(p.y for p in pts))
