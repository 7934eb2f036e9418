"""The recursive red/blue hypergraphs H(k, l) and their colorability oracles.

H(k, l) has a k-uniform red family and an l-uniform blue family.  Every
red/blue coloring of its vertices leaves some red edge all red or some blue
edge all blue, which is the asymmetric condition checked throughout this
module (plain property B is the special case where both families coincide).

Vertices are numbered depth first: the block of H(k-1, l) comes first, then
the block of H(k, l-1), and the root of H(k, l) takes the last id of its
block.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import comb

from ._masks import MAX_EXHAUSTIVE_VERTICES, first_valid_mask

MAX_K_PLUS_L = 30
MAX_VERTICES = 5_000_000


class Color(str, enum.Enum):
    RED = "R"
    BLUE = "B"

    @property
    def opposite(self) -> "Color":
        return Color.BLUE if self is Color.RED else Color.RED


class CapacityError(ValueError):
    """Raised when an object would be too large to materialize or scan."""


def block_size(k: int, l: int) -> int:
    """|V(k, l)|."""
    return comb(k + l, k) - 1


@dataclass(frozen=True)
class AbstractHypergraph:
    k: int
    l: int
    n_vertices: int
    red_edges: tuple
    blue_edges: tuple
    root: int | None = None
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        idx = {}
        for i, e in enumerate(self.red_edges):
            idx.setdefault((Color.RED, frozenset(e)), i)
        nr = len(self.red_edges)
        for i, e in enumerate(self.blue_edges):
            idx.setdefault((Color.BLUE, frozenset(e)), nr + i)
        object.__setattr__(self, "_index", idx)

    @property
    def vertices(self) -> range:
        return range(self.n_vertices)

    @property
    def n_edges(self) -> int:
        return len(self.red_edges) + len(self.blue_edges)

    def edge(self, eid: int) -> tuple:
        """(color class, vertex tuple) of edge ``eid``; red ids come first."""
        nr = len(self.red_edges)
        if eid < nr:
            return Color.RED, self.red_edges[eid]
        return Color.BLUE, self.blue_edges[eid - nr]

    def edges(self):
        for eid in range(self.n_edges):
            yield (eid, *self.edge(eid))

    def edge_id(self, cls: Color, vertices) -> int:
        try:
            return self._index[(Color(cls), frozenset(vertices))]
        except KeyError:
            raise KeyError(f"no {Color(cls).name} edge {sorted(vertices)}") from None

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "l": self.l,
            "n_vertices": self.n_vertices,
            "red_edges": [list(e) for e in _canonical(self.red_edges)],
            "blue_edges": [list(e) for e in _canonical(self.blue_edges)],
            "root": self.root,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AbstractHypergraph":
        return cls(
            k=int(data["k"]),
            l=int(data["l"]),
            n_vertices=int(data["n_vertices"]),
            red_edges=tuple(tuple(int(v) for v in e) for e in data["red_edges"]),
            blue_edges=tuple(tuple(int(v) for v in e) for e in data["blue_edges"]),
            root=None if data.get("root") is None else int(data["root"]),
        )


def _canonical(edges) -> tuple:
    return tuple(sorted(tuple(sorted(e)) for e in edges))


def _raw_build(k: int, l: int, offset: int):
    """Edges of H(k, l) on ids offset.. in construction order, plus the root."""
    if k == 1:
        vs = tuple(range(offset, offset + l))
        return [(v,) for v in vs], [vs], None
    if l == 1:
        vs = tuple(range(offset, offset + k))
        return [vs], [(v,) for v in vs], None
    left = block_size(k - 1, l)
    right = block_size(k, l - 1)
    root = offset + left + right
    red_a, blue_a, _ = _raw_build(k - 1, l, offset)
    red_b, blue_b, _ = _raw_build(k, l - 1, offset + left)
    red = [e + (root,) for e in red_a] + red_b
    blue = blue_a + [e + (root,) for e in blue_b]
    return red, blue, root


def build_hypergraph(k: int, l: int) -> AbstractHypergraph:
    """Build H(k, l) with canonically sorted edges."""
    if not (isinstance(k, int) and isinstance(l, int)) or k < 1 or l < 1:
        raise ValueError(f"k and l must be positive integers, got k={k!r}, l={l!r}")
    if k + l > MAX_K_PLUS_L:
        raise CapacityError(f"k + l = {k + l} exceeds the capacity guard {MAX_K_PLUS_L}")
    n = block_size(k, l)
    if n > MAX_VERTICES:
        raise CapacityError(f"H({k},{l}) has {n} vertices, above the limit {MAX_VERTICES}")
    red, blue, root = _raw_build(k, l, 0)
    return AbstractHypergraph(k, l, n, _canonical(red), _canonical(blue), root)


def _color_of(coloring, v) -> Color:
    return Color(coloring[v])


def find_forced_monochromatic(h: AbstractHypergraph, coloring) -> tuple[int, Color]:
    """Locate a red edge that is all red or a blue edge that is all blue.

    Follows the inductive argument: the root's color decides which of the two
    sub-hypergraphs to descend into, and an edge found there either survives
    unchanged or gains the root.  ``coloring`` maps vertex ids to colors.
    """
    k, l, offset = h.k, h.l, 0
    added = []
    while True:
        if k == 1:
            vs = range(offset, offset + l)
            red = next((v for v in vs if _color_of(coloring, v) is Color.RED), None)
            if red is not None:
                cls, edge = Color.RED, [red]
            else:
                cls, edge = Color.BLUE, list(vs)
            break
        if l == 1:
            vs = range(offset, offset + k)
            blue = next((v for v in vs if _color_of(coloring, v) is Color.BLUE), None)
            if blue is not None:
                cls, edge = Color.BLUE, [blue]
            else:
                cls, edge = Color.RED, list(vs)
            break
        left = block_size(k - 1, l)
        root = offset + left + block_size(k, l - 1)
        rc = _color_of(coloring, root)
        added.append((rc, root))
        if rc is Color.RED:
            k -= 1
        else:
            offset += left
            l -= 1
    # a root joins the edge exactly when its color matches the edge class
    for rc, root in added:
        if rc is cls:
            edge.append(root)
    try:
        eid = h.edge_id(cls, edge)
    except KeyError:
        raise RuntimeError(f"descent produced {cls.name} set {sorted(edge)} which is not an edge of H({h.k},{h.l})")
    if any(_color_of(coloring, v) is not cls for v in edge):
        raise RuntimeError(f"edge {eid} returned as {cls.name} but is not monochromatic")
    return eid, cls


class Colorability(str, enum.Enum):
    COLORABLE = "COLORABLE"
    NOT_COLORABLE = "NOT-COLORABLE"
    INDETERMINATE = "INDETERMINATE"


@dataclass
class ColorabilityResult:
    status: Colorability
    coloring: dict | None = None
    mode: str = "exhaustive"
    nodes: int = 0

    @property
    def colorable(self) -> bool | None:
        if self.status is Colorability.INDETERMINATE:
            return None
        return self.status is Colorability.COLORABLE


def _edge_mask(edge) -> int:
    m = 0
    for v in edge:
        m |= 1 << v
    return m


def _exhaustive(h: AbstractHypergraph, jobs=None) -> ColorabilityResult:
    # bit set = RED
    mask = first_valid_mask(
        h.n_vertices,
        [_edge_mask(e) for e in h.red_edges],
        [_edge_mask(e) for e in h.blue_edges],
        jobs=jobs,
    )
    if mask is None:
        return ColorabilityResult(Colorability.NOT_COLORABLE, None, "exhaustive", 1 << h.n_vertices)
    coloring = {v: Color.RED if mask >> v & 1 else Color.BLUE for v in h.vertices}
    return ColorabilityResult(Colorability.COLORABLE, coloring, "exhaustive", mask + 1)


def _backtrack(h: AbstractHypergraph, budget: int) -> ColorabilityResult:
    edges = [(Color.RED, e) for e in h.red_edges] + [(Color.BLUE, e) for e in h.blue_edges]
    incident = [[] for _ in h.vertices]
    for i, (_, e) in enumerate(edges):
        for v in e:
            incident[v].append(i)
    forbidden = [cls for cls, _ in edges]
    free = [len(e) for _, e in edges]
    good = [0] * len(edges)
    order = sorted(h.vertices, key=lambda v: (-len(incident[v]), v))
    color: list[Color | None] = [None] * h.n_vertices
    nodes = 0

    def assign(v, c, trail):
        ok = True
        color[v] = c
        trail.append(v)
        for i in incident[v]:
            free[i] -= 1
            if c is not forbidden[i]:
                good[i] += 1
            elif good[i] == 0 and free[i] == 0:
                ok = False
        return ok

    def undo(trail, mark):
        while len(trail) > mark:
            v = trail.pop()
            c = color[v]
            for i in incident[v]:
                free[i] += 1
                if c is not forbidden[i]:
                    good[i] -= 1
            color[v] = None

    def propagate(trail) -> bool:
        # an edge with one free vertex and nothing safe forces that vertex
        changed = True
        while changed:
            changed = False
            for i, (cls, e) in enumerate(edges):
                if good[i] == 0 and free[i] == 1:
                    v = next(u for u in e if color[u] is None)
                    if not assign(v, cls.opposite, trail):
                        return False
                    changed = True
        return True

    trail: list[int] = []

    def search(pos) -> bool | None:
        nonlocal nodes
        while pos < len(order) and color[order[pos]] is not None:
            pos += 1
        if pos == len(order):
            return True
        v = order[pos]
        for c in (Color.RED, Color.BLUE):
            nodes += 1
            if nodes > budget:
                return None
            mark = len(trail)
            if assign(v, c, trail) and propagate(trail):
                r = search(pos + 1)
                if r is None or r:
                    return r
            undo(trail, mark)
        return False

    mark = len(trail)
    found = propagate(trail) and search(0)
    if found is None:
        return ColorabilityResult(Colorability.INDETERMINATE, None, "backtrack", nodes)
    if found:
        coloring = {v: color[v] if color[v] is not None else Color.RED for v in h.vertices}
        return ColorabilityResult(Colorability.COLORABLE, coloring, "backtrack", nodes)
    undo(trail, mark)
    return ColorabilityResult(Colorability.NOT_COLORABLE, None, "backtrack", nodes)


def is_two_colorable(h: AbstractHypergraph, mode: str = "auto", budget: int = 1_000_000, jobs=None) -> ColorabilityResult:
    """Decide whether some coloring avoids all-red red edges and all-blue blue edges.

    ``mode`` is ``"exhaustive"`` (all 2**n colorings, n <= 30), ``"backtrack"``
    (budgeted search; running out of budget gives INDETERMINATE, never a
    negative answer) or ``"auto"`` (exhaustive when n <= 22).
    """
    if mode == "auto":
        mode = "exhaustive" if h.n_vertices <= 22 else "backtrack"
    if mode == "exhaustive":
        if h.n_vertices > MAX_EXHAUSTIVE_VERTICES:
            raise CapacityError(f"exhaustive mode needs |V| <= {MAX_EXHAUSTIVE_VERTICES}, got {h.n_vertices}")
        return _exhaustive(h, jobs)
    if mode == "backtrack":
        return _backtrack(h, budget)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass
class ValidationReport:
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def validate_hypergraph(h: AbstractHypergraph) -> ValidationReport:
    rep = ValidationReport()
    fail = rep.failures.append
    n = h.n_vertices
    for cls, edges, size in ((Color.RED, h.red_edges, h.k), (Color.BLUE, h.blue_edges, h.l)):
        for e in edges:
            if any(not (0 <= v < n) for v in e):
                fail(f"{cls.name} edge {list(e)} has a vertex id outside 0..{n - 1}")
            if len(set(e)) != len(e):
                fail(f"{cls.name} edge {list(e)} repeats a vertex")
            if len(e) != size:
                fail(f"uniformity: {cls.name} edge {list(e)} has {len(e)} vertices, expected {size}")
    expected = {
        "|V|": (n, comb(h.k + h.l, h.k) - 1),
        "|E_R|": (len(h.red_edges), comb(h.k + h.l - 1, h.k)),
        "|E_B|": (len(h.blue_edges), comb(h.k + h.l - 1, h.l)),
    }
    for name, (got, want) in expected.items():
        if got != want:
            fail(f"count {name} = {got}, expected {want}")
    if h.k > 1 and h.l > 1:
        if h.root is None or not (0 <= h.root < n):
            fail(f"root {h.root!r} missing or out of range")
    elif h.root is not None:
        fail(f"base case H({h.k},{h.l}) should have no root, got {h.root}")
    return rep
