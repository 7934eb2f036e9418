"""Shift-chains: recognition, generation from point sets, and 2-coloring.

A shift-chain is an m-uniform hypergraph on [n] = {1..n} whose edges are
totally ordered by A <= B iff a_i <= b_i for the sorted elements.  It is
special when every element of A - B is smaller than every element of B - A
for A <= B.  Special 3-uniform chains are 2-colored in linear time through a
digraph D on [n] with out-degree at most one whose components are quasi-trees
(a tree oriented toward its root, possibly with one root edge doubled).
"""

from __future__ import annotations

import random
import time
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._masks import MAX_EXHAUSTIVE_VERTICES, first_valid_mask
from .hypergraph import Color
from .rational import format_rational, parse_rational


class ChainError(ValueError):
    """Input is not a (special) shift-chain; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ColoringContradiction(RuntimeError):
    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace or []


def precedes(a, b) -> bool:
    a, b = sorted(a), sorted(b)
    if len(a) != len(b):
        raise ValueError(f"sets of different sizes: {len(a)} and {len(b)}")
    return all(x <= y for x, y in zip(a, b))


@dataclass
class ShiftChain:
    n: int
    m: int
    edges: list  # sorted tuples, in chain order

    def __post_init__(self):
        norm = []
        for e in self.edges:
            t = tuple(sorted(int(v) for v in e))
            if not norm or norm[-1] != t:
                norm.append(t)
        self.edges = norm

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, data: dict) -> "ShiftChain":
        return cls(int(data["n"]), int(data["m"]), [tuple(e) for e in data["edges"]])


def is_shift_chain(c: ShiftChain):
    """(ok, witness): each edge is an m-set of [n] and consecutive edges increase under <=."""
    for i, e in enumerate(c.edges):
        if len(e) != c.m or len(set(e)) != c.m:
            return False, ("size", i, e)
        if e[0] < 1 or e[-1] > c.n:
            return False, ("range", i, e)
    for i in range(1, len(c.edges)):
        if not precedes(c.edges[i - 1], c.edges[i]):
            return False, ("order", c.edges[i - 1], c.edges[i])
    return True, None


def _special_violation(edges, block=256):
    if len(edges) < 2:
        return None
    arr = np.array(edges, dtype=np.int64)
    n_e = arr.shape[0]
    big = np.iinfo(np.int64).max
    cols = np.arange(n_e)
    for start in range(0, n_e - 1, block):
        rows = np.arange(start, min(start + block, n_e))
        later = arr[start:]
        A = arr[rows][:, None, :]  # (b, 1, m)
        B = later[None, :, :]  # (1, E', m)
        a_in_b = (A[:, :, :, None] == B[:, :, None, :]).any(-1)
        b_in_a = (B[:, :, :, None] == A[:, :, None, :]).any(-1)
        hi = np.where(a_in_b, -1, A).max(-1)
        lo = np.where(b_in_a, big, B).min(-1)
        bad = (hi > lo) & (cols[start:][None, :] > rows[:, None])
        if bad.any():
            i, j = np.argwhere(bad)[0]
            return edges[rows[i]], edges[start + j]
    return None


def is_special(c: ShiftChain):
    """(ok, witness) where witness is (A, B, A - B, B - A) for a violating pair A <= B."""
    hit = _special_violation(c.edges)
    if hit is None:
        return True, None
    a, b = hit
    return False, (a, b, tuple(sorted(set(a) - set(b))), tuple(sorted(set(b) - set(a))))


def reduce_to_triples(c: ShiftChain) -> ShiftChain:
    """Keep the three smallest elements of each edge.

    The order is preserved position-wise and the special property survives,
    and a coloring in which every triple is bichromatic colors the original.
    """
    if c.m < 3:
        raise ValueError("need m >= 3")
    return ShiftChain(c.n, 3, [e[:3] for e in c.edges])


# -- generation from points ---------------------------------------------------


@dataclass
class SweepGenerator:
    """Points under translates of the region above the parabola v = (u/s)^2."""

    points: list  # (x, y) Fractions
    m: int
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        self.scale = Fraction(self.scale)
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        pts = [(Fraction(x), Fraction(y)) for x, y in self.points]
        xs = [p[0] for p in pts]
        if len(set(xs)) != len(xs):
            raise ValueError("two points share an x-coordinate")
        self.points = sorted(pts)

    def depth_lines(self):
        """Integer (slope, intercept) pairs, one per point, common positive scaling.

        The translate through (x, y) contains p iff y < p.y - (p.x - x)^2 / s^2.
        Dropping the common -x^2/s^2 leaves the line 2 p.x x / s^2 + p.y - p.x^2 / s^2.
        """
        inv = 1 / (self.scale * self.scale)
        a = [2 * px * inv for px, _ in self.points]
        b = [py - px * px * inv for px, py in self.points]
        den = 1
        from math import lcm

        for v in a + b:
            den = lcm(den, v.denominator)
        return [int(v * den) for v in a], [int(v * den) for v in b]


def _level_sweep(A, B, m):
    """Top-m sets of the lines A[i] x + B[i] over increasing x, as sorted index tuples."""
    n = len(A)
    fa = np.array([float(v) for v in A])
    fb = np.array([float(v) for v in B])
    order = sorted(range(n), key=lambda i: A[i])
    top = set(order[:m])
    out = [tuple(sorted(top))]
    x_now = None  # exact Fraction, None = -infinity
    while True:
        best = None
        inside = np.zeros(n, dtype=bool)
        inside[list(top)] = True
        x_f = -np.inf if x_now is None else float(x_now)
        for t in top:
            mask = (~inside) & (fa > fa[t])
            idx = np.flatnonzero(mask)
            if idx.size == 0:
                continue
            xs = (fb[t] - fb[idx]) / (fa[idx] - fa[t])
            tol = 1e-9 * (1.0 + np.abs(xs))
            keep = xs > x_f - tol - (0 if x_now is None else 1e-9 * (1 + abs(x_f)))
            idx, xs, tol = idx[keep], xs[keep], tol[keep]
            if idx.size == 0:
                continue
            srt = np.argsort(xs, kind="stable")
            for pos in srt:
                if best is not None and xs[pos] > float(best) + 1e-9 * (1 + abs(float(best))) + tol[pos]:
                    break
                r = int(idx[pos])
                xe = Fraction(B[t] - B[r], A[r] - A[t])
                if x_now is not None and xe <= x_now:
                    continue
                if best is None or xe < best:
                    best = xe
        if best is None:
            return out
        x_now = best
        # lines tied with a member of the top set at the event value
        vals = {t: A[t] * x_now + B[t] for t in top}
        fx = float(x_now)
        approx = fa * fx + fb
        cand = set(top)
        for t in top:
            near = np.flatnonzero(np.abs(approx - approx[t]) <= 1e-9 * (1 + np.abs(approx) + abs(approx[t])) + 1e-12)
            for r in near.tolist():
                if r not in cand and A[r] * x_now + B[r] == vals[t]:
                    cand.add(r)
        ranked = sorted(cand, key=lambda i: (A[i] * x_now + B[i], A[i]), reverse=True)
        new_top = set(ranked[:m])
        if new_top != top:
            top = new_top
            out.append(tuple(sorted(top)))


def chain_from_points(g: SweepGenerator) -> ShiftChain:
    """The chain of point sets of the lowest translates holding exactly m points.

    Points are numbered 1..n by increasing x.  Sets are read off the open
    intervals between events; at an event the boundary point is excluded.
    """
    n = len(g.points)
    if n < g.m:
        raise ValueError(f"need at least m={g.m} points, got {n}")
    if g.m < 1:
        raise ValueError("m must be positive")
    A, B = g.depth_lines()
    sets = _level_sweep(A, B, g.m)
    return ShiftChain(n, g.m, [tuple(i + 1 for i in s) for s in sets])


def random_points(n: int, seed: int, span: int = 10**6):
    """n points with distinct integer x-coordinates, seeded."""
    rng = random.Random(seed)
    xs = rng.sample(range(-span, span), n)
    return [(Fraction(x), Fraction(rng.randrange(-span, span))) for x in xs]


# -- digraph D and quasi-trees ------------------------------------------------


@dataclass
class ShiftDigraph:
    n: int
    out_edge: dict  # tail -> head
    mid_neighbors: dict = field(default_factory=dict)  # middle -> (left, right) of its first triple

    @property
    def edges(self):
        return sorted(self.out_edge.items())


def build_digraph(c: ShiftChain) -> ShiftDigraph:
    """Streaming construction: a repeated middle points at the neighbor it repeats."""
    if c.m != 3:
        raise ValueError("the digraph is defined for 3-uniform chains")
    first: dict = {}
    out: dict = {}
    for a, b, cc in c.edges:
        if b not in first:
            first[b] = (a, cc)
            continue
        a0, c0 = first[b]
        if b not in out:
            if a == a0 and cc != c0:
                out[b] = a
            elif cc == c0 and a != a0:
                out[b] = cc
            elif a != a0 and cc != c0:
                raise ChainError(f"middle {b} repeats with no shared neighbor", ((a0, b, c0), (a, b, cc)))
        else:
            # every further triple must keep the shared neighbor
            h = out[b]
            if (h < b and a != h) or (h > b and cc != h):
                raise ChainError(f"middle {b} has triples pointing to two neighbors", ((a0, b, c0), (a, b, cc)))
    return ShiftDigraph(c.n, out, first)


@dataclass
class QuasiTree:
    vertices: list
    root: int
    doubled: tuple | None  # (root, other) when the root edge appears in both directions


def decompose_quasi_trees(d: ShiftDigraph):
    """Weak components of D, each checked to be a quasi-tree."""
    adj: dict = {v: [] for v in range(1, d.n + 1)}
    for u, v in d.out_edge.items():
        adj[u].append(v)
        adj[v].append(u)
    seen: set = set()
    comps = []
    for s in range(1, d.n + 1):
        if s in seen:
            continue
        comp = []
        q = deque([s])
        seen.add(s)
        while q:
            u = q.popleft()
            comp.append(u)
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    q.append(v)
        comp.sort()
        roots = [v for v in comp if v not in d.out_edge]
        if len(roots) == 1:
            comps.append(QuasiTree(comp, roots[0], None))
            continue
        # no sink: exactly one cycle, which must have length 2
        start = comp[0]
        path, pos = [], {}
        v = start
        while v not in pos:
            pos[v] = len(path)
            path.append(v)
            v = d.out_edge[v]
        cycle = path[pos[v]:]
        if len(cycle) != 2:
            raise ChainError(f"directed cycle of length {len(cycle)}", cycle)
        r, p = min(cycle), max(cycle)
        comps.append(QuasiTree(comp, r, (r, p)))
    return comps


# -- coloring -----------------------------------------------------------------


def _assign_spanning_edges(n, out_edge):
    """For each vertex y, one digraph edge whose span strictly contains y (or none)."""
    spans = sorted((min(u, v), max(u, v), u, v) for u, v in out_edge.items())
    assigned = {}
    best = None
    k = 0
    for y in range(1, n + 1):
        while k < len(spans) and spans[k][0] < y:
            if best is None or spans[k][1] > best[1]:
                best = spans[k]
            k += 1
        if best is not None and best[1] > y:
            assigned[y] = (best[2], best[3])
    return assigned


def color_special_chain(c: ShiftChain, reduce: bool = False, check: bool = True) -> dict:
    """Proper 2-coloring {vertex: Color} of a special 3-uniform shift-chain.

    1. BFS 2-colors each component of D, so a middle with an out-edge is
       separated from the neighbor its triples share.
    2. A middle y of out-degree 0 lies in exactly one triple {x<y<z}.  If some
       edge u->w of D spans y, then w is x or z, and y takes the color of u.
    3. Remaining middles, in increasing order, take the opposite of their x.
    4. A middle of out-degree 0 that got its color from its component and is
       spanned by no edge has a triple not yet guaranteed; a never-middle
       endpoint of that triple takes the opposite of the middle's color.
    5. Other never-middle vertices are Red.
    """
    if c.m != 3:
        if not reduce:
            raise ValueError("coloring is implemented for m = 3; pass reduce=True for larger m")
        c = reduce_to_triples(c)
    if check:
        ok, wit = is_shift_chain(c)
        if not ok:
            raise ChainError("not a shift-chain", wit)
        ok, wit = is_special(c)
        if not ok:
            raise ChainError("shift-chain is not special", wit)
    d = build_digraph(c)
    trace = []
    color: dict = {}
    for qt in decompose_quasi_trees(d):
        if len(qt.vertices) == 1:
            continue
        adj: dict = {}
        for u in qt.vertices:
            if u in d.out_edge:
                v = d.out_edge[u]
                adj.setdefault(u, []).append(v)
                adj.setdefault(v, []).append(u)
        color[qt.root] = Color.RED
        q = deque([qt.root])
        while q:
            u = q.popleft()
            for v in adj.get(u, ()):
                if v not in color:
                    color[v] = color[u].opposite
                    q.append(v)
                elif color[v] is color[u]:
                    raise ColoringContradiction(f"component of {qt.root} is not bipartite", [(u, v)])
    triple_of = {}
    for a, b, cc in c.edges:
        if b not in d.out_edge:
            triple_of[b] = (a, cc)
    assigned = _assign_spanning_edges(c.n, d.out_edge)
    for y, (x, z) in sorted(triple_of.items()):
        if y not in assigned:
            continue
        u, w = assigned[y]
        if w not in (x, z):
            raise ColoringContradiction(f"edge {u}->{w} spans {y} but misses its triple", [(x, y, z), (u, w)])
        want = color[u]
        if y in color and color[y] is not want:
            raise ColoringContradiction(f"vertex {y} already colored differently", [(x, y, z), (u, w), color[y]])
        color[y] = want
        trace.append(("spanned", y, u, w))
    # middles colored by their component but spanned by no edge: their triple
    # is not yet guaranteed and must be settled through an endpoint
    pending = {}
    for y, (x, z) in triple_of.items():
        if y in color and y not in assigned:
            for v in (x, z):
                pending.setdefault(v, []).append((x, y, z))

    def settled(x, y, z):
        return any(v in color and color[v] is not color[y] for v in (x, z))

    for y in range(1, c.n + 1):
        if y in color:
            continue
        if y in triple_of:
            x, _ = triple_of[y]
            color[y] = color[x].opposite if x in color else Color.BLUE
            continue
        color[y] = Color.RED
        for x, mid, z in pending.get(y, ()):
            if not settled(x, mid, z):
                color[y] = color[mid].opposite
                trace.append(("pending", y, (x, mid, z)))
                break
    ok, bad = validate_coloring(c, color)
    if not ok:
        raise ColoringContradiction(f"monochromatic triple {bad}", trace)
    return color


def validate_coloring(c: ShiftChain, col: dict):
    """(ok, witness edge)."""
    for e in c.edges:
        first = col[e[0]]
        if all(col[v] is first for v in e[1:]):
            return False, e
    return True, None


def brute_force_color(c: ShiftChain, jobs=None):
    """Some proper 2-coloring by exhaustive scan, or None when none exists."""
    if c.n > MAX_EXHAUSTIVE_VERTICES:
        raise ValueError(f"exhaustive scan limited to {MAX_EXHAUSTIVE_VERTICES} vertices")
    masks = [sum(1 << (v - 1) for v in e) for e in c.edges]
    hit = first_valid_mask(c.n, masks, masks, jobs)
    if hit is None:
        return None
    return {v: Color.BLUE if hit >> (v - 1) & 1 else Color.RED for v in range(1, c.n + 1)}


def coloring_to_dict(col: dict) -> dict:
    return {"colors": {str(v): col[v].value for v in sorted(col)}}


def coloring_from_dict(data: dict) -> dict:
    return {int(k): Color(v) for k, v in data["colors"].items()}


# -- counterexample search ----------------------------------------------------


@dataclass
class SearchResult:
    chain: ShiftChain | None
    nodes: int
    elapsed: float
    certificate: dict | None = None


def certify_unsplittable(c: ShiftChain) -> dict:
    """Shift-chain, non-special and non-2-colorable flags for a candidate."""
    chain_ok, _ = is_shift_chain(c)
    special, _ = is_special(c)
    return {
        "shift_chain": chain_ok,
        "special": special,
        "two_colorable": brute_force_color(c) is not None,
    }


def search_unsplittable_chain(n: int, m: int = 3, max_edges: int = 13, budget: float = 60.0, seed: int = 0) -> SearchResult:
    """Depth-first search for a non-2-colorable shift-chain of at most ``max_edges`` triples.

    Colorings are tracked as a bitset over the 2^(n-1) colorings with vertex 1
    Red; each triple removes those in which it is monochromatic.  A branch is
    cut when the surviving colorings cannot be removed by the triples still
    allowed above the last one.  Children are tried by the number of
    colorings they remove, ties broken in seeded random order.
    Special chains are never reported since they are always colorable.
    """
    if m != 3 or n > 12:
        raise ValueError("search supports m = 3 and n <= 12")
    start = time.monotonic()
    rng = random.Random(seed)
    from itertools import combinations

    triples = sorted(combinations(range(1, n + 1), 3))
    full = (1 << (1 << (n - 1))) - 1
    kill = []
    for t in triples:
        bits = 0
        for cmask in range(1 << (n - 1)):
            col = cmask << 1  # vertex 1 is bit 0, always 0
            vals = {(col >> (v - 1)) & 1 for v in t}
            if len(vals) == 1:
                bits |= 1 << cmask
        kill.append(bits)
    per_edge = max(bin(k).count("1") for k in kill) if kill else 1
    succ = [[j for j in range(len(triples)) if j != i and precedes(triples[i], triples[j])] for i in range(len(triples))]
    # colorings that some triple above t can still kill
    reach = []
    for i in range(len(triples)):
        r = 0
        for j in succ[i]:
            r |= kill[j]
        reach.append(r)
    nodes = 0
    found = None

    def dfs(chain, alive):
        nonlocal nodes, found
        if found is not None or time.monotonic() - start > budget:
            return
        nodes += 1
        if alive == 0:
            cand = ShiftChain(n, 3, [triples[i] for i in chain])
            if not is_special(cand)[0]:
                found = cand
            return
        left = max_edges - len(chain)
        if left <= 0 or bin(alive).count("1") > left * per_edge:
            return
        if chain and alive & ~reach[chain[-1]]:
            return
        options = succ[chain[-1]] if chain else range(len(triples))
        scored = [(bin(alive & kill[j]).count("1"), rng.random(), j) for j in options]
        scored = [s for s in scored if s[0] > 0]
        scored.sort(reverse=True)
        for _, _, j in scored:
            dfs(chain + [j], alive & ~kill[j])
            if found is not None:
                return

    dfs([], full)
    elapsed = time.monotonic() - start
    cert = certify_unsplittable(found) if found is not None else None
    return SearchResult(found, nodes, elapsed, cert)


# -- dual statement for point sets -------------------------------------------


@dataclass
class CoverReport:
    n_translates: int
    bichromatic: int
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures and self.bichromatic == self.n_translates


def color_unbounded_cover(g: SweepGenerator):
    """2-color points so that every lowest translate holding 3 points sees both colors.

    Returns (coloring keyed by point index 1..n in x-order, report).
    """
    if g.m != 3:
        raise ValueError("the covering statement is for m = 3")
    chain = chain_from_points(g)
    col = color_special_chain(chain)
    fails = [e for e in chain.edges if len({col[v] for v in e}) < 2]
    return col, CoverReport(len(chain.edges), len(chain.edges) - len(fails), fails)


def points_to_dict(points) -> dict:
    return {"points": [[format_rational(x), format_rational(y)] for x, y in points]}


def points_from_dict(data: dict):
    return [(parse_rational(x), parse_rational(y)) for x, y in data["points"]]
