"""Command line entry point: ``coversplit <noun> <verb> ...``.

Exit codes: 0 success, 1 a check failed, 2 invalid arguments or input,
3 a capacity guard was hit.  Results go to stdout, witnesses to stderr.
Every command that writes a file also writes ``<file>.manifest.json``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction
from math import ceil, floor

from . import __version__
from .geometry import RationalPoint
from .hypergraph import (
    AbstractHypergraph,
    CapacityError,
    Colorability,
    build_hypergraph,
    find_forced_monochromatic,
    is_two_colorable,
    validate_hypergraph,
)
from .lll import (
    CoveringInstance,
    VacuousBound,
    ball_threshold,
    ball_threshold_k,
    build_cell_hypergraph,
    dual_shatter_count,
    edge_intersection_degrees,
    eq1_bound,
    homothet_threshold,
    lll_degree_threshold,
    max_multiplicity,
    random_covering,
    resample_split,
    verify_split,
)
from .rational import format_rational, parse_rational
from .realization import (
    ExtendedPointSet,
    Realization,
    add_escape_points,
    build_realization,
    check_no_foreign_disk_inside_union,
    extend_with_grid,
    min_disk_coverage,
    realized_hypergraph,
    verify_realization,
)
from .shiftchain import (
    ChainError,
    ColoringContradiction,
    ShiftChain,
    SweepGenerator,
    chain_from_points,
    coloring_from_dict,
    coloring_to_dict,
    color_special_chain,
    color_unbounded_cover,
    is_shift_chain,
    is_special,
    points_from_dict,
    search_unsplittable_chain,
    validate_coloring,
)
from .svg import export_svg


class UsageError(Exception):
    pass


def rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def show(q) -> str:
    """Human-readable rational: integers without a denominator."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else format_rational(q)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


class Run:
    """Collects what a run read and wrote, for its manifest."""

    def __init__(self, argv, seed=None):
        self.argv = list(argv)
        self.seed = seed
        self.inputs = {}
        self.outputs = []
        self.start = time.monotonic()

    def read(self, path):
        data = _read_json(path)
        self.inputs[str(path)] = _sha256(path)
        return data

    def write(self, path, text):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        self.outputs.append(str(path))

    def finish(self):
        if not self.outputs:
            return
        manifest = {
            "command": ["coversplit", *self.argv],
            "seed": self.seed,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "version": __version__,
            "wall_time_s": round(time.monotonic() - self.start, 3),
        }
        for out in self.outputs:
            with open(out + ".manifest.json", "w", encoding="utf-8") as fh:
                fh.write(_dump(manifest))


def err(*parts):
    print(*parts, file=sys.stderr)


# -- hypergraph ---------------------------------------------------------------


def cmd_hypergraph(args, run: Run) -> int:
    if args.action == "build":
        h = build_hypergraph(args.k, args.l)
        text = _dump(h.to_dict())
        if args.out:
            run.write(args.out, text)
        else:
            sys.stdout.write(text)
        print(f"H({h.k},{h.l}): {h.n_vertices} vertices, {len(h.red_edges)} red edges, {len(h.blue_edges)} blue edges")
        return 0
    h = AbstractHypergraph.from_dict(run.read(args.input))
    rep = validate_hypergraph(h)
    for f in rep.failures:
        err("invalid:", f)
    mode = "exhaustive" if args.exhaustive else "backtrack" if args.backtrack else "auto"
    res = is_two_colorable(h, mode=mode, budget=args.budget)
    print(res.status.value)
    if res.status is Colorability.COLORABLE:
        err("coloring:", json.dumps({str(v): c.value for v, c in sorted(res.coloring.items())}))
        if args.expect_unsplittable:
            return 1
    elif res.status is Colorability.NOT_COLORABLE:
        eid, cls = find_forced_monochromatic(h, {v: "R" for v in h.vertices})
        err(f"all-red coloring: monochromatic {cls.name} edge {eid} {list(h.edge(eid)[1])}")
    elif args.expect_unsplittable:
        return 1
    return 0 if rep.ok else 1


# -- realize ------------------------------------------------------------------


def _load_realization(run, path):
    data = run.read(path)
    if "base" in data:
        return ExtendedPointSet.from_dict(data)
    return Realization.from_dict(data)


def cmd_realize(args, run: Run) -> int:
    a = args.action
    if a == "build":
        r = build_realization(args.k, args.l, args.eps)
        run.write(args.out, _dump(r.to_dict()))
        print(f"realization H({r.k},{r.l}) eps={show(r.eps)}: {len(r.points)} points, {len(r.disks)} disks")
        return 0
    obj = _load_realization(run, args.input)
    r = obj.base if isinstance(obj, ExtendedPointSet) else obj
    if a == "verify":
        rep = verify_realization(r)
        for line in rep.lines():
            print(line)
        for n, p in sorted(rep.properties.items()):
            for w in p.witnesses:
                err(f"property {n} witness: {w}")
        for w in rep.boundary_witnesses:
            err(f"point {w[0]} on circle of disk {w[1]}")
        status = is_two_colorable(realized_hypergraph(r)).status if r.hypergraph.n_vertices <= 22 else None
        if status is not None:
            print(f"realized incidences: {status.value}")
        return 0 if rep.ok else 1
    if a == "extend":
        e = extend_with_grid(r, args.m, args.step, args.pad)
        if not args.no_escape:
            e = add_escape_points(e, args.m, args.probe)
        run.write(args.out, _dump(e.to_dict()))
        print(f"extended: {len(e.extra_points)} extra points, grid step {show(e.grid_step)}")
        return 0
    if a == "coverage":
        if not isinstance(obj, ExtendedPointSet):
            e = ExtendedPointSet(r, [], args.probe * 2, r.bounding_box().expanded(3))
        else:
            e = obj
        rep = min_disk_coverage(e, args.m, args.probe)
        print(f"MIN-COVER {rep.minimum} at ({show(rep.witness.x)}, {show(rep.witness.y)}) over {rep.n_probes} probes")
        for c, n in rep.deficient[:20]:
            err(f"probe ({show(c.x)}, {show(c.y)}) holds {n} < {args.m}")
        return 0 if rep.minimum >= args.m else 1
    if a == "escape":
        box = r.bounding_box().expanded(1)
        p = args.pitch
        probes = [
            RationalPoint(i * p, j * p)
            for i in range(ceil(box.x0 / p), floor(box.x1 / p) + 1)
            for j in range(ceil(box.y0 / p), floor(box.y1 / p) + 1)
        ]
        rep = check_no_foreign_disk_inside_union(r, probes)
        found = sum(1 for _, q, _ in rep.results if q is not None)
        skipped = sum(1 for _, _, note in rep.results if note.startswith("skipped"))
        print(f"exposed: {rep.exposed}")
        print(f"escape points: {found} of {len(probes)} probes ({skipped} skipped)")
        for c, q, note in rep.results:
            if q is None and not note.startswith("skipped"):
                err(f"probe ({show(c.x)}, {show(c.y)}): {note}")
        return 0 if rep.all_escaped else 1
    if a == "svg":
        export_svg(obj, args.scale, args.out)
        run.outputs.append(args.out)
        print(f"wrote {args.out}")
        return 0
    raise UsageError(a)


# -- chain --------------------------------------------------------------------


def cmd_chain(args, run: Run) -> int:
    a = args.action
    if a in ("from-points", "cover"):
        if args.shape != "parabola":
            raise UsageError("only the parabola shape is built in")
        g = SweepGenerator(points_from_dict(run.read(args.points)), args.m, args.scale)
        if a == "cover":
            col, rep = color_unbounded_cover(g)
            if args.out:
                run.write(args.out, _dump(coloring_to_dict(col)))
            print(f"translates: {rep.n_translates}, bichromatic: {rep.bichromatic}")
            for e in rep.failures:
                err("monochromatic translate:", list(e))
            return 0 if rep.ok else 1
        c = chain_from_points(g)
        text = _dump(c.to_dict())
        if args.out:
            run.write(args.out, text)
        else:
            sys.stdout.write(text)
        print(f"chain: n={c.n} m={c.m} edges={len(c.edges)}", file=sys.stderr if not args.out else sys.stdout)
        return 0
    if a == "search":
        res = search_unsplittable_chain(args.n, args.m, args.edges, args.budget, args.seed)
        if res.chain is None:
            print(f"EXHAUSTED-BUDGET after {res.nodes} nodes")
            return 0
        print("FOUND", json.dumps([list(e) for e in res.chain.edges]))
        cert = res.certificate
        print(f"shift-chain: {cert['shift_chain']}, special: {cert['special']}, 2-colorable: {cert['two_colorable']}")
        if args.out:
            run.write(args.out, _dump(res.chain.to_dict()))
        ok = cert["shift_chain"] and not cert["special"] and not cert["two_colorable"]
        return 0 if ok else 1
    c = ShiftChain.from_dict(run.read(args.input))
    if a == "check":
        ok, wit = is_shift_chain(c)
        print(f"shift-chain: {ok}")
        if not ok:
            err("witness:", wit)
            return 1
        sp, wit = is_special(c)
        print(f"special: {sp}")
        if not sp:
            err("witness:", wit)
        return 0
    if a == "color":
        col = color_special_chain(c, reduce=args.reduce)
        text = _dump(coloring_to_dict(col))
        if args.out:
            run.write(args.out, text)
        else:
            sys.stdout.write(text)
        ok, bad = validate_coloring(c if c.m == 3 else ShiftChain(c.n, 3, [e[:3] for e in c.edges]), col)
        return 0 if ok else 1
    if a == "verify":
        col = coloring_from_dict(run.read(args.coloring))
        missing = [v for v in range(1, c.n + 1) if v not in col]
        if missing:
            raise UsageError(f"coloring misses vertices {missing[:10]}")
        ok, bad = validate_coloring(c, col)
        print("VALID" if ok else "INVALID")
        if not ok:
            err("monochromatic edge:", list(bad))
        return 0 if ok else 1
    raise UsageError(a)


# -- split --------------------------------------------------------------------


def cmd_split(args, run: Run) -> int:
    a = args.action
    if a == "thresholds":
        print(f"lll degree bound k^(m-1)/(4(k-1)^m): {show(lll_degree_threshold(args.k, args.m))}")
        b = ball_threshold(args.d, args.m)
        print(f"ball bound c_d 2^(m/d) = 2^({show(b.exponent)}), floor {b.floor}")
        bk = ball_threshold_k(args.k, args.d, args.m)
        print(f"ball bound for k={args.k}: ({show(bk.radicand)})^(1/{args.d}), floor {bk.floor}")
        try:
            print(f"homothet bound 2^((m-11)/2): floor {homothet_threshold(args.m)}")
        except VacuousBound:
            print("homothet bound 2^((m-11)/2): vacuous (m < 11)")
        return 0
    if a == "generate":
        inst, _, attempts = random_covering(args.seed, args.m, args.max_degree)
        run.write(args.out, _dump(inst.to_dict()))
        print(f"covering with {len(inst.disks)} disks after {attempts} attempts")
        return 0
    inst = CoveringInstance.from_dict(run.read(args.input))
    if a == "shatter":
        n = len(inst.disks)
        count = dual_shatter_count(inst.centers)
        print(count)
        print(f"bound C(n-1,2)+C(n,0)+C(n,1)+C(n,2) = {eq1_bound(n)}, n^2-n+2 = {n * n - n + 2}", file=sys.stderr)
        return 0
    h = build_cell_hypergraph(inst)
    if a == "build-cells":
        degs = edge_intersection_degrees(h)
        print(f"cells: {len(h.edges)}, min size {h.min_edge_size()}, max multiplicity M={max_multiplicity(h)}, N={max(degs, default=0)}")
        if h.uncovered is not None:
            err(f"uncovered region point ({show(h.uncovered.x)}, {show(h.uncovered.y)})")
        if args.out:
            data = {
                "edges": [list(e) for e in h.edges],
                "representatives": [[format_rational(p.x), format_rational(p.y)] for p in h.representatives],
            }
            run.write(args.out, _dump(data))
        return 0 if h.uncovered is None and h.min_edge_size() >= inst.m_target else 1
    if a == "run":
        res = resample_split(h, args.k, args.seed, args.max_rounds)
        print(f"{'OK' if res.success else 'FAILED'} after {res.rounds} resampling rounds (local lemma hypothesis {'holds' if res.hypothesis_held else 'fails'})")
        for e in res.stuck[:10]:
            err("stuck edge:", list(e))
        data = {"seed": args.seed, "colors": {str(v): res.colors[v] for v in sorted(res.colors)}}
        if args.out:
            run.write(args.out, _dump(data))
        else:
            sys.stdout.write(_dump(data))
        return 0 if res.success else 1
    if a == "verify":
        data = run.read(args.colors)
        colors = {int(k): int(v) for k, v in data["colors"].items()}
        missing = [d.id for d in inst.disks if d.id not in colors]
        if missing:
            raise UsageError(f"colors missing for disks {missing[:10]}")
        k = args.k if args.k else max(colors.values()) + 1
        rep = verify_split(inst, colors, k, h)
        print("OK" if rep.ok else "FAILED", f"({rep.checked} cells checked)")
        for p, cl in rep.failures[:20]:
            err(f"class {cl} misses cell at ({show(p.x)}, {show(p.y)})")
        return 0 if rep.ok else 1
    raise UsageError(a)


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coversplit", description="Unsplittable coverings: build and verify.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--jobs", type=int, default=None, help="worker processes (also COVER_SPLIT_JOBS)")
    sub = p.add_subparsers(dest="noun", required=True)

    hg = sub.add_parser("hypergraph").add_subparsers(dest="action", required=True)
    b = hg.add_parser("build")
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--l", type=int, required=True)
    b.add_argument("--out")
    c = hg.add_parser("check")
    c.add_argument("--in", dest="input", required=True)
    g = c.add_mutually_exclusive_group()
    g.add_argument("--exhaustive", action="store_true")
    g.add_argument("--backtrack", action="store_true")
    c.add_argument("--budget", type=int, default=1_000_000)
    c.add_argument("--expect-unsplittable", action="store_true")

    rz = sub.add_parser("realize").add_subparsers(dest="action", required=True)
    b = rz.add_parser("build")
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--l", type=int, required=True)
    b.add_argument("--eps", type=rational_arg, default=Fraction(1, 100))
    b.add_argument("--out", required=True)
    v = rz.add_parser("verify")
    v.add_argument("--in", dest="input", required=True)
    e = rz.add_parser("extend")
    e.add_argument("--in", dest="input", required=True)
    e.add_argument("--m", type=int, required=True)
    e.add_argument("--step", type=rational_arg, default=None)
    e.add_argument("--pad", type=rational_arg, default=Fraction(3))
    e.add_argument("--probe", type=rational_arg, default=Fraction(1, 16))
    e.add_argument("--no-escape", action="store_true", help="grid points only")
    e.add_argument("--out", required=True)
    cv = rz.add_parser("coverage")
    cv.add_argument("--in", dest="input", required=True)
    cv.add_argument("--m", type=int, required=True)
    cv.add_argument("--probe", type=rational_arg, default=Fraction(1, 16))
    es = rz.add_parser("escape")
    es.add_argument("--in", dest="input", required=True)
    es.add_argument("--pitch", type=rational_arg, default=Fraction(1, 16))
    sv = rz.add_parser("svg")
    sv.add_argument("--in", dest="input", required=True)
    sv.add_argument("--out", required=True)
    sv.add_argument("--scale", type=rational_arg, default=Fraction(200))

    ch = sub.add_parser("chain").add_subparsers(dest="action", required=True)
    for name in ("from-points", "cover"):
        f = ch.add_parser(name)
        f.add_argument("--points", required=True)
        f.add_argument("--m", type=int, default=3)
        f.add_argument("--shape", default="parabola", choices=["parabola"])
        f.add_argument("--scale", type=rational_arg, default=Fraction(1))
        f.add_argument("--out")
    c = ch.add_parser("check")
    c.add_argument("--in", dest="input", required=True)
    c = ch.add_parser("color")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--reduce", action="store_true", help="color m > 3 chains through their first three elements")
    c.add_argument("--out")
    c = ch.add_parser("verify")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--coloring", required=True)
    s = ch.add_parser("search")
    s.add_argument("--n", type=int, default=9)
    s.add_argument("--m", type=int, default=3)
    s.add_argument("--edges", type=int, default=13)
    s.add_argument("--budget", type=float, default=60.0, help="seconds")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out")

    sp = sub.add_parser("split").add_subparsers(dest="action", required=True)
    t = sp.add_parser("thresholds")
    t.add_argument("--k", type=int, default=2)
    t.add_argument("--m", type=int, required=True)
    t.add_argument("--d", type=int, default=2)
    gen = sp.add_parser("generate")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--m", type=int, default=10)
    gen.add_argument("--max-degree", type=int, default=128)
    gen.add_argument("--out", required=True)
    bc = sp.add_parser("build-cells")
    bc.add_argument("--in", dest="input", required=True)
    bc.add_argument("--out")
    r = sp.add_parser("run")
    r.add_argument("--in", dest="input", required=True)
    r.add_argument("--k", type=int, default=2)
    r.add_argument("--seed", type=int, required=True)
    r.add_argument("--max-rounds", type=int, default=1_000_000)
    r.add_argument("--out")
    vf = sp.add_parser("verify")
    vf.add_argument("--in", dest="input", required=True)
    vf.add_argument("--colors", required=True)
    vf.add_argument("--k", type=int, default=None)
    sh = sp.add_parser("shatter")
    sh.add_argument("--in", dest="input", required=True)
    return p


HANDLERS = {"hypergraph": cmd_hypergraph, "realize": cmd_realize, "chain": cmd_chain, "split": cmd_split}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.jobs is not None:
        if args.jobs < 1:
            err("--jobs must be positive")
            return 2
        os.environ["COVER_SPLIT_JOBS"] = str(args.jobs)
    run = Run(argv, getattr(args, "seed", None))
    try:
        code = HANDLERS[args.noun](args, run)
    except CapacityError as exc:
        err("capacity:", exc)
        return 3
    except (ChainError, ColoringContradiction) as exc:
        err("error:", exc)
        if getattr(exc, "witness", None) is not None:
            err("witness:", exc.witness)
        return 1
    except (UsageError, ValueError, KeyError, TypeError) as exc:
        err("invalid input:", exc)
        return 2
    run.finish()
    return code


if __name__ == "__main__":
    sys.exit(main())
