"""Command-line front door: ingestion, generation, computation, queries."""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import boxtree
from .analysis import bench_indexed_vs_naive, count_restricted
from .archive import read_archive, write_archive
from .datasets import auto_perturb_radius, gen_swarm, ingest_csv
from .staircase import CuboidSet, temporal_alpha_shape


class StageError(RuntimeError):
    def __init__(self, stage, err):
        super().__init__(f"{stage}: {err}")


def _points_only_cuboids(ds):
    return CuboidSet(ds.xs, ds.ys, [], 0)


def _load_points(path):
    if str(path).endswith(".csv"):
        ds = ingest_csv(path)
        return ds.name, ds.xs, ds.ys, 0
    arc = read_archive(path)
    return arc.name, arc.cuboids.xs, arc.cuboids.ys, arc.stride


def cmd_ingest(args):
    radius = args.perturb_radius
    ds = ingest_csv(args.csv, dedup=not args.no_dedup, seed=args.seed)
    if radius is None and args.auto_perturb:
        radius = auto_perturb_radius(ds.xs, ds.ys)
    if radius:
        ds = ingest_csv(
            args.csv, dedup=not args.no_dedup, perturb_radius=radius, seed=args.seed
        )
    write_archive(args.output, ds.name, _points_only_cuboids(ds), stride=0)
    print(f"n={ds.n}")
    print(f"dropped_duplicate_t={ds.meta['dropped_duplicate_t']}")
    print(f"dropped_duplicate_xy={ds.meta['dropped_duplicate_xy']}")
    print(f"perturb_radius={radius or 0.0}")
    print(f"archive={args.output}")


def cmd_gen_swarm(args):
    ds = gen_swarm(
        followers=args.followers,
        leaders=args.leaders,
        steps=args.steps,
        seed=args.seed,
        canvas=args.canvas,
        step_length=args.step_length,
    )
    write_archive(args.output, ds.name, _points_only_cuboids(ds), stride=ds.meta["stride"])
    print(f"n={ds.n}")
    print(f"stride={ds.meta['stride']}")
    print(f"archive={args.output}")


def cmd_compute(args):
    name, xs, ys, stride = _load_points(args.input)
    pts = [(k + 1, float(xs[k]), float(ys[k])) for k in range(len(xs))]
    t0 = time.perf_counter()
    if args.enumerate_only:
        from .enumeration import enumerate_all
        from .geometry import TimedPoint

        res = enumerate_all([TimedPoint(*p) for p in pts])
        t1 = time.perf_counter()
        print(f"n={len(xs)}")
        print(f"triangles={len(res.records)}")
        print(f"enumerate_seconds={t1 - t0:.3f}")
        return
    cs = temporal_alpha_shape(pts)
    t1 = time.perf_counter()
    tree = None
    if not args.no_index:
        tree = boxtree.build(cs)
    t2 = time.perf_counter()
    bound = 3 * (len(xs) - 1) * cs.record_count
    if len(cs) > bound:
        raise StageError("compute", f"cuboid count {len(cs)} exceeds bound {bound}")
    write_archive(args.output, name, cs, tree, stride=stride)
    print(f"n={len(xs)}")
    print(f"triangles={cs.record_count}")
    print(f"cuboids={len(cs)}")
    print(f"cuboid_bound={bound}")
    print(f"ratio_cuboids_per_triangle={len(cs) / max(cs.record_count, 1):.3f}")
    print(f"max_cuboids_per_edge={cs.max_cuboids_per_edge()}")
    print(f"pipeline_seconds={t1 - t0:.3f}")
    print(f"index_seconds={t2 - t1:.3f}")
    print(f"archive={args.output}")


def cmd_stats(args):
    arc = read_archive(args.archive)
    cs = arc.cuboids
    finite = cs.alpha_hi[np.isfinite(cs.alpha_hi)]
    print(f"name={arc.name}")
    print(f"n={cs.n}")
    print(f"triangles={cs.record_count}")
    print(f"cuboids={len(cs)}")
    print(f"stride={arc.stride}")
    print(f"has_index={arc.tree is not None}")
    if len(cs):
        print(f"alpha_min_observed={cs.alpha_lo.min()!r}")
        print(f"alpha_max_finite={finite.max()!r}" if len(finite) else "alpha_max_finite=")
        print(f"unbounded_alpha_cuboids={int(np.sum(~np.isfinite(cs.alpha_hi)))}")
        print(f"max_cuboids_per_edge={cs.max_cuboids_per_edge()}")


def cmd_count_restricted(args):
    arc = read_archive(args.archive)
    stride = args.stride if args.stride else (arc.stride or 1)
    count, frac = count_restricted(arc.cuboids, stride, args.min_steps, args.min_alpha)
    print(f"stride={stride}")
    print(f"min_steps={args.min_steps}")
    print(f"min_alpha={args.min_alpha}")
    print(f"count={count}")
    print(f"fraction={frac:.6f}")


def cmd_query(args):
    arc = read_archive(args.archive)
    tree = arc.tree if arc.tree is not None else boxtree.build(arc.cuboids)
    cs = arc.cuboids
    if not (1 <= args.i < args.j <= cs.n):
        raise StageError("query", f"window ({args.i},{args.j}) out of range")
    ids = tree.stab(args.i, args.j, args.alpha)
    edges = sorted(
        {
            (int(cs.edge_a[k]), int(cs.edge_b[k]), int(cs.side[k]))
            for k in ids
        }
    )
    print(f"count={len(edges)}")
    for a, b, s in edges:
        print(f"edge={a},{b},{'front' if s > 0 else 'back'}")


def cmd_serve(args):
    import uvicorn

    from .service import create_app

    app = create_app(read_archive(args.archive))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")


def cmd_bench(args):
    arc = read_archive(args.archive)
    tree = arc.tree if arc.tree is not None else boxtree.build(arc.cuboids)
    sizes = [int(s) for s in args.window_sizes.split(",")]
    alphas = [float(a) for a in args.alphas.split(",")]
    out = bench_indexed_vs_naive(
        arc.cuboids, tree, sizes, alphas, queries_per_size=args.queries, seed=args.seed
    )
    print(f"queries={out['queries']}")
    print(f"naive_mean_s={out['naive_mean_s']:.6f}")
    print(f"indexed_mean_s={out['indexed_mean_s']:.6f}")
    print(f"speedup={out['speedup']:.1f}")


def build_parser():
    p = argparse.ArgumentParser(
        prog="temporal-alpha",
        description="Precompute and query alpha-shapes of every time window",
    )
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("ingest", help="clean a CSV of (t,x,y) rows into an archive")
    q.add_argument("csv")
    q.add_argument("-o", "--output", required=True)
    q.add_argument("--no-dedup", action="store_true")
    q.add_argument("--perturb-radius", type=float, default=None)
    q.add_argument("--auto-perturb", action="store_true")
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_ingest, stage="ingest")

    q = sub.add_parser("gen-swarm", help="generate a follower-swarm dataset")
    q.add_argument("-o", "--output", required=True)
    q.add_argument("--followers", type=int, default=398)
    q.add_argument("--leaders", type=int, default=2)
    q.add_argument("--steps", type=int, default=1200)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--canvas", type=float, default=40.0)
    q.add_argument("--step-length", type=float, default=0.4)
    q.set_defaults(func=cmd_gen_swarm, stage="gen-swarm")

    q = sub.add_parser("compute", help="run the pipeline and write an archive")
    q.add_argument("input", help="points archive or CSV")
    q.add_argument("-o", "--output", required=True)
    q.add_argument("--enumerate-only", action="store_true")
    q.add_argument("--no-index", action="store_true")
    q.set_defaults(func=cmd_compute, stage="compute")

    q = sub.add_parser("stats", help="print archive statistics")
    q.add_argument("archive")
    q.set_defaults(func=cmd_stats, stage="stats")

    q = sub.add_parser("count-restricted", help="count cuboids reachable by restricted queries")
    q.add_argument("archive")
    q.add_argument("--stride", type=int, default=0)
    q.add_argument("--min-steps", type=int, default=1)
    q.add_argument("--min-alpha", type=float, default=0.0)
    q.set_defaults(func=cmd_count_restricted, stage="count-restricted")

    q = sub.add_parser("query", help="stab the archive at one (i, j, alpha)")
    q.add_argument("archive")
    q.add_argument("--i", type=int, required=True)
    q.add_argument("--j", type=int, required=True)
    q.add_argument("--alpha", type=float, required=True)
    q.set_defaults(func=cmd_query, stage="query")

    q = sub.add_parser("serve", help="serve the archive over HTTP")
    q.add_argument("archive")
    q.add_argument("--port", type=int, default=8787)
    q.add_argument("--host", default="127.0.0.1")
    q.set_defaults(func=cmd_serve, stage="serve")

    q = sub.add_parser("bench", help="compare indexed queries against the naive path")
    q.add_argument("archive")
    q.add_argument("--window-sizes", default="64,256")
    q.add_argument("--alphas", default="0.2,0.8,2.0")
    q.add_argument("--queries", type=int, default=3)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_bench, stage="bench")

    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except StageError as e:
        print(str(e), file=sys.stderr)
        return 2
    except (ValueError, OSError) as e:
        print(f"{args.stage}: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
