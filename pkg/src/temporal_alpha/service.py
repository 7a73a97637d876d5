"""Read-only HTTP service over a computed archive for interactive clients."""

from __future__ import annotations

import math
import time
from contextlib import asynccontextmanager

import numpy as np
from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import boxtree
from .archive import Archive, read_archive


def _alpha_json(v):
    return "inf" if math.isinf(v) else v


def create_app(archive: Archive | str | None = None, edge_cap=1_000_000) -> FastAPI:
    """Service exposing /meta, /query and /points for one archive.

    Pass a loaded Archive for immediate readiness, or a path to defer loading
    to startup; requests before the archive is ready get 503.
    """
    deferred_path = archive if not isinstance(archive, Archive) else None

    @asynccontextmanager
    async def lifespan(app_):
        if deferred_path is not None and app_.state.archive is None:
            attach(read_archive(deferred_path))
        yield

    app = FastAPI(title="temporal-alpha-query", lifespan=lifespan)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.archive = None
    app.state.tree = None
    app.state.edge_cap = edge_cap

    def attach(arc: Archive):
        app.state.archive = arc
        app.state.tree = arc.tree if arc.tree is not None else boxtree.build(arc.cuboids)

    if isinstance(archive, Archive):
        attach(archive)

    def ready() -> Archive:
        arc = app.state.archive
        if arc is None:
            raise HTTPException(status_code=503, detail="archive not loaded yet")
        return arc

    @app.get("/meta")
    def meta():
        arc = ready()
        cs = arc.cuboids
        finite = cs.alpha_hi[np.isfinite(cs.alpha_hi)]
        body = {
            "n": int(cs.n),
            "alpha_min_observed": float(cs.alpha_lo.min()) if len(cs) else None,
            "alpha_max_finite": float(finite.max()) if len(finite) else None,
            "cuboid_count": int(len(cs)),
            "dataset_name": arc.name,
        }
        if arc.stride:
            body["stride"] = int(arc.stride)
        return body

    @app.get("/query")
    def query(i: int = Query(...), j: int = Query(...), alpha: str = Query(...)):
        arc = ready()
        cs = arc.cuboids
        try:
            a = float(alpha)
        except ValueError:
            raise HTTPException(400, f"alpha is not a number: {alpha!r}") from None
        if math.isnan(a) or a <= 0:
            raise HTTPException(400, "alpha must be positive")
        if not (1 <= i < j <= cs.n):
            raise HTTPException(400, f"window ({i},{j}) out of range for n={cs.n}")
        t0 = time.perf_counter()
        ids = app.state.tree.stab(i, j, a)
        edges = {}
        for k in ids:
            key = (int(cs.edge_a[k]), int(cs.edge_b[k]), int(cs.side[k]))
            edges[key] = (float(cs.alpha_lo[k]), float(cs.alpha_hi[k]))
        elapsed = (time.perf_counter() - t0) * 1e6
        if len(edges) > app.state.edge_cap:
            raise HTTPException(413, f"result exceeds edge cap ({len(edges)})")
        body = {
            "edges": [
                {
                    "a": a_,
                    "b": b_,
                    "side": s_,
                    "alpha_lo": lo,
                    "alpha_hi": _alpha_json(hi),
                }
                for (a_, b_, s_), (lo, hi) in sorted(edges.items())
            ],
            "count": len(edges),
            "elapsed_microseconds": elapsed,
        }
        return JSONResponse(body)

    @app.get("/points")
    def points(i: int = Query(...), j: int = Query(...)):
        arc = ready()
        cs = arc.cuboids
        if not (1 <= i < j <= cs.n):
            raise HTTPException(400, f"window ({i},{j}) out of range for n={cs.n}")
        return {
            "points": [
                {"index": k, "x": float(cs.xs[k - 1]), "y": float(cs.ys[k - 1])}
                for k in range(i, j + 1)
            ]
        }

    return app
