"""Enumeration of every Delaunay triangle of every time window.

One incremental construction conceptually runs per suffix of the point
sequence, but only the first runs in full. Each later suffix keeps a
differential structure: the triangulated hole left by removing the suffix's
preceding point from the previous suffix. A hole only changes at column j
when the edge between its removed point and p_j becomes Delaunay in the
suffix above, and every change of any structure at column j creates tiles
incident to p_j, so creations in upper rows serve as triggers for lower
rows. Work is therefore proportional to the number of distinct records.

Each tile created anywhere becomes exactly one output record. A record's
activity rectangle in (window-start, window-end) space is
[i_before + 1, i_lower] x [i_upper, i_after - 1], with sentinels 0 for
"no earlier invalidator" and 0 in ``i_after`` for "never destroyed".

Enumeration itself is sequential (columns depend on each other); the returned
records and registry are immutable afterwards and safe to share.
"""

from __future__ import annotations

import heapq
from collections import defaultdict

from .delaunay import (
    INF,
    IntegrityError,
    Tile,
    Triangulation,
    build_delaunay,
    fill_cavity,
    _edge_key,
)
from .geometry import TimedPoint, incircle_sign, orient_sign

TriangleRecord = Tile


def record_i_lower(rec: Tile) -> int:
    return min(v for v in rec.vertices if v != INF)


def record_i_upper(rec: Tile) -> int:
    return max(rec.vertices)


def record_rect(rec: Tile, n: int):
    """Inclusive activity rectangle (i_min, i_max, j_min, j_max)."""
    i_after = rec.i_after if rec.i_after else n + 1
    return (rec.i_before + 1, record_i_lower(rec), record_i_upper(rec), i_after - 1)


class _Row:
    """Differential structure for one suffix: the triangulated hole of the
    removed point, with link-edge pointers to its current inner tiles."""

    __slots__ = ("removed", "tiles", "boundary")

    def __init__(self, removed):
        self.removed = removed
        self.tiles = set()
        self.boundary = {}


class EnumerationResult:
    def __init__(self, points, records, n):
        self.points = points
        self.records = records
        self.n = n

    @property
    def created_count(self):
        return len(self.records)

    def registry(self):
        """Coface lists per edge and side.

        Returns {(a, b): {side: [[rec, ...], ...]}} where each inner list
        holds the cofaces sharing one left rectangle boundary (one suffix),
        ordered by creation time, and lists are ordered by that shared left
        boundary.
        """
        xs = [p.x for p in self.points]
        ys = [p.y for p in self.points]
        grouped = defaultdict(lambda: defaultdict(dict))
        for rec in self.records:
            if rec.is_facet():
                (a, b), side = rec.key()
                grouped[(a, b)][side].setdefault(rec.i_before, []).append(rec)
                continue
            vs = rec.vertices
            for k in range(3):
                a, b = vs[(k + 1) % 3], vs[(k + 2) % 3]
                apex = vs[k]
                lo, hi = (a, b) if a < b else (b, a)
                side = orient_sign(
                    xs[lo - 1], ys[lo - 1], xs[hi - 1], ys[hi - 1], xs[apex - 1], ys[apex - 1]
                )
                if side == 0:
                    raise IntegrityError("collinear triangle vertices in registry")
                grouped[(lo, hi)][side].setdefault(rec.i_before, []).append(rec)
        out = {}
        for edge, sides in grouped.items():
            out[edge] = {}
            for side, by_before in sides.items():
                lists = []
                for before in sorted(by_before):
                    recs = sorted(by_before[before], key=record_i_upper)
                    lists.append(recs)
                out[edge][side] = lists
        return out


class _Enumerator:
    def __init__(self, points):
        pts = [p if isinstance(p, TimedPoint) else TimedPoint(*p) for p in points]
        n = len(pts)
        if n < 2:
            raise ValueError("need at least 2 points")
        if [p.index for p in pts] != list(range(1, n + 1)):
            raise ValueError("point indices must be the consecutive sequence 1..n")
        self.pts = pts
        self.n = n
        self.records = []
        self.rows = {}
        self.pool = None
        self.new_star = None
        self._heap = []
        self._fired = set()
        self._current_row = None

        self.full = Triangulation(
            [p.index for p in pts],
            [p.x for p in pts],
            [p.y for p in pts],
            record_history=True,
            build=False,
        )
        self.xs = self.full.xs
        self.ys = self.full.ys

    def run(self) -> EnumerationResult:
        self.records.extend(self.full.roots)
        for j in range(3, self.n + 1):
            self._column(j)
        return EnumerationResult(self.pts, self.records, self.n)

    # -- column processing ---------------------------------------------------

    def _column(self, j):
        self.pool = defaultdict(list)
        self.new_star = defaultdict(list)
        self._heap = []
        self._fired = set()
        created, dead = self.full.insert(j)
        self.records.extend(created)
        self._bookkeep(created, dead, j)
        guard = 0
        while self._heap:
            r = heapq.heappop(self._heap)
            self._update_row(r, j)
            guard += 1
            if guard > self.n:
                raise IntegrityError("trigger cascade exceeded row count")
        self._create_row(j)

    def _fire(self, r, j):
        if 2 <= r <= j - 2 and r not in self._fired:
            self._fired.add(r)
            heapq.heappush(self._heap, r)

    def _bookkeep(self, created, dead, j):
        pool = self.pool
        star = self.new_star
        for t in dead:
            v0, v1, v2 = t.v0, t.v1, t.v2
            pool[_edge_key(v0, v1)].append(t)
            pool[_edge_key(v1, v2)].append(t)
            pool[_edge_key(v2, v0)].append(t)
        for t in created:
            for v in t.vertices:
                if v != INF and v != j:
                    star[v].append(t)
                    self._fire(v + 1, j)

    def conflicts(self, t: Tile, px, py) -> bool:
        if t.v0 != INF and t.v1 != INF and t.v2 != INF:
            xs, ys = self.xs, self.ys
            return (
                incircle_sign(
                    xs[t.v0], ys[t.v0], xs[t.v1], ys[t.v1], xs[t.v2], ys[t.v2], px, py
                )
                > 0
            )
        a, b = t.facet_edge()
        return orient_sign(self.xs[a], self.ys[a], self.xs[b], self.ys[b], px, py) > 0

    def _new_tile(self, v0, v1, v2, i_before=0):
        t = Tile(v0, v1, v2, i_before)
        self._current_row.tiles.add(t)
        self.records.append(t)
        return t

    def _create_row(self, j):
        """Start the newest differential row: the hole left in the three-point
        window (j-2, j) by removing p_{j-2} is the near-side halfplane facet
        of edge (j-1, j)."""
        rm = j - 2
        a, b = j - 1, j
        s = orient_sign(
            self.xs[a], self.ys[a], self.xs[b], self.ys[b], self.xs[rm], self.ys[rm]
        )
        if s == 0:
            raise ValueError("collinear consecutive points (degenerate input)")
        row = _Row(rm)
        self.rows[j - 1] = row
        self._current_row = row
        t = self._new_tile(a, b, INF, rm) if s > 0 else self._new_tile(b, a, INF, rm)
        row.boundary[_edge_key(a, b)] = t
        row.boundary[_edge_key(a, INF)] = t
        row.boundary[_edge_key(b, INF)] = t
        self._bookkeep([t], [], j)

    def _update_row(self, r, j):
        row = self.rows[r]
        rm = row.removed
        px, py = self.xs[j], self.ys[j]

        # The hole's new cofaces are the tiles created this column on edge
        # (rm, p_j) within this row's window: incident to rm with no vertex
        # older than rm (tiles with an older vertex belong to wider windows).
        expected_ends = set()
        for s in self.new_star.get(rm, ()):
            (w,) = [v for v in s.vertices if v != rm and v != j]
            if w == INF or w > rm:
                expected_ends.add(w)
        if len(expected_ends) != 2:
            raise IntegrityError(
                f"row {r} triggered at column {j} with {len(expected_ends)} new cofaces"
            )

        # Classify the hole's affected boundary links. A link edge dies when
        # the removed point's coface across it (in the suffix above) was
        # destroyed this column ("fan" edges); the hole then extends past it.
        # If its inner tile also conflicts with p_j the edge vanishes inside
        # the cavity; if the inner tile survives, the edge turns into an
        # interior edge between that tile and a new filler beyond it.
        fan = set()
        grow_edges = []  # (src, dst, surviving inner tile), cavity on the left
        flood = []
        boundary = row.boundary
        for e, deads in self.pool.items():
            inner = boundary.get(e)
            if inner is None:
                continue
            conflicting = self.conflicts(inner, px, py)
            if conflicting:
                flood.append(inner)
            if any(rm in (d.v0, d.v1, d.v2) for d in deads):
                if conflicting:
                    fan.add(e)
                else:
                    slot = inner.edge_slot(*e)
                    vs = inner.vertices
                    grow_edges.append((vs[(slot + 2) % 3], vs[(slot + 1) % 3], inner))
        if not fan and not grow_edges:
            raise IntegrityError(f"row {r} triggered at column {j} without link changes")

        dead = set()
        stack = []
        for t in flood:
            if t not in dead:
                dead.add(t)
                stack.append(t)
        while stack:
            t = stack.pop()
            for nb in t.neighbors:
                if nb is not None and nb not in dead and self.conflicts(nb, px, py):
                    dead.add(nb)
                    stack.append(nb)

        chain = self._open_chain(dead, fan, grow_edges, j, expected_ends)
        self._current_row = row

        def sink(ekey, tile):
            boundary[ekey] = tile

        created = fill_cavity(self, chain, j, i_before=rm, link_sink=sink)
        for e in fan:
            del boundary[e]
        for src, dst, _inner in grow_edges:
            del boundary[_edge_key(src, dst)]
        for t in dead:
            t.i_after = j
            row.tiles.discard(t)
            t.neighbors = None
        self._bookkeep(created, dead, j)

    def _open_chain(self, dead, fan, grow_edges, k, expected_ends):
        """Boundary of the region to retriangulate, as an open path closed
        through the inserted vertex k. The region is the dead tiles' area
        plus the hole growth beyond dead links with surviving inner tiles."""
        nxt = {}

        def put(a, b, outer):
            if a in nxt:
                raise IntegrityError("hole cavity boundary is not simple")
            nxt[a] = (b, outer)

        for t in dead:
            vs = t.vertices
            nbs = t.neighbors
            for slot in range(3):
                nb = nbs[slot]
                if nb is not None and nb in dead:
                    continue
                a, b = vs[(slot + 1) % 3], vs[(slot + 2) % 3]
                if nb is None and _edge_key(a, b) in fan:
                    continue
                put(a, b, nb)
        for a, b, inner in grow_edges:
            put(a, b, inner)
        sources = set(nxt)
        dests = {b for b, _ in nxt.values()}
        starts = sources - dests
        ends = dests - sources
        if len(starts) != 1 or len(ends) != 1:
            raise IntegrityError("hole cavity boundary is not a single open path")
        s = starts.pop()
        e = ends.pop()
        if {s, e} != expected_ends:
            raise IntegrityError("cavity endpoints disagree with new cofaces above")
        chain = [(k, s, None)]
        a = s
        for _ in range(len(nxt)):
            b, outer = nxt[a]
            chain.append((a, b, outer))
            a = b
            if a == e:
                break
        else:
            raise IntegrityError("cavity path did not reach its endpoint")
        if len(chain) != len(nxt) + 1:
            raise IntegrityError("cavity path skipped boundary edges")
        chain.append((e, k, None))
        return chain


def enumerate_all(points) -> EnumerationResult:
    """All triangles (and hull facets) that are Delaunay in at least one
    window, each exactly once with its activity rectangle."""
    return _Enumerator(points).run()


def _rep_conflicts(points, key, px, py) -> bool:
    """Conflict test from a record identity alone (used by the oracle)."""
    (verts, side) = key
    xs = [p.x for p in points]
    ys = [p.y for p in points]
    if side != 0:
        a, b = verts
        return orient_sign(xs[a - 1], ys[a - 1], xs[b - 1], ys[b - 1], px, py) == side
    a, b, c = verts
    if orient_sign(xs[a - 1], ys[a - 1], xs[b - 1], ys[b - 1], xs[c - 1], ys[c - 1]) < 0:
        b, c = c, b
    return (
        incircle_sign(
            xs[a - 1], ys[a - 1], xs[b - 1], ys[b - 1], xs[c - 1], ys[c - 1], px, py
        )
        > 0
    )


def enumerate_all_oracle(points, max_n=200):
    """Brute-force ground truth: triangulate every window from scratch, pool
    the tiles, and derive each distinct tile's activity rectangle directly
    from the point sequence. Returns a set of
    (identity, i_before, i_after) tuples comparable with enumerate_all
    records, after verifying the rectangle matches actual window membership.
    """
    pts = [p if isinstance(p, TimedPoint) else TimedPoint(*p) for p in points]
    n = len(pts)
    if n > max_n:
        raise ValueError(f"oracle restricted to at most {max_n} points")
    windows_of = defaultdict(set)
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            tri = build_delaunay(pts[i - 1 : j], record_history=True)
            for t in tri.live:
                windows_of[t.key()].add((i, j))
    out = set()
    for key, windows in windows_of.items():
        verts = key[0]
        i_lower = min(verts)
        i_upper = max(verts)
        i_before = 0
        for k in range(i_lower - 1, 0, -1):
            if _rep_conflicts(pts, key, pts[k - 1].x, pts[k - 1].y):
                i_before = k
                break
        i_after = 0
        for k in range(i_upper + 1, n + 1):
            if _rep_conflicts(pts, key, pts[k - 1].x, pts[k - 1].y):
                i_after = k
                break
        expect = {
            (i, j)
            for i in range(i_before + 1, i_lower + 1)
            for j in range(i_upper, (i_after - 1 if i_after else n) + 1)
            if i < j
        }
        if windows != expect:
            raise IntegrityError(f"oracle rectangle mismatch for {key}")
        out.add((key, i_before, i_after))
    return out


def result_record_set(result: EnumerationResult):
    """Canonical comparable form of enumerate_all output."""
    return {(rec.key(), rec.i_before, rec.i_after) for rec in result.records}


def link_edges_of(tri: Triangulation, v: int):
    """Boundary cycle of vertex v's incident-tile star, in rotational order.

    Edges incident to the infinite vertex appear with INF (= 0) as an
    endpoint; they close the cycle around hull vertices.
    """
    start = None
    for t in tri.live:
        if v in t.vertices:
            start = t
            break
    if start is None:
        raise ValueError(f"vertex {v} not present")
    cycle = []
    t = start
    for _ in range(len(tri.live)):
        slot = t.vertices.index(v)
        far = (t.vertices[(slot + 1) % 3], t.vertices[(slot + 2) % 3])
        cycle.append(far)
        t = t.neighbors[(slot + 1) % 3]
        if t is start:
            return cycle
    raise IntegrityError("star walk did not close")
