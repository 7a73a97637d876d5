"""Incremental Delaunay triangulation of a timestamped point sequence.

Points are inserted in input (temporal) order. Convex hull facets are kept as
degenerate tiles carrying an infinite vertex, so every edge always has exactly
two cofaces and the structure for two points is the single edge between them
plus its two halfplane facets. Dead tiles stay reachable through child links,
which gives history-based point location.

Vertex ids are 1-based; ``INF = 0`` is the infinite vertex.

A Triangulation instance is single-writer: concurrent reads are fine only
while no insertion is in progress.
"""

from __future__ import annotations

import math

from .geometry import (
    TimedPoint,
    apex_dot_sign,
    circumradius,
    edge_half_length,
    incircle_sign,
    orient_sign,
)

INF = 0


class IntegrityError(RuntimeError):
    """Internal structure violated an invariant (corrupt input or a bug)."""


class Tile:
    """A triangle or hull facet. Finite tiles are counterclockwise triples;
    a facet holds INF in one slot and its outward open halfplane lies to the
    left of the remaining directed vertex pair (in counterclockwise slot
    order).

    ``neighbors[k]`` is the tile across the edge opposite ``v[k]``; ``None``
    marks a hole boundary in differential structures. ``i_before`` is 0 for
    the full construction, otherwise the index of the point whose removal
    created this tile's row. ``i_after`` is 0 while the tile is alive.
    """

    __slots__ = ("v0", "v1", "v2", "neighbors", "i_before", "i_after", "children")

    def __init__(self, v0, v1, v2, i_before=0):
        self.v0 = v0
        self.v1 = v1
        self.v2 = v2
        self.neighbors = [None, None, None]
        self.i_before = i_before
        self.i_after = 0
        self.children = None

    @property
    def vertices(self):
        return (self.v0, self.v1, self.v2)

    @property
    def alive(self):
        return self.i_after == 0

    def is_facet(self):
        return self.v0 == INF or self.v1 == INF or self.v2 == INF

    def facet_edge(self):
        """Directed finite edge (a, b) of a facet; outward halfplane is left
        of a->b."""
        if self.v0 == INF:
            return self.v1, self.v2
        if self.v1 == INF:
            return self.v2, self.v0
        return self.v0, self.v1

    def key(self):
        """Canonical identity: (sorted finite vertices, side). Side is 0 for
        finite tiles; for facets it is +1 when the outward halfplane lies left
        of the edge directed from lower to higher vertex id, else -1."""
        if self.is_facet():
            a, b = self.facet_edge()
            return ((a, b), 1) if a < b else ((b, a), -1)
        return (tuple(sorted((self.v0, self.v1, self.v2))), 0)

    def edge_slot(self, a, b):
        """Slot k such that the edge opposite v[k] is {a, b}."""
        s = {a, b}
        if {self.v1, self.v2} == s:
            return 0
        if {self.v2, self.v0} == s:
            return 1
        if {self.v0, self.v1} == s:
            return 2
        raise IntegrityError(f"edge {a},{b} not on tile {self.vertices}")

    def apex_of_edge(self, a, b):
        return self.vertices[self.edge_slot(a, b)]

    def __repr__(self):
        return f"Tile{self.vertices}[{self.i_before},{self.i_after}]"


def _edge_key(a, b):
    return (a, b) if a < b else (b, a)


class Triangulation:
    """Full incremental construction over a point sequence.

    ``ids`` are the external 1-based timestamps of the points; coordinates are
    stored in parallel arrays addressed by those ids. Points are inserted one
    at a time in sequence order.
    """

    def __init__(self, ids, xs, ys, record_history=True, build=True):
        if len(ids) < 2:
            raise ValueError("need at least 2 points")
        self.ids = list(ids)
        n_max = max(ids)
        self.xs = [math.nan] * (n_max + 1)
        self.ys = [math.nan] * (n_max + 1)
        for k, x, y in zip(ids, xs, ys):
            self.xs[k] = float(x)
            self.ys[k] = float(y)
        seen = {}
        for k, x, y in zip(ids, xs, ys):
            key = (float(x), float(y))
            if key in seen:
                raise ValueError(f"duplicate coordinates at indices {seen[key]} and {k}")
            seen[key] = k
        self.record_history = record_history
        self.live = set()
        self.roots = []
        self.inserted = []
        self.all_tiles = []
        self._live_facet = None
        self._bootstrap()
        if build:
            for k in self.ids[2:]:
                self.insert(k)

    # -- construction ------------------------------------------------------

    def _new_tile(self, v0, v1, v2, i_before=0):
        t = Tile(v0, v1, v2, i_before)
        self.live.add(t)
        self.all_tiles.append(t)
        return t

    def _bootstrap(self):
        a, b = self.ids[0], self.ids[1]
        left = self._new_tile(a, b, INF)
        right = self._new_tile(b, a, INF)
        left.neighbors = [right, right, right]
        right.neighbors = [left, left, left]
        self.roots = [left, right]
        self.inserted = [a, b]
        self._live_facet = left

    def conflicts(self, t: Tile, px, py) -> bool:
        """Open circumdisk (or outward halfplane) of t strictly contains p."""
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

    def _contains(self, t: Tile, px, py) -> bool:
        """Region containment: strict interior of a finite tile, or the open
        outward halfplane of a facet."""
        xs, ys = self.xs, self.ys
        if t.is_facet():
            a, b = t.facet_edge()
            return orient_sign(xs[a], ys[a], xs[b], ys[b], px, py) > 0
        return (
            orient_sign(xs[t.v0], ys[t.v0], xs[t.v1], ys[t.v1], px, py) > 0
            and orient_sign(xs[t.v1], ys[t.v1], xs[t.v2], ys[t.v2], px, py) > 0
            and orient_sign(xs[t.v2], ys[t.v2], xs[t.v0], ys[t.v0], px, py) > 0
        )

    def hull_facets(self):
        """Current hull facets in ring order, starting at an arbitrary one."""
        start = self._live_facet
        out = []
        t = start
        while True:
            out.append(t)
            s = t.vertices.index(INF)
            t = t.neighbors[(s + 1) % 3]
            if t is start:
                return out

    def locate_tile(self, px, py) -> Tile:
        """Live tile whose region contains (px, py), via the history walk.

        Facet regions are halfplanes and may overlap, so the walk can dead-end
        on a stale facet; it then falls back to walking the current hull facet
        ring, which doubles as the deterministic tie rule for points beyond
        several hull edges.
        """
        node = None
        for r in self.roots:
            if self._contains(r, px, py):
                node = r
                break
        while node is not None and not node.alive:
            nxt = None
            for c in node.children:
                if self._contains(c, px, py):
                    nxt = c
                    break
            node = nxt
        if node is not None:
            return node
        for t in self.hull_facets():
            if self._contains(t, px, py):
                return t
        raise IntegrityError("point location failed")

    def insert(self, k: int):
        """Insert point k (already registered in the coordinate table).

        Returns (created, destroyed) tile lists.
        """
        px, py = self.xs[k], self.ys[k]
        try:
            seed = self.locate_tile(px, py)
        except IntegrityError:
            # strict containment fails only for points on an edge line
            raise ValueError(
                f"point {k} violates general position (degenerate input)"
            ) from None
        if not self.conflicts(seed, px, py):
            raise ValueError(f"point {k} violates general position (degenerate input)")
        dead = flood_conflicts(self, seed, px, py)
        chain = cavity_chain(dead)
        created = fill_cavity(self, chain, k)
        for t in dead:
            t.i_after = k
            self.live.discard(t)
            if self.record_history:
                t.children = created
            t.neighbors = None
        self.live.update(created)
        self.inserted.append(k)
        for t in created:
            if t.is_facet():
                self._live_facet = t
                break
        return created, dead

    # -- queries -----------------------------------------------------------

    def triangle_count(self) -> int:
        """Live tiles including hull facets (2m - 2 for m points)."""
        return len(self.live)

    def finite_triangles(self):
        return [t for t in self.live if not t.is_facet()]

    def edges(self):
        """Undirected finite edges of the current triangulation."""
        out = set()
        for t in self.live:
            vs = t.vertices
            for i in range(3):
                a, b = vs[i], vs[(i + 1) % 3]
                if a != INF and b != INF:
                    out.add(_edge_key(a, b))
        return out

    def edge_cofaces(self, a, b):
        """The two tiles sharing edge {a, b}."""
        for t in self.live:
            vs = t.vertices
            for i in range(3):
                p, q = vs[i], vs[(i + 1) % 3]
                if {p, q} == {a, b}:
                    return t, t.neighbors[(i + 2) % 3]
        raise KeyError(f"edge {a},{b} not present")


def flood_conflicts(tc, seed: Tile, px, py):
    """All live tiles connected to seed whose circumdisk contains p."""
    dead = {seed}
    stack = [seed]
    while stack:
        t = stack.pop()
        for nb in t.neighbors:
            if nb is not None and nb not in dead and tc.conflicts(nb, px, py):
                dead.add(nb)
                stack.append(nb)
    return dead


def cavity_chain(dead, skip_edges=None, extra_links=None):
    """Directed boundary cycle of the union of the dead tiles.

    Boundary edges are directed with the cavity on the left. ``skip_edges``
    (undirected keys) are treated as cavity-interior even though the tile
    across them is absent; ``extra_links`` are prebuilt directed edges, with
    outer neighbor None, closing the cycle in differential structures.

    Returns a list of (src, dst, outer_tile_or_None) in cycle order.
    """
    nxt = {}
    for t in dead:
        vs = t.vertices
        nbs = t.neighbors
        for k in range(3):
            nb = nbs[k]
            if nb is not None and nb in dead:
                continue
            a, b = vs[(k + 1) % 3], vs[(k + 2) % 3]
            if nb is None and skip_edges is not None and _edge_key(a, b) in skip_edges:
                continue
            if a in nxt:
                raise IntegrityError("cavity boundary is not simple")
            nxt[a] = (b, nb)
    if extra_links:
        for a, b in extra_links:
            if a in nxt:
                raise IntegrityError("cavity boundary is not simple")
            nxt[a] = (b, None)
    if not nxt:
        raise IntegrityError("empty cavity boundary")
    start = next(iter(nxt))
    chain = []
    a = start
    for _ in range(len(nxt)):
        b, outer = nxt[a]
        chain.append((a, b, outer))
        a = b
    if a != start or len(chain) != len(nxt):
        raise IntegrityError("cavity boundary did not close")
    return chain


def fill_cavity(tc, chain, k, i_before=0, link_sink=None):
    """Create the star of vertex k over the cavity boundary and wire it up.

    Chain edges whose endpoints include k produce no tile. In differential
    structures such edges, and chain edges with no outer tile, are hole
    boundary links; ``link_sink`` receives (edge_key, inner filler) for each.
    """
    fillers = []
    for a, b, _outer in chain:
        if a == k or b == k:
            fillers.append(None)
        else:
            fillers.append(tc._new_tile(a, b, k, i_before))
    m = len(chain)
    created = []
    for i in range(m):
        t = fillers[i]
        if t is None:
            continue
        a, b, outer = chain[i]
        # edge slots of t = (a, b, k): 0 -> (b, k), 1 -> (k, a), 2 -> (a, b)
        if outer is not None:
            t.neighbors[2] = outer
            outer.neighbors[outer.edge_slot(a, b)] = t
        elif link_sink is not None:
            link_sink(_edge_key(a, b), t)
        nxt_t = fillers[(i + 1) % m]
        prv_t = fillers[(i - 1) % m]
        t.neighbors[0] = nxt_t  # across (b, k)
        t.neighbors[1] = prv_t  # across (k, a)
        if nxt_t is None and link_sink is not None:
            link_sink(_edge_key(b, k), t)
        if prv_t is None and link_sink is not None:
            link_sink(_edge_key(a, k), t)
        created.append(t)
    return created


# -- public operations ------------------------------------------------------


def build_delaunay(points, record_history=True) -> Triangulation:
    """Delaunay triangulation of a point sequence, inserted in input order.

    ``points`` is a sequence of TimedPoint (or (index, x, y) triples). The
    result keeps hull facets as degenerate tiles and, when
    ``record_history``, the full history of dead tiles for point location.
    """
    pts = [p if isinstance(p, TimedPoint) else TimedPoint(*p) for p in points]
    if len(pts) < 2:
        raise ValueError("need at least 2 points")
    ids = [p.index for p in pts]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate point indices")
    return Triangulation(ids, [p.x for p in pts], [p.y for p in pts], record_history)


def insert_point(tri: Triangulation, p: TimedPoint):
    """Insert one more point, returning (created, destroyed) tile sets."""
    if p.index <= len(tri.xs) - 1 and not math.isnan(tri.xs[p.index]):
        raise ValueError(f"point index {p.index} already present")
    for k in tri.inserted:
        if tri.xs[k] == p.x and tri.ys[k] == p.y:
            raise ValueError("duplicate coordinates")
    need = p.index + 1
    if len(tri.xs) < need:
        tri.xs.extend([math.nan] * (need - len(tri.xs)))
        tri.ys.extend([math.nan] * (need - len(tri.ys)))
    tri.xs[p.index] = p.x
    tri.ys[p.index] = p.y
    tri.ids.append(p.index)
    created, dead = tri.insert(p.index)
    return set(created), set(dead)


def locate(tri: Triangulation, p: TimedPoint) -> Tile:
    """Live tile (or hull facet region) containing p."""
    for k in tri.inserted:
        if tri.xs[k] == p.x and tri.ys[k] == p.y:
            raise ValueError("query point coincides with a vertex")
    return tri.locate_tile(p.x, p.y)


def verify_delaunay(tri: Triangulation):
    """Full-scan certificate: no inserted point lies strictly inside any live
    tile's circumdisk. Raises IntegrityError on violation. Desk scale only."""
    for t in tri.live:
        for k in tri.inserted:
            if k in t.vertices:
                continue
            if tri.conflicts(t, tri.xs[k], tri.ys[k]):
                raise IntegrityError(f"{t} conflicts with inserted point {k}")
    for t in tri.live:
        if not t.is_facet():
            xs, ys = tri.xs, tri.ys
            if orient_sign(xs[t.v0], ys[t.v0], xs[t.v1], ys[t.v1], xs[t.v2], ys[t.v2]) <= 0:
                raise IntegrityError(f"{t} is not counterclockwise")


# -- per-window alpha extraction (the naive baseline) ------------------------


def window_alpha_table(points, i, j):
    """For DT(P[i..j]), the alpha interval of every (edge, side) that admits
    an empty alpha-ball centered on that side.

    Returns {(a, b, side): (lower, upper)} with a < b, side +1 for the left of
    the edge directed a->b, upper = +inf across hull facets. The side interval
    comes from the edge's two cofaces: the side's own coface must have its
    circumcenter on that side (an on-edge center counts as on it), bounding
    alpha from above by its circumradius; the opposite coface bounds alpha
    from below by its circumradius when its center also lies on the queried
    side, else by half the edge length.
    """
    pts = [p if isinstance(p, TimedPoint) else TimedPoint(*p) for p in points]
    n = len(pts)
    if not (1 <= i < j <= n):
        raise ValueError(f"invalid window ({i},{j}) for {n} points")
    window = pts[i - 1 : j]
    tri = build_delaunay(window, record_history=True)
    xs, ys = tri.xs, tri.ys

    table = {}
    seen = set()
    for t in tri.live:
        vs = t.vertices
        for kslot in range(3):
            a, b = vs[(kslot + 1) % 3], vs[(kslot + 2) % 3]
            if a == INF or b == INF:
                continue
            ek = _edge_key(a, b)
            if ek in seen:
                continue
            seen.add(ek)
            other = t.neighbors[kslot]
            lo_v, hi_v = ek
            by_side = {}
            for cof in (t, other):
                if cof.is_facet():
                    fa, fb = cof.facet_edge()
                    side = 1 if (fa, fb) == (lo_v, hi_v) else -1
                    by_side[side] = (True, math.inf)
                else:
                    apex = cof.apex_of_edge(a, b)
                    side = orient_sign(
                        xs[lo_v], ys[lo_v], xs[hi_v], ys[hi_v], xs[apex], ys[apex]
                    )
                    own = (
                        apex_dot_sign(
                            xs[lo_v], ys[lo_v], xs[hi_v], ys[hi_v], xs[apex], ys[apex]
                        )
                        >= 0
                    )
                    # canonical vertex order keeps the float radius identical
                    # across every consumer of this triangle
                    v0, v1, v2 = sorted((lo_v, hi_v, apex))
                    rad = circumradius(xs[v0], ys[v0], xs[v1], ys[v1], xs[v2], ys[v2])
                    by_side[side] = (own, rad)
            if set(by_side) != {1, -1}:
                raise IntegrityError(f"edge {ek} cofaces not on opposite sides")
            rmin = edge_half_length(xs[lo_v], ys[lo_v], xs[hi_v], ys[hi_v])
            for side in (1, -1):
                own, upper = by_side[side]
                if not own:
                    continue
                other_own, other_rad = by_side[-side]
                lower = rmin if other_own else other_rad
                table[(lo_v, hi_v, side)] = (lower, upper)
    return table


def alpha_edges_of_window(points, i, j, alpha):
    """Edge sides of DT(P[i..j]) admitting an empty alpha-ball, decided from
    the cofaces' circumdisks alone. Closed alpha bounds."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    table = window_alpha_table(points, i, j)
    return {es for es, (lo, hi) in table.items() if lo <= alpha <= hi}
