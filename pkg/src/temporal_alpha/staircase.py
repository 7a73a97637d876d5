"""Per-edge conversion of coface lists into minimal cuboid sets.

For one edge and one focal side, the cofaces on each side partition the
edge's staircase-shaped activity region into rectangles. The focal side's
rectangles whose circumcenter lies behind the edge contribute no alpha
interval and are dropped (always a prefix of the bottom list and a suffix of
the right list). On the opposite side, the maximal corner run of rectangles
whose circumcenter stays behind the edge is merged into one dummy rectangle,
since those cofaces all impose the same lower bound. Deconstructing the
merged opposite-side partition against the pruned focal-side partition then
yields one cuboid per surviving rectangle pair, and the resulting partition
of the focal side's activity space is minimal.

The per-edge stages are pure functions of the edge's coface lists, so edges
may be processed concurrently; pooling the cuboids is the only sync point.
"""

from __future__ import annotations

import math
from bisect import bisect_left

import numpy as np

from .delaunay import INF, IntegrityError
from .enumeration import enumerate_all, record_rect
from .geometry import apex_dot_sign, circumradius, edge_half_length

SIDE_FRONT = 1
SIDE_BACK = -1


class Rect:
    """Activity rectangle of one coface, or the merged dummy rectangle."""

    __slots__ = ("i_min", "i_max", "j_min", "j_max", "record", "own_side", "radius")

    def __init__(self, i_min, i_max, j_min, j_max, record, own_side, radius):
        self.i_min = i_min
        self.i_max = i_max
        self.j_min = j_min
        self.j_max = j_max
        self.record = record  # None marks the dummy
        self.own_side = own_side  # circumcenter on the coface's own side
        self.radius = radius  # nan for the dummy

    def __repr__(self):
        tag = "dummy" if self.record is None else self.record.vertices
        return f"Rect[{self.i_min},{self.i_max}]x[{self.j_min},{self.j_max}]({tag})"


class StairLists:
    """Bottom (left to right) and right (bottom to top) rectangle lists of
    one side's partition, with cross-list neighbor links."""

    __slots__ = ("bottom", "right", "above", "left")

    def __init__(self, bottom, right):
        self.bottom = bottom
        self.right = right
        self.above = {}
        self.left = {}

    def rects(self):
        return self.bottom + self.right


def _make_rect(rec, n, edge, xs, ys, radius_cache):
    i_min, i_max, j_min, j_max = record_rect(rec, n)
    a, b = edge
    if rec.is_facet():
        own = True
        radius = math.inf
    else:
        apex = next(v for v in rec.vertices if v != a and v != b)
        own = (
            apex_dot_sign(
                xs[a - 1], ys[a - 1], xs[b - 1], ys[b - 1], xs[apex - 1], ys[apex - 1]
            )
            >= 0
        )
        key = id(rec)
        radius = radius_cache.get(key)
        if radius is None:
            # canonical vertex order: the float radius of a triangle must be
            # identical no matter which of its edges asks for it
            v0, v1, v2 = sorted(rec.vertices)
            radius = circumradius(
                xs[v0 - 1], ys[v0 - 1], xs[v1 - 1], ys[v1 - 1], xs[v2 - 1], ys[v2 - 1]
            )
            radius_cache[key] = radius
    return Rect(i_min, i_max, j_min, j_max, rec, own, radius)


def build_stair_lists(cll, edge, n, xs, ys, radius_cache) -> StairLists:
    """Order one side's coface rectangles into bottom and right lists.

    ``cll`` is the side's list of coface lists from the enumeration registry,
    ordered by shared left boundary. A list is grounded when its lowest
    rectangle sits on the staircase's bottom boundary (the edge's higher
    endpoint); grounded lists contribute their lowest rectangle to the bottom
    list and the rest of their stack to the right list, scanned right to
    left; floating lists follow, left to right, fully into the right list.
    """
    b = edge[1]
    grounded = []
    floating = []
    for lst in cll:
        rects = [_make_rect(rec, n, edge, xs, ys, radius_cache) for rec in lst]
        for prev, nxt in zip(rects, rects[1:]):
            if prev.i_min != nxt.i_min or prev.j_max + 1 != nxt.j_min:
                raise IntegrityError(
                    f"coface list of edge {edge} is not a stacked run: {prev} {nxt}"
                )
        if rects[0].j_min == b:
            grounded.append(rects)
        else:
            floating.append(rects)
    bottom = [rects[0] for rects in grounded]
    right = []
    for rects in reversed(grounded):
        right.extend(rects[1:])
    for rects in floating:
        right.extend(rects)
    return StairLists(bottom, right)


def check_stair_lists(sl: StairLists, edge, n):
    """Structural assertions for one side's lists: every rectangle touches
    the right or bottom staircase boundary, bottom tiles the bottom row left
    to right, the right list ascends, and grounded stacks sit below floating
    ones."""
    a, b = edge
    for r in sl.bottom:
        if r.j_min != b:
            raise IntegrityError(f"bottom rect off the bottom boundary: {r}")
    for prev, nxt in zip(sl.bottom, sl.bottom[1:]):
        if prev.i_max + 1 != nxt.i_min:
            raise IntegrityError(f"bottom list does not tile: {prev} {nxt}")
    if sl.bottom and sl.bottom[-1].i_max != a:
        raise IntegrityError("bottom list does not reach the right boundary")
    for r in sl.right:
        if r.i_max != a:
            raise IntegrityError(f"right rect off the right boundary: {r}")
        if r.j_min == b:
            raise IntegrityError(f"right rect touching bottom: {r}")
    for prev, nxt in zip(sl.right, sl.right[1:]):
        if prev.j_max + 1 != nxt.j_min:
            raise IntegrityError(f"right list does not stack: {prev} {nxt}")


def simplify_front(sl: StairLists) -> StairLists:
    """Drop focal-side rectangles whose circumcenter lies behind the edge: a
    prefix of the bottom list and a suffix of the right list."""
    bottom = list(sl.bottom)
    right = list(sl.right)
    while bottom and not bottom[0].own_side:
        bottom.pop(0)
    while right and not right[-1].own_side:
        right.pop()
    for r in bottom:
        if not r.own_side:
            raise IntegrityError("front removal was not a bottom prefix")
    for r in right:
        if not r.own_side:
            raise IntegrityError("front removal was not a right suffix")
    return StairLists(bottom, right)


def simplify_back(sl: StairLists) -> StairLists:
    """Merge the opposite side's corner run of behind-centered rectangles
    into one dummy rectangle covering their joint extent."""
    bottom = list(sl.bottom)
    right = list(sl.right)
    if bottom:
        anchor = bottom[-1]
        anchor_in_bottom = True
    elif right:
        anchor = right[0]
        anchor_in_bottom = False
    else:
        return StairLists(bottom, right)
    if not anchor.own_side:
        return StairLists(bottom, right)

    run = [anchor]
    nb = len(bottom) - 1 if anchor_in_bottom else len(bottom)
    while nb > 0 and bottom[nb - 1].own_side:
        nb -= 1
        run.append(bottom[nb])
    nr = 0 if anchor_in_bottom else 1
    while nr < len(right) and right[nr].own_side:
        run.append(right[nr])
        nr += 1
    if len(run) == 1:
        return StairLists(bottom, right)

    dummy = Rect(
        min(r.i_min for r in run),
        max(r.i_max for r in run),
        min(r.j_min for r in run),
        max(r.j_max for r in run),
        None,
        True,
        math.nan,
    )
    for r in sl.rects():
        if r in run:
            continue
        covered_i = dummy.i_min <= r.i_min and r.i_max <= dummy.i_max
        covered_j = dummy.j_min <= r.j_min and r.j_max <= dummy.j_max
        overlaps = (
            r.i_min <= dummy.i_max
            and dummy.i_min <= r.i_max
            and r.j_min <= dummy.j_max
            and dummy.j_min <= r.j_max
        )
        if overlaps and not (covered_i and covered_j):
            raise IntegrityError(f"dummy merge would partially cover {r}")
    return StairLists(bottom[:nb] + [dummy], right[nr:])


def link_neighbors(sl: StairLists) -> StairLists:
    """Populate cross-list links: for each bottom rectangle the right
    rectangle resting directly on it, and for each right rectangle the bottom
    rectangle adjoining its left edge. At most one of each exists."""
    sl.above = {}
    sl.left = {}
    by_jmin = {r.j_min: r for r in sl.right}
    by_imax = {r.i_max: r for r in sl.bottom}
    for rb in sl.bottom:
        rr = by_jmin.get(rb.j_max + 1)
        if rr is not None and rr.i_min <= rb.i_max:
            sl.above[id(rb)] = rr
    for rr in sl.right:
        rb = by_imax.get(rr.i_min - 1)
        if rb is not None and rb.j_max >= rr.j_min:
            sl.left[id(rr)] = rb
    return sl


def alpha_range(front: Rect, back: Rect | None, r_min):
    """Closed alpha interval for one (focal coface, opposite coface) pair.

    The focal coface bounds alpha from above by its circumradius; the
    opposite coface bounds it from below by its circumradius when its center
    has crossed to the focal side, else the bound is the edge's half length.
    """
    if not front.own_side:
        raise IntegrityError("focal coface with behind-edge center survived")
    hi = front.radius
    if back is None or back.record is None or back.own_side:
        lo = r_min
    else:
        lo = back.radius
    return lo, hi


def intersect_to_cuboids(front: StairLists, back: StairLists, edge, side, r_min):
    """Deconstruct the opposite-side staircase one free rectangle at a time,
    intersecting each removed rectangle with the focal side's rectangles;
    every non-empty temporal intersection yields one cuboid."""
    out = []
    fb = front.bottom
    fr = front.right
    fb_keys = [r.i_max for r in fb]
    fr_keys = [r.j_max for r in fr]

    def emit(B):
        lo_a = None
        cands = []
        if fb:
            start = bisect_left(fb_keys, B.i_min)
            for F in fb[start:]:
                if F.i_min > B.i_max:
                    break
                cands.append(F)
        if fr:
            start = bisect_left(fr_keys, B.j_min)
            for F in fr[start:]:
                if F.j_min > B.j_max:
                    break
                cands.append(F)
        for F in cands:
            i1 = max(F.i_min, B.i_min)
            i2 = min(F.i_max, B.i_max)
            j1 = max(F.j_min, B.j_min)
            j2 = min(F.j_max, B.j_max)
            if i1 > i2 or j1 > j2:
                continue
            lo, hi = alpha_range(F, B, r_min)
            if lo > hi:
                continue  # numerically empty interval from a near-flip pair
            out.append((edge[0], edge[1], side, i1, i2, j1, j2, lo, hi))

    bottom = list(back.bottom)
    right = list(back.right)
    removed = set()
    total = len(bottom) + len(right)
    bi = 0
    for _ in range(total):
        B = None
        if bi < len(bottom):
            cand = bottom[bi]
            rr = back.above.get(id(cand))
            if rr is None or id(rr) in removed:
                B = cand
                bi += 1
        if B is None and right:
            cand = right[-1]
            rb = back.left.get(id(cand))
            if rb is None or id(rb) in removed:
                B = right.pop()
        if B is None:
            raise IntegrityError("staircase deconstruction has no free rectangle")
        removed.add(id(B))
        emit(B)
    return out


class CuboidSet:
    """All cuboids of a point sequence, as parallel arrays plus metadata."""

    COLUMNS = ("edge_a", "edge_b", "side", "i_min", "i_max", "j_min", "j_max",
               "alpha_lo", "alpha_hi")

    def __init__(self, xs, ys, rows, record_count):
        self.xs = np.asarray(xs, dtype=np.float64)
        self.ys = np.asarray(ys, dtype=np.float64)
        self.n = len(self.xs)
        self.record_count = record_count
        rows.sort(key=lambda c: (c[0], c[1], -c[2], c[3], c[5]))
        self.edge_a = np.array([r[0] for r in rows], dtype=np.uint32)
        self.edge_b = np.array([r[1] for r in rows], dtype=np.uint32)
        self.side = np.array([r[2] for r in rows], dtype=np.int8)
        self.i_min = np.array([r[3] for r in rows], dtype=np.uint32)
        self.i_max = np.array([r[4] for r in rows], dtype=np.uint32)
        self.j_min = np.array([r[5] for r in rows], dtype=np.uint32)
        self.j_max = np.array([r[6] for r in rows], dtype=np.uint32)
        self.alpha_lo = np.array([r[7] for r in rows], dtype=np.float64)
        self.alpha_hi = np.array([r[8] for r in rows], dtype=np.float64)

    @classmethod
    def from_columns(cls, xs, ys, columns, record_count):
        """Reassemble from stored arrays (archive loading path)."""
        obj = cls.__new__(cls)
        obj.xs = np.asarray(xs, dtype=np.float64)
        obj.ys = np.asarray(ys, dtype=np.float64)
        obj.n = len(obj.xs)
        obj.record_count = record_count
        for name in cls.COLUMNS:
            setattr(obj, name, columns[name])
        return obj

    def __len__(self):
        return len(self.edge_a)

    @property
    def cuboid_count(self):
        return len(self.edge_a)

    def row(self, k):
        return (
            int(self.edge_a[k]),
            int(self.edge_b[k]),
            int(self.side[k]),
            int(self.i_min[k]),
            int(self.i_max[k]),
            int(self.j_min[k]),
            int(self.j_max[k]),
            float(self.alpha_lo[k]),
            float(self.alpha_hi[k]),
        )

    def stab_linear(self, i, j, alpha):
        """Indices of all cuboids containing (i, j, alpha); the reference
        filter used to validate the stabbing index."""
        mask = (
            (self.i_min <= i)
            & (i <= self.i_max)
            & (self.j_min <= j)
            & (j <= self.j_max)
            & (self.alpha_lo <= alpha)
            & (alpha <= self.alpha_hi)
        )
        return np.nonzero(mask)[0]

    def edges_at(self, i, j, alpha):
        """Edge sides active for the query triple, as (a, b, side) tuples."""
        ks = self.stab_linear(i, j, alpha)
        return {
            (int(self.edge_a[k]), int(self.edge_b[k]), int(self.side[k])) for k in ks
        }

    def max_cuboids_per_edge(self):
        if not len(self):
            return 0
        keys = self.edge_a.astype(np.uint64) << np.uint64(32)
        keys |= self.edge_b.astype(np.uint64)
        _, counts = np.unique(keys, return_counts=True)
        return int(counts.max())


def edge_pipeline(edge, sides_cll, side, n, xs, ys, radius_cache, validate=False):
    """Cuboids of one edge's focal side."""
    a, b = edge
    r_min = edge_half_length(xs[a - 1], ys[a - 1], xs[b - 1], ys[b - 1])
    front = build_stair_lists(sides_cll.get(side, []), edge, n, xs, ys, radius_cache)
    back = build_stair_lists(sides_cll.get(-side, []), edge, n, xs, ys, radius_cache)
    if validate:
        check_stair_lists(front, edge, n)
        check_stair_lists(back, edge, n)
    front = simplify_front(front)
    back = simplify_back(back)
    link_neighbors(back)
    return intersect_to_cuboids(front, back, edge, side, r_min)


def temporal_alpha_shape(points, validate=False) -> CuboidSet:
    """The full pipeline: enumerate all window triangles, then run both sides
    of every edge through the staircase machinery and pool the cuboids."""
    result = enumerate_all(points)
    registry = result.registry()
    xs = [p.x for p in result.points]
    ys = [p.y for p in result.points]
    n = result.n
    radius_cache = {}
    rows = []
    for edge in registry:
        sides_cll = registry[edge]
        for side in (SIDE_FRONT, SIDE_BACK):
            rows.extend(
                edge_pipeline(edge, sides_cll, side, n, xs, ys, radius_cache, validate)
            )
    return CuboidSet(xs, ys, rows, len(result.records))
