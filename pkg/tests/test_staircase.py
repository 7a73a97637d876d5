import math
import random
from collections import defaultdict

import pytest

from helpers import quadratic_edge_points, rand_points
from temporal_alpha.delaunay import Tile, window_alpha_table
from temporal_alpha.enumeration import enumerate_all, record_rect
from temporal_alpha.geometry import TimedPoint, circumradius, edge_half_length
from temporal_alpha.staircase import (
    Rect,
    SIDE_BACK,
    SIDE_FRONT,
    alpha_range,
    build_stair_lists,
    check_stair_lists,
    edge_pipeline,
    intersect_to_cuboids,
    link_neighbors,
    simplify_back,
    simplify_front,
    temporal_alpha_shape,
)


def P(i, x, y):
    return TimedPoint(i, float(x), float(y))


def tile(v0, v1, v2, i_before=0, i_after=0):
    t = Tile(v0, v1, v2, i_before)
    t.i_after = i_after
    return t


def spread_coords(n):
    # generic-position coordinates for synthetic coface lists
    xs = [math.cos(1.7 * k) * (2 + 0.1 * k) for k in range(n)]
    ys = [math.sin(2.3 * k) * (2 + 0.07 * k) for k in range(n)]
    return xs, ys


class TestBuildStairLists:
    def test_single_rect(self):
        xs, ys = spread_coords(8)
        # apex between the endpoints touches both staircase boundaries
        cll = [[tile(4, 7, 5)]]
        sl = build_stair_lists(cll, (4, 7), 8, xs, ys, {})
        assert len(sl.bottom) == 1 and sl.right == []
        assert sl.bottom[0].j_min == 7

    def test_grounded_stack_splits(self):
        xs, ys = spread_coords(11)
        # stacked cofaces of edge (4,7): the lowest stays in the bottom list,
        # the rest of the stack feeds the right list bottom-up
        cll = [[tile(4, 7, 5, 0, 8), tile(4, 7, 8, 0, 9), tile(4, 7, 9, 0, 0)]]
        sl = build_stair_lists(cll, (4, 7), 11, xs, ys, {})
        assert [r.record.vertices for r in sl.bottom] == [(4, 7, 5)]
        assert [r.record.vertices for r in sl.right] == [(4, 7, 8), (4, 7, 9)]
        assert sl.right[0].j_min == sl.bottom[0].j_max + 1

    def test_grounded_and_floating_order(self):
        xs, ys = spread_coords(12)
        # a later suffix whose lowest rectangle starts above the bottom
        # boundary is floating and lands in the right list
        g = [tile(4, 7, 5, 0, 9)]
        fl = [tile(4, 7, 9, 2, 0)]
        sl = build_stair_lists([g, fl], (4, 7), 12, xs, ys, {})
        assert [r.record.i_before for r in sl.bottom] == [0]
        assert [r.record.i_before for r in sl.right] == [2]

    def test_corrupt_coface_list_rejected(self):
        from temporal_alpha.delaunay import IntegrityError

        xs, ys = spread_coords(12)
        # a gap between stacked rectangles marks corrupt registry input
        cll = [[tile(4, 7, 5, 0, 8), tile(4, 7, 10, 0, 0)]]
        with pytest.raises(IntegrityError, match="stacked"):
            build_stair_lists(cll, (4, 7), 12, xs, ys, {})

    @pytest.mark.parametrize("seed", [60, 61, 62])
    def test_real_data_lists_check_clean(self, seed):
        pts = rand_points(22, seed)
        res = enumerate_all(pts)
        reg = res.registry()
        for edge, sides in reg.items():
            for side, cll in sides.items():
                sl = build_stair_lists(cll, edge, res.n,
                                       [p.x for p in pts], [p.y for p in pts], {})
                check_stair_lists(sl, edge, res.n)


class TestSimplifyFront:
    def _lists(self, own_flags_bottom, own_flags_right):
        def rect(k, own):
            return Rect(k, k, 5, 5, tile(1, 2, 3), own, 1.0)

        return (
            [rect(k, o) for k, o in enumerate(own_flags_bottom)],
            [rect(k, o) for k, o in enumerate(own_flags_right)],
        )

    def test_all_front_unchanged(self):
        from temporal_alpha.staircase import StairLists

        b, r = self._lists([True, True], [True])
        sl = simplify_front(StairLists(b, r))
        assert len(sl.bottom) == 2 and len(sl.right) == 1

    def test_all_back_empties(self):
        from temporal_alpha.staircase import StairLists

        b, r = self._lists([False, False], [False])
        sl = simplify_front(StairLists(b, r))
        assert sl.bottom == [] and sl.right == []

    @pytest.mark.parametrize("seed", [63, 64])
    def test_removed_set_is_exactly_behind_centered(self, seed):
        pts = rand_points(20, seed)
        res = enumerate_all(pts)
        reg = res.registry()
        xs = [p.x for p in pts]
        ys = [p.y for p in pts]
        for edge, sides in reg.items():
            for side, cll in sides.items():
                sl = build_stair_lists(cll, edge, res.n, xs, ys, {})
                before = {id(r): r for r in sl.rects()}
                out = simplify_front(sl)
                kept = {id(r) for r in out.rects()}
                for rid, r in before.items():
                    assert (rid in kept) == r.own_side


class TestSimplifyBack:
    def test_front_centered_corner_unchanged(self):
        from temporal_alpha.staircase import StairLists

        b = [Rect(1, 4, 5, 7, tile(1, 2, 3), False, 1.0)]
        sl = simplify_back(StairLists(b, []))
        assert sl.bottom == b

    def test_all_behind_merges_to_single_dummy(self):
        from temporal_alpha.staircase import StairLists

        r1 = Rect(1, 2, 5, 6, tile(1, 2, 3), True, 1.0)
        r2 = Rect(3, 4, 5, 8, tile(1, 2, 4), True, 1.1)
        r3 = Rect(3, 4, 9, 12, tile(1, 2, 5), True, 1.2)
        sl = simplify_back(link_neighbors(StairLists([r1, r2], [r3])))
        assert len(sl.bottom) == 1 and sl.right == []
        d = sl.bottom[0]
        assert d.record is None
        assert (d.i_min, d.i_max, d.j_min, d.j_max) == (1, 4, 5, 12)

    def test_partial_run_replaces_corner_only(self):
        from temporal_alpha.staircase import StairLists

        r1 = Rect(1, 2, 5, 9, tile(1, 2, 3), False, 1.0)
        r2 = Rect(3, 4, 5, 6, tile(1, 2, 4), True, 1.1)
        r3 = Rect(3, 4, 7, 8, tile(1, 2, 5), True, 1.2)
        r4 = Rect(1, 4, 10, 12, tile(1, 2, 6), False, 1.3)
        sl = simplify_back(StairLists([r1, r2], [r3, r4]))
        assert sl.bottom[0] is r1
        d = sl.bottom[1]
        assert d.record is None
        assert (d.i_min, d.i_max, d.j_min, d.j_max) == (3, 4, 5, 8)
        assert sl.right == [r4]

    @pytest.mark.parametrize("seed", [65, 66, 67])
    def test_merged_rects_all_behind_on_real_data(self, seed):
        pts = rand_points(24, seed)
        res = enumerate_all(pts)
        reg = res.registry()
        xs = [p.x for p in pts]
        ys = [p.y for p in pts]
        merges = 0
        for edge, sides in reg.items():
            for side, cll in sides.items():
                sl = build_stair_lists(cll, edge, res.n, xs, ys, {})
                before = sl.rects()
                out = simplify_back(sl)
                after = out.rects()
                dummies = [r for r in after if r.record is None]
                assert len(dummies) <= 1
                if dummies:
                    merges += 1
                    gone = [r for r in before if r not in after]
                    assert all(r.own_side for r in gone)
                    d = dummies[0]
                    for r in gone:
                        assert d.i_min <= r.i_min and r.i_max <= d.i_max
                        assert d.j_min <= r.j_min and r.j_max <= d.j_max
        assert merges > 0  # the configuration occurs in random data


class TestLinkNeighbors:
    def test_stacked_pair(self):
        from temporal_alpha.staircase import StairLists

        rb = Rect(1, 4, 5, 6, tile(1, 2, 3), True, 1.0)
        rr = Rect(2, 4, 7, 9, tile(1, 2, 4), True, 1.0)
        sl = link_neighbors(StairLists([rb], [rr]))
        assert sl.above[id(rb)] is rr
        assert id(rr) not in sl.left

    def test_side_by_side_pair(self):
        from temporal_alpha.staircase import StairLists

        rb = Rect(1, 1, 5, 8, tile(1, 2, 3), True, 1.0)
        rr = Rect(2, 4, 6, 9, tile(1, 2, 4), True, 1.0)
        sl = link_neighbors(StairLists([rb], [rr]))
        assert sl.left[id(rr)] is rb
        assert id(rb) not in sl.above

    @pytest.mark.parametrize("seed", [68, 69])
    def test_links_match_bruteforce_adjacency(self, seed):
        pts = rand_points(26, seed)
        res = enumerate_all(pts)
        reg = res.registry()
        xs = [p.x for p in pts]
        ys = [p.y for p in pts]
        for edge, sides in reg.items():
            for side, cll in sides.items():
                sl = link_neighbors(
                    build_stair_lists(cll, edge, res.n, xs, ys, {})
                )
                for rb in sl.bottom:
                    want = [
                        rr
                        for rr in sl.right
                        if rr.j_min == rb.j_max + 1 and rr.i_min <= rb.i_max
                    ]
                    assert len(want) <= 1
                    assert sl.above.get(id(rb)) == (want[0] if want else None)
                for rr in sl.right:
                    want = [
                        rb
                        for rb in sl.bottom
                        if rb.i_max == rr.i_min - 1 and rb.j_max >= rr.j_min
                    ]
                    assert len(want) <= 1
                    assert sl.left.get(id(rr)) == (want[0] if want else None)


class TestAlphaRange:
    def test_back_center_in_front(self):
        f = Rect(1, 1, 2, 2, tile(1, 2, 3), True, 2.0)
        b = Rect(1, 1, 2, 2, tile(1, 2, 4), False, 1.0)
        assert alpha_range(f, b, 0.5) == (1.0, 2.0)

    def test_dummy_back_gives_rmin(self):
        f = Rect(1, 1, 2, 2, tile(1, 2, 3), True, 5.0)
        d = Rect(1, 1, 2, 2, None, True, math.nan)
        assert alpha_range(f, d, 1.0) == (1.0, 5.0)

    def test_hull_front_is_unbounded(self):
        f = Rect(1, 1, 2, 2, tile(1, 2, 0), True, math.inf)
        b = Rect(1, 1, 2, 2, tile(1, 2, 4), True, 1.0)
        lo, hi = alpha_range(f, b, 0.75)
        assert lo == 0.75 and math.isinf(hi)

    def test_surviving_behind_center_rejected(self):
        f = Rect(1, 1, 2, 2, tile(1, 2, 3), False, 2.0)
        with pytest.raises(Exception):
            alpha_range(f, None, 0.5)


class TestIntersect:
    def test_single_pair(self):
        from temporal_alpha.staircase import StairLists

        f = Rect(1, 3, 5, 8, tile(1, 2, 3), True, 2.0)
        b = Rect(1, 3, 5, 8, tile(1, 2, 4), True, 1.0)
        back = link_neighbors(StairLists([b], []))
        front = StairLists([f], [])
        out = intersect_to_cuboids(front, back, (4, 5), 1, 0.5)
        assert out == [(4, 5, 1, 1, 3, 5, 8, 0.5, 2.0)]

    def test_back_split_in_j(self):
        from temporal_alpha.staircase import StairLists

        f = Rect(1, 3, 5, 9, tile(1, 2, 3), True, 2.0)
        b1 = Rect(1, 3, 5, 6, tile(1, 2, 4), False, 0.9)
        b2 = Rect(1, 3, 7, 9, tile(1, 2, 6), False, 1.4)
        back = link_neighbors(StairLists([b1], [b2]))
        front = StairLists([f], [])
        out = sorted(intersect_to_cuboids(front, back, (4, 5), 1, 0.5))
        assert out == [
            (4, 5, 1, 1, 3, 5, 6, 0.9, 2.0),
            (4, 5, 1, 1, 3, 7, 9, 1.4, 2.0),
        ]

    @pytest.mark.parametrize("k", [3, 5])
    def test_quadratic_construction(self, k):
        pts = quadratic_edge_points(k)
        n = len(pts)
        cs = temporal_alpha_shape(pts, validate=True)
        edge = (k + 1, k + 2)
        count = sum(
            1
            for m in range(len(cs))
            if (int(cs.edge_a[m]), int(cs.edge_b[m])) == edge
        )
        assert count >= k * k
        # independent count for the upper side: every active window carries a
        # distinct alpha interval there, so the minimal partition needs one
        # cuboid per window; the lower side is active only in windows with no
        # lower points, all with the same interval, merging into one cuboid.
        upper = {}
        lower = set()
        for i in range(1, k + 2):
            for j in range(k + 2, n + 1):
                table = window_alpha_table(pts, i, j)
                if (edge[0], edge[1], 1) in table:
                    upper[(i, j)] = table[(edge[0], edge[1], 1)]
                if (edge[0], edge[1], -1) in table:
                    lower.add((i, j))
        assert len(set(upper.values())) == len(upper) == (k + 1) ** 2
        count_up = sum(
            1
            for m in range(len(cs))
            if (int(cs.edge_a[m]), int(cs.edge_b[m]), int(cs.side[m])) == (*edge, 1)
        )
        assert count_up == (k + 1) ** 2
        assert count == count_up + 1  # one merged lower-side cuboid
        assert lower == {(k + 1, j) for j in range(k + 2, n + 1)}


class TestPipeline:
    def test_two_points(self):
        cs = temporal_alpha_shape([P(1, 0, 0), P(2, 2, 0)], validate=True)
        assert len(cs) == 2
        rows = {cs.row(k) for k in range(2)}
        assert rows == {
            (1, 2, 1, 1, 1, 2, 2, 1.0, math.inf),
            (1, 2, -1, 1, 1, 2, 2, 1.0, math.inf),
        }

    def test_three_points_structure(self):
        pts = [P(1, 0, 0), P(2, 1, 0), P(3, 0.5, 0.9)]
        cs = temporal_alpha_shape(pts, validate=True)
        R = circumradius(0, 0, 1, 0, 0.5, 0.9)
        finite_his = {float(h) for h in cs.alpha_hi if math.isfinite(h)}
        assert finite_his == {R}
        # outer sides unbounded; every edge contributes both sides
        per_edge = defaultdict(set)
        for k in range(len(cs)):
            row = cs.row(k)
            per_edge[(row[0], row[1])].add(row[2])
        assert all(sides == {1, -1} for sides in per_edge.values())
        assert set(per_edge) == {(1, 2), (2, 3), (1, 3)}
        # adjacent-index edges also cover their 2-point windows
        assert cs.edges_at(1, 2, 100.0) == {(1, 2, 1), (1, 2, -1)}
        assert cs.edges_at(2, 3, 100.0) == {(2, 3, 1), (2, 3, -1)}

    @pytest.mark.parametrize("n,seed", [(12, 70), (20, 71), (28, 72)])
    def test_matches_window_oracle_at_probes(self, n, seed):
        pts = rand_points(n, seed)
        cs = temporal_alpha_shape(pts, validate=True)
        for i in range(1, n):
            for j in range(i + 1, n + 1):
                mask = (
                    (cs.i_min <= i) & (i <= cs.i_max)
                    & (cs.j_min <= j) & (j <= cs.j_max)
                )
                vals = sorted(
                    {float(v) for v in cs.alpha_lo[mask]}
                    | {float(v) for v in cs.alpha_hi[mask] if math.isfinite(v)}
                )
                probes = [vals[0] / 2] if vals else [1.0]
                probes += vals
                probes += [(a + b) / 2 for a, b in zip(vals, vals[1:])]
                if vals:
                    probes.append(vals[-1] * 2 + 1)
                table = window_alpha_table(pts, i, j)
                for alpha in probes:
                    want = {
                        es for es, (lo, hi) in table.items() if lo <= alpha <= hi
                    }
                    assert cs.edges_at(i, j, alpha) == want

    @pytest.mark.parametrize("n,seed", [(18, 73), (26, 74)])
    def test_minimality_and_disjointness(self, n, seed):
        cs = temporal_alpha_shape(rand_points(n, seed), validate=True)
        groups = defaultdict(list)
        for k in range(len(cs)):
            row = cs.row(k)
            groups[(row[0], row[1], row[2])].append(row)
        for rows in groups.values():
            for x in range(len(rows)):
                for y in range(x + 1, len(rows)):
                    c1, c2 = rows[x], rows[y]
                    io = max(c1[3], c2[3]) <= min(c1[4], c2[4])
                    jo = max(c1[5], c2[5]) <= min(c1[6], c2[6])
                    ao = max(c1[7], c2[7]) <= min(c1[8], c2[8])
                    assert not (io and jo and ao), "same-side cuboids overlap"
                    if (c1[7], c1[8]) == (c2[7], c2[8]):
                        same_i = c1[3] == c2[3] and c1[4] == c2[4]
                        same_j = c1[5] == c2[5] and c1[6] == c2[6]
                        adj = (
                            same_i
                            and (c1[6] + 1 == c2[5] or c2[6] + 1 == c1[5])
                        ) or (
                            same_j
                            and (c1[4] + 1 == c2[3] or c2[4] + 1 == c1[3])
                        )
                        assert not adj, "mergeable cuboid pair"

    @pytest.mark.parametrize("n,seed", [(16, 75), (24, 76)])
    def test_bound_and_projection(self, n, seed):
        pts = rand_points(n, seed)
        res = enumerate_all(pts)
        cs = temporal_alpha_shape(pts)
        assert len(cs) <= 3 * (n - 1) * len(res.records)
        reg = res.registry()
        cub_cells = defaultdict(set)
        for k in range(len(cs)):
            row = cs.row(k)
            cub_cells[(row[0], row[1])] |= {
                (i, j)
                for i in range(row[3], row[4] + 1)
                for j in range(row[5], row[6] + 1)
            }
        for edge, sides in reg.items():
            stair = set()
            for side, lists in sides.items():
                for lst in lists:
                    for rec in lst:
                        i1, i2, j1, j2 = record_rect(rec, n)
                        stair |= {
                            (i, j)
                            for i in range(i1, i2 + 1)
                            for j in range(j1, j2 + 1)
                        }
            assert cub_cells[edge] == stair

    def test_alpha_lo_at_least_rmin(self):
        pts = rand_points(25, 77)
        cs = temporal_alpha_shape(pts)
        for k in range(len(cs)):
            a, b, _, _, _, _, _, lo, hi = cs.row(k)
            rmin = edge_half_length(
                pts[a - 1].x, pts[a - 1].y, pts[b - 1].x, pts[b - 1].y
            )
            assert lo >= rmin
            assert lo <= hi

    def test_deterministic_order(self):
        pts = rand_points(15, 78)
        c1 = temporal_alpha_shape(pts)
        c2 = temporal_alpha_shape(pts)
        assert all((c1.edge_a == c2.edge_a).tolist())
        assert all((c1.alpha_lo == c2.alpha_lo).tolist())
        assert all((c1.j_max == c2.j_max).tolist())
