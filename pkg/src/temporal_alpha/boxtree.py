"""Point-stabbing index over 3D boxes (window-start, window-end, alpha).

Each box is lifted to a 6-dimensional point from its interval endpoints, and
a kd-tree is built over those points: the split dimension cycles, splits are
at the median (ties broken by lower box id), and every inner node holds up to
six priority boxes, the ones most extreme in each direction of each
dimension, stored at the node and withheld from the subtrees. Every node
carries the bounding box of all boxes below it, and queries descend only into
children whose bounding box contains the query point.

Unbounded alpha tops are lifted to a sentinel strictly above every finite
bound in the dataset; queries clamp alpha to the sentinel, which preserves
exact closed-interval semantics.

Construction is single-threaded; a built tree is immutable and safe for
unlimited concurrent queries.
"""

from __future__ import annotations

import math

import numpy as np

_DIRECTIONS = ((0, True), (1, False), (2, True), (3, False), (4, True), (5, False))


class BoxTree:
    def __init__(self, columns, big, leaf_capacity=8):
        """``columns`` is an (N, 6) float array of lifted box coordinates
        with the alpha sentinel already applied; use :func:`build` instead of
        calling this directly."""
        self.columns = columns
        self.big = big
        self.leaf_capacity = leaf_capacity
        self.node_bbox = None
        self.node_child = None
        self.node_leaf = None
        self.node_items = None
        self._build()

    # -- construction --------------------------------------------------------

    def _build(self):
        C = self.columns
        n = len(C)
        bboxes = []
        children = []
        leaf_flags = []
        items = []

        def new_node(idx):
            bboxes.append(
                [
                    C[idx, 0].min(), C[idx, 1].max(),
                    C[idx, 2].min(), C[idx, 3].max(),
                    C[idx, 4].min(), C[idx, 5].max(),
                ]
                if len(idx)
                else [math.inf, -math.inf] * 3
            )
            children.append([-1, -1])
            leaf_flags.append(False)
            items.append(None)
            return len(bboxes) - 1

        if n == 0:
            self.node_bbox = np.zeros((0, 6))
            self.node_child = np.zeros((0, 2), dtype=np.int64)
            self.node_leaf = np.zeros(0, dtype=bool)
            self.node_items = []
            return

        stack = [(new_node(np.arange(n, dtype=np.int64)), np.arange(n, dtype=np.int64), 0)]
        while stack:
            node, idx, depth = stack.pop()
            if len(idx) <= self.leaf_capacity:
                leaf_flags[node] = True
                items[node] = np.sort(idx)
                continue
            prio = []
            remaining = idx
            for dim, take_min in _DIRECTIONS:
                vals = C[remaining, dim]
                best = vals.min() if take_min else vals.max()
                cands = remaining[vals == best]
                pick = cands.min()  # deterministic tie rule: lower id
                prio.append(pick)
                remaining = remaining[remaining != pick]
            items[node] = np.array(sorted(prio), dtype=np.int64)
            axis = depth % 6
            order = np.lexsort((remaining, C[remaining, axis]))
            remaining = remaining[order]
            mid = len(remaining) // 2
            left_idx = remaining[:mid]
            right_idx = remaining[mid:]
            li = new_node(left_idx)
            ri = new_node(right_idx)
            children[node] = [li, ri]
            stack.append((li, left_idx, depth + 1))
            stack.append((ri, right_idx, depth + 1))

        self.node_bbox = np.array(bboxes, dtype=np.float64)
        self.node_child = np.array(children, dtype=np.int64)
        self.node_leaf = np.array(leaf_flags, dtype=bool)
        self.node_items = items

    # -- queries ---------------------------------------------------------------

    def stab(self, i, j, alpha):
        """Ids of all boxes containing (i, j, alpha), closed bounds, sorted."""
        return self.stab_with_visits(i, j, alpha)[0]

    def stab_with_visits(self, i, j, alpha):
        """stab plus the number of tree nodes the query visited."""
        if not alpha > 0:
            raise ValueError("alpha must be positive")
        if len(self.columns) == 0:
            return np.zeros(0, dtype=np.int64), 0
        a = min(float(alpha), self.big)
        qi, qj = float(i), float(j)
        C = self.columns
        bbox = self.node_bbox
        child = self.node_child
        leaf = self.node_leaf
        items = self.node_items
        out = []
        stack = [0]
        visits = 0
        while stack:
            nd = stack.pop()
            bb = bbox[nd]
            if not (
                bb[0] <= qi <= bb[1] and bb[2] <= qj <= bb[3] and bb[4] <= a <= bb[5]
            ):
                continue
            visits += 1
            it = items[nd]
            if it is not None and len(it):
                rows = C[it]
                hit = (
                    (rows[:, 0] <= qi) & (qi <= rows[:, 1])
                    & (rows[:, 2] <= qj) & (qj <= rows[:, 3])
                    & (rows[:, 4] <= a) & (a <= rows[:, 5])
                )
                out.extend(it[hit].tolist())
            if not leaf[nd]:
                stack.append(child[nd][0])
                stack.append(child[nd][1])
        return np.array(sorted(out), dtype=np.int64), visits

    @property
    def box_count(self):
        return len(self.columns)

    def all_stored_ids(self):
        """Every box id reachable in the tree (census helper)."""
        out = []
        for it in self.node_items:
            if it is not None:
                out.extend(it.tolist())
        return sorted(out)

    # -- serialization -----------------------------------------------------------

    def to_arrays(self):
        flat = (
            np.concatenate([i for i in self.node_items if i is not None])
            if any(i is not None and len(i) for i in self.node_items)
            else np.zeros(0, dtype=np.int64)
        )
        lens = np.array(
            [0 if i is None else len(i) for i in self.node_items], dtype=np.int64
        )
        return {
            "columns": self.columns,
            "big": np.array([self.big]),
            "leaf_capacity": np.array([self.leaf_capacity], dtype=np.int64),
            "node_bbox": self.node_bbox,
            "node_child": self.node_child,
            "node_leaf": self.node_leaf.astype(np.int8),
            "item_lens": lens,
            "item_flat": flat,
        }

    @classmethod
    def from_arrays(cls, arrays):
        tree = cls.__new__(cls)
        tree.columns = arrays["columns"]
        tree.big = float(arrays["big"][0])
        tree.leaf_capacity = int(arrays["leaf_capacity"][0])
        tree.node_bbox = arrays["node_bbox"]
        tree.node_child = arrays["node_child"]
        tree.node_leaf = arrays["node_leaf"].astype(bool)
        items = []
        pos = 0
        flat = arrays["item_flat"]
        for ln in arrays["item_lens"]:
            ln = int(ln)
            items.append(flat[pos : pos + ln])
            pos += ln
        tree.node_items = items
        return tree


def lift_boxes(i_min, i_max, j_min, j_max, alpha_lo, alpha_hi):
    """(N, 6) lifted coordinates plus the alpha sentinel used for +inf."""
    finite = alpha_hi[np.isfinite(alpha_hi)]
    big = float(max(finite.max() if len(finite) else 0.0, alpha_lo.max() if len(alpha_lo) else 0.0) + 1.0)
    hi = np.where(np.isfinite(alpha_hi), alpha_hi, big)
    cols = np.column_stack(
        [
            i_min.astype(np.float64),
            i_max.astype(np.float64),
            j_min.astype(np.float64),
            j_max.astype(np.float64),
            alpha_lo.astype(np.float64),
            hi.astype(np.float64),
        ]
    )
    return cols, big


def build(cuboids, leaf_capacity=8) -> BoxTree:
    """Stabbing index over a cuboid set (anything exposing the bound arrays)."""
    cols, big = lift_boxes(
        cuboids.i_min,
        cuboids.i_max,
        cuboids.j_min,
        cuboids.j_max,
        cuboids.alpha_lo,
        cuboids.alpha_hi,
    )
    return BoxTree(cols, big, leaf_capacity)


def linear_stab(columns, big, i, j, alpha):
    """Reference scan with the same semantics as BoxTree.stab."""
    a = min(float(alpha), big)
    hit = (
        (columns[:, 0] <= i) & (i <= columns[:, 1])
        & (columns[:, 2] <= j) & (j <= columns[:, 3])
        & (columns[:, 4] <= a) & (a <= columns[:, 5])
    )
    return np.nonzero(hit)[0]
