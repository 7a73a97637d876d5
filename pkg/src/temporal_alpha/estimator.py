"""Scikit-learn style front door for the temporal alpha-shape pipeline."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from . import boxtree
from .geometry import TimedPoint
from .staircase import temporal_alpha_shape


def check_points(X):
    """Validate a point sequence: an (n, 2) array of finite coordinates,
    n >= 2, no duplicate rows. Row order is the temporal order."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != 2:
        raise ValueError(f"expected an (n, 2) array of points, got shape {X.shape}")
    if len(X) < 2:
        raise ValueError("need at least 2 points")
    if not np.isfinite(X).all():
        raise ValueError("coordinates must be finite")
    order = np.lexsort((X[:, 1], X[:, 0]))
    sx = X[order]
    dup = np.all(sx[1:] == sx[:-1], axis=1)
    if dup.any():
        k = int(np.nonzero(dup)[0][0])
        raise ValueError(
            f"duplicate coordinates at rows {order[k]} and {order[k + 1]} "
            "(deduplicate or perturb on ingestion)"
        )
    return X


class TemporalAlphaShape(BaseEstimator):
    """Precomputed alpha-shapes of every time window of a point sequence.

    ``fit`` consumes the points in temporal order (one timestamp per row) and
    computes the minimal cuboid description of every window's alpha-shape for
    every alpha, plus a stabbing index over it. ``query`` then answers any
    (window start, window end, alpha) triple without touching the points.

    Parameters
    ----------
    leaf_capacity : int
        Bucket size of the stabbing index leaves.
    build_index : bool
        Skip index construction (queries fall back to a linear filter).
    validate : bool
        Run structural self-checks during the pipeline (slower).

    Attributes
    ----------
    points_ : (n, 2) array of the fitted points.
    n_ : number of points.
    cuboids_ : the cuboid arrays (CuboidSet).
    index_ : the stabbing index, or None.
    triangle_count_ : number of distinct window Delaunay triangles.
    cuboid_count_ : total number of cuboids.
    """

    def __init__(self, leaf_capacity=8, build_index=True, validate=False):
        self.leaf_capacity = leaf_capacity
        self.build_index = build_index
        self.validate = validate

    def fit(self, X, y=None):
        X = check_points(X)
        pts = [TimedPoint(k + 1, float(x), float(y_)) for k, (x, y_) in enumerate(X)]
        cs = temporal_alpha_shape(pts, validate=self.validate)
        self.points_ = X
        self.n_ = cs.n
        self.cuboids_ = cs
        self.triangle_count_ = cs.record_count
        self.cuboid_count_ = len(cs)
        self.index_ = boxtree.build(cs, self.leaf_capacity) if self.build_index else None
        return self

    def _check_fitted(self):
        if not hasattr(self, "cuboids_"):
            raise RuntimeError("estimator is not fitted; call fit(X) first")

    def _check_window(self, i, j):
        if not (isinstance(i, (int, np.integer)) and isinstance(j, (int, np.integer))):
            raise ValueError("window bounds must be integers")
        if not (1 <= i < j <= self.n_):
            raise ValueError(f"window ({i},{j}) out of range for n={self.n_}")

    def stab_ids(self, i, j, alpha):
        """Indices of cuboids containing the query triple."""
        self._check_fitted()
        self._check_window(i, j)
        if not alpha > 0:
            raise ValueError("alpha must be positive")
        if self.index_ is not None:
            return self.index_.stab(i, j, alpha)
        return self.cuboids_.stab_linear(i, j, alpha)

    def query(self, i, j, alpha):
        """Alpha-shape of window (i, j) at the given alpha.

        Returns a sorted list of (a, b, side, alpha_lo, alpha_hi) tuples, one
        per edge side admitting an empty alpha-ball there.
        """
        ids = self.stab_ids(i, j, alpha)
        cs = self.cuboids_
        out = {}
        for k in ids:
            key = (int(cs.edge_a[k]), int(cs.edge_b[k]), int(cs.side[k]))
            out[key] = (float(cs.alpha_lo[k]), float(cs.alpha_hi[k]))
        return sorted((a, b, s, lo, hi) for (a, b, s), (lo, hi) in out.items())

    def query_edges(self, i, j, alpha):
        """Edge sides only, as a set of (a, b, side) tuples."""
        return {(a, b, s) for a, b, s, _, _ in self.query(i, j, alpha)}
