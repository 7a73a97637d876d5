"""Shared fixtures for the test suite."""

import math
import random

from temporal_alpha.geometry import TimedPoint


def rand_points(n, seed, span=1.0):
    rng = random.Random(seed)
    return [
        TimedPoint(i + 1, rng.uniform(0, span), rng.uniform(0, span)) for i in range(n)
    ]


def quadratic_edge_points(k):
    """A sequence forcing the central edge into (k+1)^2 cuboids on one side.

    The edge spans (-1,0)-(1,0) at indices k+1, k+2. Points 1..k sit just
    below the edge, inside its diameter circle, ordered so the binding lower
    coface in any window starting at i is point i; each start therefore sets
    a different lower alpha bound. Points k+3..2k+2 sit above and outside the
    diameter circle, ordered so the binding upper coface in any window ending
    at j is point j; each end sets a different upper bound. All bound pairs
    are compatible, so every (start, end) combination is a distinct cuboid.
    """

    def below(tau, x):
        return tau - math.sqrt(tau * tau + 1.0 - x * x)

    def above(tau, x):
        return tau + math.sqrt(tau * tau + 1.0 - x * x)

    pts = []
    for i in range(1, k + 1):
        tau = 0.9 - 0.8 * (i - 1) / k
        x = 0.02 * i + 0.003 * i * i
        pts.append(TimedPoint(i, x, below(tau, x)))
    pts.append(TimedPoint(k + 1, -1.0, 0.0))
    pts.append(TimedPoint(k + 2, 1.0, 0.0))
    for m in range(1, k + 1):
        tau = 2.9 - 0.8 * (m - 1) / k
        x = -0.025 * m - 0.002 * m * m
        pts.append(TimedPoint(k + 2 + m, x, above(tau, x)))
    return pts
