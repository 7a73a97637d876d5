"""Planar geometric predicates with exact sign decisions, plus circumdisk helpers.

Predicates evaluate a floating-point expression first and accept its sign
whenever the result clears a forward error bound; otherwise they re-evaluate
with exact rational arithmetic on the same binary64 inputs. Sign decisions are
therefore never wrong, while the common case stays cheap.

Derived quantities (circumcenters, radii) are plain floats. Every consumer in
this package obtains them through the helpers here, so independently computed
values that must be compared (e.g. the same circumradius arriving via two code
paths) are bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

# Forward error bounds for binary64, in the style of adaptive-precision
# predicate filters. eps is half an ulp of 1.0. The relative bounds are only
# valid away from the subnormal range, so magnitudes below UNDERFLOW_GUARD
# are routed to the exact path outright.
_EPS = 2.0 ** -53
ORIENT_BOUND = (3.0 + 16.0 * _EPS) * _EPS
INCIRCLE_BOUND = (10.0 + 96.0 * _EPS) * _EPS
UNDERFLOW_GUARD = 1e-280

SIDE_FRONT = 1
SIDE_BACK = -1
SIDE_ON = 0


@dataclass(frozen=True)
class TimedPoint:
    """A point of the input sequence; ``index`` is its 1-based timestamp."""

    index: int
    x: float
    y: float


@dataclass(frozen=True)
class Disk:
    """A circumdisk. ``center is None`` encodes the degenerate halfplane disk
    of a hull facet: radius is +inf and ``direction`` points to the open side.
    """

    center: tuple[float, float] | None
    radius: float
    direction: tuple[float, float] | None = None

    def __post_init__(self):
        if (self.center is None) != math.isinf(self.radius):
            raise ValueError("radius must be +inf exactly for at-infinity disks")
        if self.center is None and self.direction is None:
            raise ValueError("at-infinity disk needs a direction")


def _sign(v) -> int:
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0


def orient_sign(ax, ay, bx, by, cx, cy) -> int:
    """Sign of twice the signed area of triangle abc. Exact decision."""
    detleft = (ax - cx) * (by - cy)
    detright = (ay - cy) * (bx - cx)
    det = detleft - detright
    if detleft > 0.0:
        if detright <= 0.0:
            if detright < 0.0 or detleft > UNDERFLOW_GUARD:
                return 1  # opposite signs cannot cancel
            return _orient_exact(ax, ay, bx, by, cx, cy)
        detsum = detleft + detright
    elif detleft < 0.0:
        if detright >= 0.0:
            if detright > 0.0 or -detleft > UNDERFLOW_GUARD:
                return -1
            return _orient_exact(ax, ay, bx, by, cx, cy)
        detsum = -detleft - detright
    else:
        # detleft is zero; a zero detright may still hide an underflowed value
        if detright > UNDERFLOW_GUARD or -detright > UNDERFLOW_GUARD:
            return _sign(-detright)
        return _orient_exact(ax, ay, bx, by, cx, cy)
    if detsum > UNDERFLOW_GUARD and (
        det >= ORIENT_BOUND * detsum or -det >= ORIENT_BOUND * detsum
    ):
        return _sign(det)
    return _orient_exact(ax, ay, bx, by, cx, cy)


def _orient_exact(ax, ay, bx, by, cx, cy) -> int:
    ax, ay = Fraction(ax), Fraction(ay)
    bx, by = Fraction(bx), Fraction(by)
    cx, cy = Fraction(cx), Fraction(cy)
    det = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx)
    return _sign(det)


def incircle_sign(ax, ay, bx, by, cx, cy, dx, dy) -> int:
    """Sign of the incircle determinant for triangle abc and query point d.

    Positive iff d lies strictly inside the circumcircle of abc when abc is
    counterclockwise; the sign flips with the orientation of abc. Exact.
    """
    adx = ax - dx
    ady = ay - dy
    bdx = bx - dx
    bdy = by - dy
    cdx = cx - dx
    cdy = cy - dy

    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    alift = adx * adx + ady * ady

    cdxady = cdx * ady
    adxcdy = adx * cdy
    blift = bdx * bdx + bdy * bdy

    adxbdy = adx * bdy
    bdxady = bdx * ady
    clift = cdx * cdx + cdy * cdy

    det = (
        alift * (bdxcdy - cdxbdy)
        + blift * (cdxady - adxcdy)
        + clift * (adxbdy - bdxady)
    )
    permanent = (
        (abs(bdxcdy) + abs(cdxbdy)) * alift
        + (abs(cdxady) + abs(adxcdy)) * blift
        + (abs(adxbdy) + abs(bdxady)) * clift
    )
    if permanent > UNDERFLOW_GUARD:
        errbound = INCIRCLE_BOUND * permanent
        if det > errbound or -det > errbound:
            return _sign(det)
    return _incircle_exact(ax, ay, bx, by, cx, cy, dx, dy)


def _incircle_exact(ax, ay, bx, by, cx, cy, dx, dy) -> int:
    adx = Fraction(ax) - Fraction(dx)
    ady = Fraction(ay) - Fraction(dy)
    bdx = Fraction(bx) - Fraction(dx)
    bdy = Fraction(by) - Fraction(dy)
    cdx = Fraction(cx) - Fraction(dx)
    cdy = Fraction(cy) - Fraction(dy)
    det = (
        (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
        + (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy)
        + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady)
    )
    return _sign(det)


def apex_dot_sign(ax, ay, bx, by, cx, cy) -> int:
    """Sign of (a-c).(b-c), i.e. of the cosine of the angle at apex c.

    Positive means the angle at c is acute, so the circumcenter of triangle
    abc lies strictly on c's side of line ab; zero means it lies on the line;
    negative means it lies on the far side. Exact decision.
    """
    t1 = (ax - cx) * (bx - cx)
    t2 = (ay - cy) * (by - cy)
    det = t1 + t2
    mag = abs(t1) + abs(t2)
    if mag > UNDERFLOW_GUARD:
        bound = ORIENT_BOUND * mag
        if det > bound or -det > bound:
            return _sign(det)
    t1 = (Fraction(ax) - Fraction(cx)) * (Fraction(bx) - Fraction(cx))
    t2 = (Fraction(ay) - Fraction(cy)) * (Fraction(by) - Fraction(cy))
    return _sign(t1 + t2)


def orient(p: TimedPoint, q: TimedPoint, r: TimedPoint) -> int:
    """Orientation of the point triple: +1 counterclockwise, -1 clockwise,
    0 collinear."""
    return orient_sign(p.x, p.y, q.x, q.y, r.x, r.y)


def in_circle(p: TimedPoint, q: TimedPoint, r: TimedPoint, s: TimedPoint) -> int:
    """Incircle test for s against the circumcircle of pqr.

    Positive iff s is strictly inside when pqr is counterclockwise; swapping
    two base points negates the result. Raises on a collinear base triangle.
    """
    if orient(p, q, r) == 0:
        raise ValueError("incircle test needs a non-degenerate base triangle")
    return incircle_sign(p.x, p.y, q.x, q.y, r.x, r.y, s.x, s.y)


def circumcircle(ax, ay, bx, by, cx, cy) -> tuple[float, float, float]:
    """Circumcenter and circumradius of a non-collinear coordinate triple."""
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    asq = ax * ax + ay * ay
    bsq = bx * bx + by * by
    csq = cx * cx + cy * cy
    ux = (asq * (by - cy) + bsq * (cy - ay) + csq * (ay - by)) / d
    uy = (asq * (cx - bx) + bsq * (ax - cx) + csq * (bx - ax)) / d
    r = math.hypot(ux - ax, uy - ay)
    return ux, uy, r


def circumradius(ax, ay, bx, by, cx, cy) -> float:
    return circumcircle(ax, ay, bx, by, cx, cy)[2]


def circumdisk(p: TimedPoint, q: TimedPoint, r: TimedPoint) -> Disk:
    """Disk through three non-collinear points."""
    if orient(p, q, r) == 0:
        raise ValueError("collinear points have no circumdisk")
    ux, uy, rad = circumcircle(p.x, p.y, q.x, q.y, r.x, r.y)
    return Disk(center=(ux, uy), radius=rad)


def hull_halfplane_disk(p: TimedPoint, q: TimedPoint, outward: tuple[float, float]) -> Disk:
    """Degenerate circumdisk of a hull facet: radius +inf, center at infinity
    on the outward side of segment pq."""
    if (p.x, p.y) == (q.x, q.y):
        raise ValueError("hull facet needs distinct endpoints")
    return Disk(center=None, radius=math.inf, direction=outward)


def min_edge_radius(p: TimedPoint, q: TimedPoint) -> float:
    """Radius of the smallest disk through both endpoints: half the length."""
    return edge_half_length(p.x, p.y, q.x, q.y)


def edge_half_length(ax, ay, bx, by) -> float:
    if ax == bx and ay == by:
        raise ValueError("coincident endpoints")
    return 0.5 * math.hypot(bx - ax, by - ay)


def center_side(edge: tuple[TimedPoint, TimedPoint], disk: Disk) -> int:
    """Classify a disk center against the fixed front side of an edge.

    The front side is the side to the left of the edge directed from the
    lower-index endpoint to the higher-index endpoint. Finite centers are
    classified with the orientation predicate; at-infinity centers by the
    sign of the direction against the edge normal.
    """
    p, q = edge
    if p.index == q.index:
        raise ValueError("edge endpoints must be distinct points")
    lo, hi = (p, q) if p.index < q.index else (q, p)
    if disk.center is not None:
        return orient_sign(lo.x, lo.y, hi.x, hi.y, disk.center[0], disk.center[1])
    dx, dy = disk.direction
    # cross(hi - lo, d) > 0 iff the at-infinity direction points to the left
    t1 = (hi.x - lo.x) * dy
    t2 = (hi.y - lo.y) * dx
    det = t1 - t2
    mag = abs(t1) + abs(t2)
    if mag > UNDERFLOW_GUARD:
        bound = 1e-15 * mag  # covers one subtraction and one product per term
        if det > bound or -det > bound:
            return _sign(det)
    det = (Fraction(hi.x) - Fraction(lo.x)) * Fraction(dy) - (
        Fraction(hi.y) - Fraction(lo.y)
    ) * Fraction(dx)
    return _sign(det)


def triangle_center_side(apex, e1, e2) -> int:
    """Side of edge (e1, e2) holding the circumcenter of triangle (apex, e1, e2),
    expressed relative to the apex: +1 the apex's own side, 0 on the edge line,
    -1 the opposite side. Inputs are (x, y) pairs; the decision is exact."""
    return apex_dot_sign(e1[0], e1[1], e2[0], e2[1], apex[0], apex[1])
