"""2D geometric primitives: angles, discs, convex polygons, segment queries."""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


def normalize_angle(theta: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    return math.pi - (math.pi - theta) % TWO_PI


def shortest_arc(from_theta: float, to_theta: float) -> float:
    """Signed smallest rotation taking from_theta to to_theta, in (-pi, pi]."""
    return normalize_angle(to_theta - from_theta)


def interpolate_angle(from_theta: float, to_theta: float, t: float) -> float:
    """Interpolate along the shortest arc, t in [0, 1]."""
    return normalize_angle(from_theta + shortest_arc(from_theta, to_theta) * t)


def point_segment_distance(
    px: float, py: float, ax: float, ay: float, bx: float, by: float
) -> float:
    """Distance from point (px, py) to the closed segment a-b."""
    dx, dy = bx - ax, by - ay
    seg_len_sq = dx * dx + dy * dy
    if seg_len_sq == 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / seg_len_sq
    t = max(0.0, min(1.0, t))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def _orient(ax: float, ay: float, bx: float, by: float, cx: float, cy: float) -> float:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def segments_cross(
    p1: tuple[float, float],
    p2: tuple[float, float],
    q1: tuple[float, float],
    q2: tuple[float, float],
) -> bool:
    """True iff closed segments p1-p2 and q1-q2 intersect."""
    d1 = _orient(*q1, *q2, *p1)
    d2 = _orient(*q1, *q2, *p2)
    d3 = _orient(*p1, *p2, *q1)
    d4 = _orient(*p1, *p2, *q2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)):
        return True

    def on_segment(a, b, c):
        return (
            min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])
        )

    if d1 == 0 and on_segment(q1, q2, p1):
        return True
    if d2 == 0 and on_segment(q1, q2, p2):
        return True
    if d3 == 0 and on_segment(p1, p2, q1):
        return True
    if d4 == 0 and on_segment(p1, p2, q2):
        return True
    return False


@dataclass(frozen=True)
class Circle:
    center: tuple[float, float]
    radius: float

    def overlaps_disc(self, x: float, y: float, r: float) -> bool:
        """True iff the open interiors of this circle and the disc overlap."""
        return math.hypot(x - self.center[0], y - self.center[1]) < self.radius + r

    def intersects_segment(self, a: tuple[float, float], b: tuple[float, float]) -> bool:
        return (
            point_segment_distance(*self.center, a[0], a[1], b[0], b[1]) < self.radius
        )


@dataclass(frozen=True)
class ConvexPolygon:
    """Convex polygon with vertices in counter-clockwise order."""

    vertices: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        verts = tuple((float(x), float(y)) for x, y in self.vertices)
        if len(verts) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        # Normalize the winding so containment tests can assume CCW.
        area2 = sum(
            verts[i][0] * verts[(i + 1) % len(verts)][1]
            - verts[(i + 1) % len(verts)][0] * verts[i][1]
            for i in range(len(verts))
        )
        if area2 < 0:
            verts = tuple(reversed(verts))
        n = len(verts)
        for i in range(n):
            a, b, c = verts[i], verts[(i + 1) % n], verts[(i + 2) % n]
            if _orient(*a, *b, *c) < 0:
                raise ValueError("polygon is not convex")
        object.__setattr__(self, "vertices", verts)

    def contains_point(self, x: float, y: float) -> bool:
        n = len(self.vertices)
        for i in range(n):
            a = self.vertices[i]
            b = self.vertices[(i + 1) % n]
            if _orient(*a, *b, x, y) < 0:
                return False
        return True

    def distance_to_point(self, x: float, y: float) -> float:
        """Distance from (x, y) to the closed polygonal region (0 inside)."""
        if self.contains_point(x, y):
            return 0.0
        n = len(self.vertices)
        return min(
            point_segment_distance(
                x, y, *self.vertices[i], *self.vertices[(i + 1) % n]
            )
            for i in range(n)
        )

    def overlaps_disc(self, x: float, y: float, r: float) -> bool:
        return self.distance_to_point(x, y) < r

    def intersects_segment(self, a: tuple[float, float], b: tuple[float, float]) -> bool:
        if self.contains_point(*a) or self.contains_point(*b):
            return True
        n = len(self.vertices)
        for i in range(n):
            if segments_cross(a, b, self.vertices[i], self.vertices[(i + 1) % n]):
                return True
        return False


Shape = Circle | ConvexPolygon
