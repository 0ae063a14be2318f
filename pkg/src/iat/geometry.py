"""Shapes, containment, areas, handle editing and viewport transforms.

Coordinates are continuous image-space pixels, origin top-left, y downward.
All types are immutable values and every operation is a pure function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Union

from .errors import InvalidShapeError

ZOOM_MIN = 0.1
ZOOM_MAX = 32.0

# Default handle-grab tolerance in screen pixels; divide by zoom for image px.
HANDLE_TOLERANCE_PX = 6.0


@dataclass(frozen=True)
class Point:
    x: float
    y: float


@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned rectangle: top-left corner plus positive extents."""

    x: float
    y: float
    w: float
    h: float


@dataclass(frozen=True)
class Ellipse:
    """Axis-aligned ellipse: center plus positive semi-axes."""

    cx: float
    cy: float
    rx: float
    ry: float


@dataclass(frozen=True)
class Polygon:
    """Implicitly closed polygon (last vertex connects back to the first)."""

    vertices: tuple[Point, ...]

    def __init__(self, vertices: Iterable[Point]):
        object.__setattr__(self, "vertices", tuple(vertices))


Shape = Union[Rectangle, Ellipse, Polygon]


@dataclass(frozen=True)
class ViewTransform:
    """Zoom/pan mapping from image coordinates to screen coordinates."""

    zoom: float = 1.0
    pan_x: float = 0.0
    pan_y: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.zoom) and math.isfinite(self.pan_x) and math.isfinite(self.pan_y)):
            raise ValueError("non-finite view transform")
        if not (ZOOM_MIN <= self.zoom <= ZOOM_MAX):
            raise ValueError(f"zoom {self.zoom} outside [{ZOOM_MIN}, {ZOOM_MAX}]")


def clamp_zoom(zoom: float) -> float:
    return min(ZOOM_MAX, max(ZOOM_MIN, zoom))


def image_to_screen(t: ViewTransform, p: Point) -> Point:
    return Point(p.x * t.zoom + t.pan_x, p.y * t.zoom + t.pan_y)


def screen_to_image(t: ViewTransform, p: Point) -> Point:
    return Point((p.x - t.pan_x) / t.zoom, (p.y - t.pan_y) / t.zoom)


def _finite(*values: float) -> bool:
    return all(math.isfinite(v) for v in values)


def _orient(a: Point, b: Point, c: Point) -> float:
    """Cross product of (b-a) x (c-a): >0 left turn, <0 right, 0 collinear."""
    return (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y)


def _on_segment(a: Point, b: Point, p: Point) -> bool:
    """True iff p lies on the closed segment ab (collinearity assumed checked)."""
    return (
        min(a.x, b.x) <= p.x <= max(a.x, b.x)
        and min(a.y, b.y) <= p.y <= max(a.y, b.y)
    )


def segments_intersect(a1: Point, a2: Point, b1: Point, b2: Point) -> bool:
    """Closed-segment intersection; touching at a single point counts."""
    d1 = _orient(b1, b2, a1)
    d2 = _orient(b1, b2, a2)
    d3 = _orient(a1, a2, b1)
    d4 = _orient(a1, a2, b2)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and (
        (d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)
    ):
        return True
    if d1 == 0 and _on_segment(b1, b2, a1):
        return True
    if d2 == 0 and _on_segment(b1, b2, a2):
        return True
    if d3 == 0 and _on_segment(a1, a2, b1):
        return True
    if d4 == 0 and _on_segment(a1, a2, b2):
        return True
    return False


def _polygon_edges(poly: Polygon) -> list[tuple[Point, Point]]:
    vs = poly.vertices
    return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]


def _adjacent_edges_overlap(shared: Point, a: Point, b: Point) -> bool:
    """Two edges meeting at ``shared`` overlap iff they leave it collinearly
    in the same direction (a spur / backtracking boundary)."""
    if _orient(shared, a, b) != 0:
        return False
    return (a.x - shared.x) * (b.x - shared.x) + (a.y - shared.y) * (b.y - shared.y) > 0


def validate(shape: Shape) -> None:
    """Raise InvalidShapeError naming the violated invariant; None when valid."""
    if isinstance(shape, Rectangle):
        if not _finite(shape.x, shape.y, shape.w, shape.h):
            raise InvalidShapeError("non-finite coordinate")
        if shape.w <= 0 or shape.h <= 0:
            raise InvalidShapeError("non-positive extent")
    elif isinstance(shape, Ellipse):
        if not _finite(shape.cx, shape.cy, shape.rx, shape.ry):
            raise InvalidShapeError("non-finite coordinate")
        if shape.rx <= 0 or shape.ry <= 0:
            raise InvalidShapeError("non-positive semi-axis")
    elif isinstance(shape, Polygon):
        _validate_polygon(shape)
    else:
        raise InvalidShapeError(f"not a shape: {type(shape).__name__}")


def _validate_polygon(poly: Polygon) -> None:
    vs = poly.vertices
    if len(vs) < 3:
        raise InvalidShapeError("fewer than 3 vertices")
    for v in vs:
        if not _finite(v.x, v.y):
            raise InvalidShapeError("non-finite coordinate")
    n = len(vs)
    for i in range(n):
        if vs[i] == vs[(i + 1) % n]:
            raise InvalidShapeError("consecutive equal vertices")
    edges = _polygon_edges(poly)
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                # Adjacent edges legitimately share one endpoint.
                shared = edges[i][1] if j == i + 1 else edges[i][0]
                a = edges[i][0] if j == i + 1 else edges[i][1]
                b = edges[j][1] if j == i + 1 else edges[j][0]
                if _adjacent_edges_overlap(shared, a, b):
                    raise InvalidShapeError("self-intersecting")
            elif segments_intersect(*edges[i], *edges[j]):
                raise InvalidShapeError("self-intersecting")


def is_valid(shape: Shape) -> bool:
    try:
        validate(shape)
    except InvalidShapeError:
        return False
    return True


def contains(shape: Shape, p: Point) -> bool:
    """Closed-region containment: boundary points count as inside."""
    if isinstance(shape, Rectangle):
        return shape.x <= p.x <= shape.x + shape.w and shape.y <= p.y <= shape.y + shape.h
    if isinstance(shape, Ellipse):
        nx = (p.x - shape.cx) / shape.rx
        ny = (p.y - shape.cy) / shape.ry
        return nx * nx + ny * ny <= 1.0
    return _polygon_contains(shape, p)


def _polygon_contains(poly: Polygon, p: Point) -> bool:
    inside = False
    for a, b in _polygon_edges(poly):
        if _orient(a, b, p) == 0 and _on_segment(a, b, p):
            return True
        if (a.y > p.y) != (b.y > p.y):
            x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y)
            if p.x < x_cross:
                inside = not inside
    return inside


def area(shape: Shape) -> float:
    """Area in px²: w·h, π·rx·ry, or the absolute shoelace sum."""
    if isinstance(shape, Rectangle):
        return shape.w * shape.h
    if isinstance(shape, Ellipse):
        return math.pi * shape.rx * shape.ry
    vs = shape.vertices
    acc = 0.0
    for i in range(len(vs)):
        a, b = vs[i], vs[(i + 1) % len(vs)]
        acc += a.x * b.y - b.x * a.y
    return abs(acc) / 2.0


def bounding_box(shape: Shape) -> Rectangle:
    if isinstance(shape, Rectangle):
        return shape
    if isinstance(shape, Ellipse):
        return Rectangle(shape.cx - shape.rx, shape.cy - shape.ry, 2 * shape.rx, 2 * shape.ry)
    xs = [v.x for v in shape.vertices]
    ys = [v.y for v in shape.vertices]
    return Rectangle(min(xs), min(ys), max(xs) - min(xs), max(ys) - min(ys))


def handles(shape: Shape) -> list[Point]:
    """Reference points: rect corners TL,TR,BR,BL; ellipse axis endpoints
    right,bottom,left,top; polygon vertices in stored order."""
    if isinstance(shape, Rectangle):
        return [
            Point(shape.x, shape.y),
            Point(shape.x + shape.w, shape.y),
            Point(shape.x + shape.w, shape.y + shape.h),
            Point(shape.x, shape.y + shape.h),
        ]
    if isinstance(shape, Ellipse):
        return [
            Point(shape.cx + shape.rx, shape.cy),
            Point(shape.cx, shape.cy + shape.ry),
            Point(shape.cx - shape.rx, shape.cy),
            Point(shape.cx, shape.cy - shape.ry),
        ]
    return list(shape.vertices)


def move_handle(shape: Shape, index: int, to: Point) -> Shape:
    """Drag one reference point; raises InvalidShapeError if the result would
    violate invariants (the input shape is never modified)."""
    hs = handles(shape)
    if not 0 <= index < len(hs):
        raise IndexError(f"handle index {index} out of range")
    if not _finite(to.x, to.y):
        raise InvalidShapeError("non-finite coordinate")
    if isinstance(shape, Rectangle):
        opposite = hs[(index + 2) % 4]
        w = abs(to.x - opposite.x)
        h = abs(to.y - opposite.y)
        if w == 0 or h == 0:
            raise InvalidShapeError("non-positive extent")
        return Rectangle(min(to.x, opposite.x), min(to.y, opposite.y), w, h)
    if isinstance(shape, Ellipse):
        if index in (0, 2):
            r = abs(to.x - shape.cx)
            if r == 0:
                raise InvalidShapeError("non-positive semi-axis")
            return replace(shape, rx=r)
        r = abs(to.y - shape.cy)
        if r == 0:
            raise InvalidShapeError("non-positive semi-axis")
        return replace(shape, ry=r)
    vs = list(shape.vertices)
    vs[index] = to
    moved = Polygon(vs)
    validate(moved)
    return moved


def translate(shape: Shape, dx: float, dy: float) -> Shape:
    if isinstance(shape, Rectangle):
        return replace(shape, x=shape.x + dx, y=shape.y + dy)
    if isinstance(shape, Ellipse):
        return replace(shape, cx=shape.cx + dx, cy=shape.cy + dy)
    return Polygon(Point(v.x + dx, v.y + dy) for v in shape.vertices)


def pick_handle(shape: Shape, p: Point, tol: float) -> Optional[int]:
    """Index of the nearest handle within ``tol`` (ties: lowest index)."""
    best: Optional[int] = None
    best_d = tol
    for i, h in enumerate(handles(shape)):
        d = math.hypot(h.x - p.x, h.y - p.y)
        if d < best_d or (best is None and d <= tol):
            best = i
            best_d = d
    return best
