"""Planar primitives: half-planes, convex polygon clipping and exact disc/polygon areas.

Polygons are counter-clockwise vertex tuples. Every edge carries an integer tag
naming the constraint that produced it (``WINDOW`` for edges inherited from a
bounding window), which lets callers tell which half-planes are active.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

EPS = 1e-9
UNIT_EPS = 1e-12
WINDOW = -1


class GeometryError(ValueError):
    pass


class Point(NamedTuple):
    x: float
    y: float


class HalfPlane(NamedTuple):
    """Region ``nx*x + ny*y <= c`` with ``(nx, ny)`` a unit normal."""

    nx: float
    ny: float
    c: float

    @classmethod
    def from_normal(cls, nx: float, ny: float, c: float) -> "HalfPlane":
        norm = math.hypot(nx, ny)
        if norm == 0.0 or not math.isfinite(norm):
            raise GeometryError("half-plane normal must be a finite non-zero vector")
        return cls(nx / norm, ny / norm, c / norm)

    def signed_distance(self, p: Sequence[float]) -> float:
        return self.nx * p[0] + self.ny * p[1] - self.c

    def contains(self, p: Sequence[float], tol: float = 0.0) -> bool:
        return self.signed_distance(p) <= tol

    def flipped(self) -> "HalfPlane":
        return HalfPlane(-self.nx, -self.ny, -self.c)


@dataclass(frozen=True, slots=True)
class Disc:
    center: Point
    radius: float

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise GeometryError(f"disc radius must be positive and finite, got {self.radius!r}")
        if not (math.isfinite(self.center[0]) and math.isfinite(self.center[1])):
            raise GeometryError("disc center must be finite")
        if not isinstance(self.center, Point):
            object.__setattr__(self, "center", Point(float(self.center[0]), float(self.center[1])))

    @property
    def area(self) -> float:
        return math.pi * self.radius * self.radius

    def scaled(self, lam: float) -> "Disc":
        return Disc(Point(self.center.x * lam, self.center.y * lam), self.radius * lam)


@dataclass(frozen=True, slots=True)
class ConvexPolygon:
    """Counter-clockwise convex polygon; zero vertices is the empty region.

    ``tags[k]`` labels the edge from ``vertices[k]`` to ``vertices[k + 1]``.
    """

    vertices: tuple[Point, ...] = ()
    tags: tuple[int, ...] = ()

    @classmethod
    def from_points(cls, points: Iterable[Sequence[float]], tag: int = WINDOW) -> "ConvexPolygon":
        verts = [Point(float(x), float(y)) for x, y in points]
        if len(verts) < 3:
            return EMPTY
        if _signed_area(verts) < 0.0:
            verts.reverse()
        return cls(tuple(verts), (tag,) * len(verts))

    @classmethod
    def box(cls, xmin: float, ymin: float, xmax: float, ymax: float, tag: int = WINDOW) -> "ConvexPolygon":
        return cls.from_points([(xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax)], tag)

    @classmethod
    def regular(cls, cx: float, cy: float, circumradius: float, n: int, phase: float = 0.0,
                tag: int = WINDOW) -> "ConvexPolygon":
        step = 2.0 * math.pi / n
        return cls.from_points(
            [(cx + circumradius * math.cos(phase + k * step), cy + circumradius * math.sin(phase + k * step))
             for k in range(n)], tag)

    @property
    def is_empty(self) -> bool:
        return len(self.vertices) == 0

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self):
        v = self.vertices
        n = len(v)
        for k in range(n):
            yield v[k], v[(k + 1) % n]

    def bbox(self) -> tuple[float, float, float, float]:
        xs = [p.x for p in self.vertices]
        ys = [p.y for p in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def edge_halfplanes(self) -> list[HalfPlane]:
        out = []
        for a, b in self.edges():
            dx, dy = b.x - a.x, b.y - a.y
            length = math.hypot(dx, dy)
            nx, ny = dy / length, -dx / length
            out.append(HalfPlane(nx, ny, nx * a.x + ny * a.y))
        return out

    def max_distance(self, p: Sequence[float]) -> float:
        px, py = p[0], p[1]
        return max((math.hypot(v.x - px, v.y - py) for v in self.vertices), default=0.0)

    def contains(self, p: Sequence[float], tol: float = 0.0) -> bool:
        if self.is_empty:
            return False
        return all(h.signed_distance(p) <= tol for h in self.edge_halfplanes())

    def diameter(self) -> float:
        return point_diameter(self.vertices)

    def is_convex(self) -> bool:
        """Check the counter-clockwise convexity invariant at scale-relative tolerance."""
        v = self.vertices
        n = len(v)
        if n == 0:
            return True
        if n < 3:
            return False
        eps = _eps(v)
        for k in range(n):
            a, b, c = v[k], v[(k + 1) % n], v[(k + 2) % n]
            if max(abs(b.x - a.x), abs(b.y - a.y)) <= eps:
                return False
            cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x)
            if cross < -eps * _extent(v):
                return False
        return True

    def translated(self, dx: float, dy: float) -> "ConvexPolygon":
        return ConvexPolygon(tuple(Point(p.x + dx, p.y + dy) for p in self.vertices), self.tags)

    def scaled(self, lam: float) -> "ConvexPolygon":
        return ConvexPolygon(tuple(Point(p.x * lam, p.y * lam) for p in self.vertices), self.tags)


EMPTY = ConvexPolygon()


def _extent(verts: Sequence[Point]) -> float:
    xs = [p.x for p in verts]
    ys = [p.y for p in verts]
    return max(max(xs) - min(xs), max(ys) - min(ys))


def _eps(verts: Sequence[Point]) -> float:
    # relative to the polygon's own size; the magnitude floor guards far-from-origin slivers
    mag = max(max(abs(p.x), abs(p.y)) for p in verts)
    return EPS * max(_extent(verts), 1e-6 * mag, 1e-300)


def _signed_area(verts: Sequence[Sequence[float]]) -> float:
    n = len(verts)
    s = 0.0
    for k in range(n):
        x0, y0 = verts[k]
        x1, y1 = verts[(k + 1) % n]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def point_diameter(verts: Sequence[Sequence[float]]) -> float:
    """Largest pairwise distance within a point list."""
    best = 0.0
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            best = max(best, math.hypot(verts[i][0] - verts[j][0], verts[i][1] - verts[j][1]))
    return best


def separating_line(d1: Disc, d2: Disc) -> HalfPlane:
    """Half-plane containing ``d1`` bounded by the line splitting the center segment in ratio r1:r2.

    The line is perpendicular to the center segment at distance
    ``r1 * d / (r1 + r2)`` from ``d1.center``.
    """
    dx = d2.center.x - d1.center.x
    dy = d2.center.y - d1.center.y
    d = math.hypot(dx, dy)
    if d == 0.0:
        raise GeometryError("degenerate disc pair")
    nx, ny = dx / d, dy / d
    t = d1.radius * d / (d1.radius + d2.radius)
    return HalfPlane(nx, ny, nx * d1.center.x + ny * d1.center.y + t)


def polygon_area(poly: ConvexPolygon) -> float:
    if len(poly.vertices) < 3:
        return 0.0
    return abs(_signed_area(poly.vertices))


def clip(poly: ConvexPolygon, h: HalfPlane, tag: int = WINDOW) -> ConvexPolygon:
    """Intersect ``poly`` with the half-plane ``h``; new edges along the cut get ``tag``."""
    verts = poly.vertices
    n = len(verts)
    if n == 0:
        return poly
    nx, ny, c = h
    eps = _eps(verts)
    s = [nx * p.x + ny * p.y - c for p in verts]
    if max(s) <= eps:
        return poly
    if min(s) >= -eps:
        return EMPTY
    tags = poly.tags
    out_v: list[Point] = []
    out_t: list[int] = []
    for k in range(n):
        k1 = k + 1 if k + 1 < n else 0
        p, q = verts[k], verts[k1]
        sp, sq = s[k], s[k1]
        if sp <= eps:
            out_v.append(p)
            out_t.append(tags[k])
            if sq > eps:
                u = sp / (sp - sq)
                out_v.append(Point(p.x + u * (q.x - p.x), p.y + u * (q.y - p.y)))
                out_t.append(tag)
        elif sq <= eps:
            u = sp / (sp - sq)
            out_v.append(Point(p.x + u * (q.x - p.x), p.y + u * (q.y - p.y)))
            out_t.append(tags[k])
    return _normalize(out_v, out_t, eps)


def _normalize(verts: list[Point], tags: list[int], eps: float) -> ConvexPolygon:
    kept_v: list[Point] = []
    kept_t: list[int] = []
    for p, t in zip(verts, tags):
        if kept_v and abs(p.x - kept_v[-1].x) <= eps and abs(p.y - kept_v[-1].y) <= eps:
            kept_t[-1] = t
            continue
        kept_v.append(p)
        kept_t.append(t)
    while len(kept_v) > 1 and abs(kept_v[-1].x - kept_v[0].x) <= eps and abs(kept_v[-1].y - kept_v[0].y) <= eps:
        kept_v.pop()
        kept_t.pop()
    if len(kept_v) < 3:
        return EMPTY
    area = _signed_area(kept_v)
    ext = _extent(kept_v)
    if area <= EPS * ext * ext:
        return EMPTY
    return ConvexPolygon(tuple(kept_v), tuple(kept_t))


def clip_all(poly: ConvexPolygon, halfplanes: Iterable[HalfPlane]) -> ConvexPolygon:
    for h in halfplanes:
        poly = clip(poly, h)
        if poly.is_empty:
            break
    return poly


def convex_intersection(p: ConvexPolygon, q: ConvexPolygon) -> ConvexPolygon:
    if p.is_empty or q.is_empty:
        return EMPTY
    out = p
    for h in q.edge_halfplanes():
        out = clip(out, h)
        if out.is_empty:
            break
    return out


def _segment_circle_area(ax: float, ay: float, bx: float, by: float, r: float) -> float:
    """Signed area of (circle of radius r at origin) ∩ triangle(origin, a, b)."""
    r2 = r * r
    dx, dy = bx - ax, by - ay
    qa = dx * dx + dy * dy
    if qa == 0.0:
        return 0.0
    qb = ax * dx + ay * dy
    qc = ax * ax + ay * ay - r2
    cuts = [0.0]
    disc = qb * qb - qa * qc
    if disc > 0.0:
        root = math.sqrt(disc)
        for u in ((-qb - root) / qa, (-qb + root) / qa):
            if 0.0 < u < 1.0:
                cuts.append(u)
    cuts.append(1.0)
    total = 0.0
    for u0, u1 in zip(cuts, cuts[1:]):
        px, py = ax + u0 * dx, ay + u0 * dy
        qx, qy = ax + u1 * dx, ay + u1 * dy
        um = 0.5 * (u0 + u1)
        mx, my = ax + um * dx, ay + um * dy
        cross = px * qy - py * qx
        if mx * mx + my * my <= r2:
            total += 0.5 * cross
        else:
            # arc: signed angle in (-pi, pi]
            total += 0.5 * r2 * math.atan2(cross, px * qx + py * qy)
    return total


def disc_polygon_area(d: Disc, poly: ConvexPolygon) -> float:
    """Exact area of ``d ∩ poly`` by accumulating signed disc/triangle pieces over the edges."""
    if len(poly.vertices) < 3:
        return 0.0
    cx, cy = d.center
    r = d.radius
    total = 0.0
    for a, b in poly.edges():
        total += _segment_circle_area(a.x - cx, a.y - cy, b.x - cx, b.y - cy, r)
    area = abs(total)
    return min(area, d.area, polygon_area(poly))


def disc_disc_area(d1: Disc, d2: Disc) -> float:
    """Area of the lens ``d1 ∩ d2``."""
    r1, r2 = d1.radius, d2.radius
    d = math.hypot(d1.center.x - d2.center.x, d1.center.y - d2.center.y)
    if d >= r1 + r2:
        return 0.0
    if d <= abs(r1 - r2):
        return math.pi * min(r1, r2) ** 2
    a1 = math.acos(max(-1.0, min(1.0, (d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1))))
    a2 = math.acos(max(-1.0, min(1.0, (d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2))))
    tri = 0.5 * math.sqrt(max(0.0, (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2)))
    return r1 * r1 * a1 + r2 * r2 * a2 - tri


# --- windows / domains ---------------------------------------------------------

DISC_POLYGON_SIDES = 256


@dataclass(frozen=True)
class RectWindow:
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        vals = (self.xmin, self.ymin, self.xmax, self.ymax)
        if not all(math.isfinite(v) for v in vals):
            raise GeometryError("window bounds must be finite")
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise GeometryError("window must have positive area")

    kind = "rect"

    @property
    def area(self) -> float:
        return (self.xmax - self.xmin) * (self.ymax - self.ymin)

    @property
    def center(self) -> Point:
        return Point(0.5 * (self.xmin + self.xmax), 0.5 * (self.ymin + self.ymax))

    def polygon(self) -> ConvexPolygon:
        return ConvexPolygon.box(self.xmin, self.ymin, self.xmax, self.ymax)

    def polygon_area(self) -> float:
        return self.area

    def contains(self, x, y):
        return (x >= self.xmin) & (x <= self.xmax) & (y >= self.ymin) & (y <= self.ymax)

    def disc_area(self, d: Disc) -> float:
        cx, cy, r = d.center.x, d.center.y, d.radius
        if cx - r >= self.xmin and cx + r <= self.xmax and cy - r >= self.ymin and cy + r <= self.ymax:
            return d.area
        if cx + r <= self.xmin or cx - r >= self.xmax or cy + r <= self.ymin or cy - r >= self.ymax:
            return 0.0
        return disc_polygon_area(d, self.polygon())

    def scaled_about_center(self, s: float) -> "RectWindow":
        c = self.center
        hw, hh = 0.5 * s * (self.xmax - self.xmin), 0.5 * s * (self.ymax - self.ymin)
        return RectWindow(c.x - hw, c.y - hh, c.x + hw, c.y + hh)

    def to_json(self) -> dict:
        return {"kind": "rect", "xmin": self.xmin, "ymin": self.ymin, "xmax": self.xmax, "ymax": self.ymax}


@dataclass(frozen=True)
class DiscWindow:
    """Disc-shaped window; clipping uses an inscribed regular 256-gon."""

    cx: float
    cy: float
    radius: float

    def __post_init__(self):
        if not (math.isfinite(self.cx) and math.isfinite(self.cy) and math.isfinite(self.radius)):
            raise GeometryError("window parameters must be finite")
        if not self.radius > 0.0:
            raise GeometryError("window must have positive area")

    kind = "disc"

    @property
    def area(self) -> float:
        return math.pi * self.radius ** 2

    @property
    def center(self) -> Point:
        return Point(self.cx, self.cy)

    def polygon(self) -> ConvexPolygon:
        return ConvexPolygon.regular(self.cx, self.cy, self.radius, DISC_POLYGON_SIDES)

    def polygon_area(self) -> float:
        n = DISC_POLYGON_SIDES
        return 0.5 * n * self.radius ** 2 * math.sin(2.0 * math.pi / n)

    def contains(self, x, y):
        return (x - self.cx) ** 2 + (y - self.cy) ** 2 <= self.radius ** 2

    def disc_area(self, d: Disc) -> float:
        return disc_disc_area(d, Disc(Point(self.cx, self.cy), self.radius))

    def scaled_about_center(self, s: float) -> "DiscWindow":
        return DiscWindow(self.cx, self.cy, self.radius * s)

    def to_json(self) -> dict:
        return {"kind": "disc", "cx": self.cx, "cy": self.cy, "r": self.radius}


Window = RectWindow | DiscWindow


def window_from_json(obj: dict) -> Window:
    kind = obj.get("kind")
    if kind == "rect":
        return RectWindow(float(obj["xmin"]), float(obj["ymin"]), float(obj["xmax"]), float(obj["ymax"]))
    if kind == "disc":
        return DiscWindow(float(obj["cx"]), float(obj["cy"]), float(obj["r"]))
    raise GeometryError(f"unknown window kind {kind!r}")


def parse_window(text: str) -> Window:
    """Parse ``rect:xmin,ymin,xmax,ymax`` or ``disc:cx,cy,r``."""
    kind, _, rest = text.partition(":")
    try:
        vals = [float(v) for v in rest.split(",")]
    except ValueError as exc:
        raise GeometryError(f"bad window spec {text!r}") from exc
    if kind == "rect" and len(vals) == 4:
        return RectWindow(*vals)
    if kind == "disc" and len(vals) == 3:
        return DiscWindow(*vals)
    raise GeometryError(f"bad window spec {text!r}; expected rect:xmin,ymin,xmax,ymax or disc:cx,cy,r")
