import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import inside_polygon, mc_area, random_convex
from packcell.geometry import (
    EMPTY,
    ConvexPolygon,
    Disc,
    DiscWindow,
    GeometryError,
    HalfPlane,
    Point,
    RectWindow,
    clip,
    clip_all,
    convex_intersection,
    disc_disc_area,
    disc_polygon_area,
    parse_window,
    polygon_area,
    separating_line,
    window_from_json,
)

UNIT_SQUARE = ConvexPolygon.box(0.0, 0.0, 1.0, 1.0)


def line_x(h: HalfPlane) -> float:
    return h.c / h.nx


# --- separating line -----------------------------------------------------------

def test_separating_line_equal_radii_is_bisector():
    h = separating_line(Disc(Point(0, 0), 1), Disc(Point(2, 0), 1))
    assert (h.nx, h.ny) == (1.0, 0.0)
    assert h.c == pytest.approx(1.0, abs=1e-15)


def test_separating_line_unequal_radii():
    h = separating_line(Disc(Point(0, 0), 1), Disc(Point(8, 0), 3))
    assert line_x(h) == pytest.approx(2.0, abs=1e-15)


def test_separating_line_vertical_ratio():
    d1, d2 = Disc(Point(0, 0), 2), Disc(Point(0, 6), 1)
    h = separating_line(d1, d2)
    assert (h.nx, h.ny) == (0.0, 1.0)
    assert h.c == pytest.approx(4.0, abs=1e-15)
    # |OB| / |O'B| = r / r'
    assert (h.c - 0.0) / (6.0 - h.c) == pytest.approx(2.0)
    assert h.contains(d1.center) and not h.contains(d2.center)


def test_separating_line_coincident_centers():
    with pytest.raises(GeometryError, match="degenerate disc pair"):
        separating_line(Disc(Point(1, 1), 1), Disc(Point(1, 1), 2))


coord = st.floats(-50, 50, allow_nan=False)
radius = st.floats(0.01, 10, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(coord, coord, radius, coord, coord, radius)
def test_separating_line_antisymmetric(x1, y1, r1, x2, y2, r2):
    if math.hypot(x2 - x1, y2 - y1) < 1e-3:
        return
    a, b = Disc(Point(x1, y1), r1), Disc(Point(x2, y2), r2)
    h, g = separating_line(a, b), separating_line(b, a)
    scale = max(1.0, abs(h.c))
    assert h.nx == pytest.approx(-g.nx, abs=1e-12)
    assert h.ny == pytest.approx(-g.ny, abs=1e-12)
    assert h.c == pytest.approx(-g.c, abs=1e-12 * scale)
    assert math.hypot(h.nx, h.ny) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(coord, coord, radius, st.floats(0, 2 * math.pi), radius, st.floats(0, 3))
def test_separating_line_separates_valid_pairs(x, y, r1, theta, r2, extra):
    d = max(2 * r1, 2 * r2) + extra
    a = Disc(Point(x, y), r1)
    b = Disc(Point(x + d * math.cos(theta), y + d * math.sin(theta)), r2)
    h = separating_line(a, b)
    tol = 1e-12 * max(1.0, abs(x), abs(y), d)
    assert -h.signed_distance(a.center) >= r1 - tol
    assert h.signed_distance(b.center) >= r2 - tol


# --- clipping ------------------------------------------------------------------

def test_clip_axis_cut():
    out = clip(UNIT_SQUARE, HalfPlane(1.0, 0.0, 0.5))
    assert polygon_area(out) == pytest.approx(0.5, abs=1e-15)
    assert max(p.x for p in out.vertices) == pytest.approx(0.5)


def test_clip_identity_and_disjoint():
    assert clip(UNIT_SQUARE, HalfPlane(1.0, 0.0, 2.0)) is UNIT_SQUARE
    assert clip(UNIT_SQUARE, HalfPlane(1.0, 0.0, -1.0)).is_empty
    assert clip(EMPTY, HalfPlane(1.0, 0.0, 0.0)).is_empty


def test_clip_sliver_normalized_to_empty():
    out = clip(UNIT_SQUARE, HalfPlane.from_normal(-1.0, 0.0, -(1.0 - 1e-13)))
    assert out.is_empty


def test_clip_tags_new_edge():
    out = clip(UNIT_SQUARE, HalfPlane(1.0, 0.0, 0.5), tag=7)
    assert out.tags.count(7) == 1


halfplane = st.builds(
    lambda a, c: HalfPlane(math.cos(a), math.sin(a), c),
    st.floats(0, 2 * math.pi), st.floats(-0.2, 1.2),
)


@settings(max_examples=300, deadline=None)
@given(halfplane)
def test_clip_idempotent(h):
    once = clip(UNIT_SQUARE, h)
    twice = clip(once, h)
    assert len(once.vertices) == len(twice.vertices)
    for p, q in zip(once.vertices, twice.vertices):
        assert p.x == pytest.approx(q.x, abs=1e-9) and p.y == pytest.approx(q.y, abs=1e-9)
    assert once.is_convex()


@settings(max_examples=150, deadline=None)
@given(st.lists(halfplane, min_size=2, max_size=6), st.randoms(use_true_random=False))
def test_clip_order_independent(hs, rnd):
    a = polygon_area(clip_all(UNIT_SQUARE, hs))
    shuffled = list(hs)
    rnd.shuffle(shuffled)
    assert polygon_area(clip_all(UNIT_SQUARE, shuffled)) == pytest.approx(a, abs=1e-9)


@settings(max_examples=150, deadline=None)
@given(halfplane)
def test_clip_result_inside_input(h):
    out = clip(UNIT_SQUARE, h)
    assert polygon_area(out) <= 1.0 + 1e-12
    for p in out.vertices:
        assert UNIT_SQUARE.contains(p, tol=1e-12)
        assert h.signed_distance(p) <= 1e-9


# --- areas and intersections ---------------------------------------------------

def test_polygon_area_examples():
    assert polygon_area(UNIT_SQUARE) == 1.0
    assert polygon_area(ConvexPolygon.from_points([(0, 0), (1, 0), (0, 1)])) == 0.5
    hexagon = ConvexPolygon.regular(0, 0, 2 / math.sqrt(3), 6)
    assert polygon_area(hexagon) == pytest.approx(2 * math.sqrt(3), abs=1e-12)
    assert polygon_area(EMPTY) == 0.0


def test_from_points_orients_ccw():
    cw = ConvexPolygon.from_points([(0, 0), (0, 1), (1, 1), (1, 0)])
    assert cw.is_convex()
    assert polygon_area(cw) == 1.0


def test_convex_intersection_rectangles():
    p = ConvexPolygon.box(0, 0, 2, 2)
    q = ConvexPolygon.box(1, 1, 3, 3)
    assert polygon_area(convex_intersection(p, q)) == pytest.approx(1.0, abs=1e-15)
    assert polygon_area(convex_intersection(p, p)) == pytest.approx(4.0, abs=1e-12)


def test_convex_intersection_commutes(rng):
    for _ in range(30):
        p, q = random_convex(rng), random_convex(rng)
        a, b = convex_intersection(p, q), convex_intersection(q, p)
        assert polygon_area(a) == pytest.approx(polygon_area(b), abs=1e-12)
        assert polygon_area(a) <= min(polygon_area(p), polygon_area(q)) + 1e-12


def test_disc_polygon_area_examples():
    unit = Disc(Point(0, 0), 1.0)
    assert disc_polygon_area(unit, ConvexPolygon.box(-5, -5, 5, 5)) == pytest.approx(math.pi, abs=1e-12)
    assert disc_polygon_area(unit, UNIT_SQUARE) == pytest.approx(math.pi / 4, abs=1e-12)
    assert disc_polygon_area(unit, ConvexPolygon.box(3, 3, 4, 4)) == 0.0
    assert disc_polygon_area(unit, EMPTY) == 0.0
    tiny = ConvexPolygon.box(-0.1, -0.1, 0.1, 0.1)
    assert disc_polygon_area(unit, tiny) == pytest.approx(0.04, abs=1e-15)


def test_disc_polygon_area_half_plane_cut():
    # chord at distance h from the center: r^2 acos(h/r) - h sqrt(r^2 - h^2)
    d = Disc(Point(0, 0), 2.0)
    for h in (0.0, 0.5, 1.3, 1.99):
        cap = 4 * math.acos(h / 2) - h * math.sqrt(4 - h * h)
        poly = ConvexPolygon.box(h, -5, 5, 5)
        assert disc_polygon_area(d, poly) == pytest.approx(cap, abs=1e-12)


def test_disc_area_sums_over_a_partition(rng):
    d = Disc(Point(0.3, -0.2), 1.7)
    box = ConvexPolygon.box(-3, -3, 3, 3)
    for _ in range(20):
        h = HalfPlane.from_normal(*rng.normal(size=2), rng.uniform(-1, 1))
        left, right = clip(box, h), clip(box, h.flipped())
        total = disc_polygon_area(d, left) + disc_polygon_area(d, right)
        assert total == pytest.approx(d.area, abs=1e-9)


def test_disc_polygon_area_near_tangent():
    d = Disc(Point(0, 0), 1.0)
    for gap in (1e-6, 1e-9, 0.0, -1e-9):
        poly = ConvexPolygon.box(-1 - gap, -1 - gap, 1 + gap, 1 + gap)
        assert disc_polygon_area(d, poly) == pytest.approx(math.pi, abs=1e-7)


def test_disc_disc_area():
    a = Disc(Point(0, 0), 1.0)
    assert disc_disc_area(a, Disc(Point(5, 0), 1.0)) == 0.0
    assert disc_disc_area(a, Disc(Point(0.1, 0), 3.0)) == pytest.approx(math.pi)
    lens = 2 * math.acos(0.5) - 0.5 * math.sqrt(3)
    assert disc_disc_area(a, Disc(Point(1, 0), 1.0)) == pytest.approx(lens, abs=1e-12)


def test_monte_carlo_spot_checks(rng):
    for _ in range(5):
        poly = random_convex(rng)
        d = Disc(Point(*rng.uniform(0, 1, 2)), rng.uniform(0.1, 0.6))
        est = mc_area(lambda xy: inside_polygon(poly, xy)
                      & (np.hypot(xy[:, 0] - d.center.x, xy[:, 1] - d.center.y) <= d.radius),
                      poly.bbox(), 200_000, rng)
        assert disc_polygon_area(d, poly) == pytest.approx(est, abs=1e-2)


# --- windows -------------------------------------------------------------------

def test_windows_parse_and_roundtrip():
    r = parse_window("rect:0,0,2,3")
    assert r == RectWindow(0, 0, 2, 3) and r.area == 6
    assert window_from_json(r.to_json()) == r
    d = parse_window("disc:1,1,2")
    assert d == DiscWindow(1, 1, 2)
    assert window_from_json(d.to_json()) == d
    with pytest.raises(GeometryError):
        parse_window("rect:0,0,1")
    with pytest.raises(GeometryError):
        RectWindow(0, 0, 0, 1)


def test_disc_window_polygon_area_close_to_disc():
    w = DiscWindow(0, 0, 10)
    assert abs(w.polygon_area() - w.area) / w.area < 4e-4
    assert polygon_area(w.polygon()) == pytest.approx(w.polygon_area(), rel=1e-12)


def test_window_disc_area_matches_polygon_clip():
    w = RectWindow(0, 0, 4, 4)
    for d in (Disc(Point(2, 2), 1), Disc(Point(0, 0), 1), Disc(Point(3.5, 2), 1), Disc(Point(10, 10), 1)):
        assert w.disc_area(d) == pytest.approx(disc_polygon_area(d, w.polygon()), abs=1e-12)


def test_invalid_inputs():
    with pytest.raises(GeometryError):
        Disc(Point(0, 0), 0.0)
    with pytest.raises(GeometryError):
        Disc(Point(math.nan, 0), 1.0)
    with pytest.raises(GeometryError):
        HalfPlane.from_normal(0.0, 0.0, 1.0)
