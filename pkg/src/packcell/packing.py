"""Disc packings under the 2x-inflation condition, their cells and coverage ratios."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np
from scipy.spatial import cKDTree

from .geometry import (
    EPS,
    WINDOW,
    ConvexPolygon,
    Disc,
    HalfPlane,
    Point,
    Window,
    clip,
    disc_polygon_area,
    polygon_area,
)
from .neighbors import nearest_distances

HEX_RATIO = math.pi / (2.0 * math.sqrt(3.0))
HEX_CELL_FACTOR = 2.0 * math.sqrt(3.0)

T = TypeVar("T")


class PackingError(ValueError):
    pass


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("PACKCELL_THREADS", "1")))
    except ValueError:
        return 1


def map_indices(fn: Callable[[int], T], indices: Iterable[int]) -> list[T]:
    """Apply ``fn`` over indices, in input order, using up to PACKCELL_THREADS workers."""
    idx = list(indices)
    workers = _threads()
    if workers == 1 or len(idx) < 2:
        return [fn(i) for i in idx]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, idx))


@dataclass(frozen=True, eq=False)
class Packing:
    centers: np.ndarray
    radii: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        c = np.array(self.centers, dtype=float).reshape(-1, 2)
        r = np.array(self.radii, dtype=float).reshape(-1)
        if len(c) != len(r):
            raise PackingError("centers and radii differ in length")
        if len(c) == 0:
            raise PackingError("a packing needs at least one disc")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(r))):
            raise PackingError("centers and radii must be finite")
        if np.any(r <= 0.0):
            raise PackingError("radii must be positive")
        c.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "centers", c)
        object.__setattr__(self, "radii", r)

    @classmethod
    def from_discs(cls, discs: Iterable[Disc]) -> "Packing":
        discs = list(discs)
        return cls(np.array([[d.center.x, d.center.y] for d in discs]).reshape(-1, 2),
                   np.array([d.radius for d in discs]))

    def __len__(self) -> int:
        return len(self.radii)

    def disc(self, i: int) -> Disc:
        return Disc(Point(float(self.centers[i, 0]), float(self.centers[i, 1])), float(self.radii[i]))

    @property
    def discs(self) -> list[Disc]:
        return [self.disc(i) for i in range(len(self))]

    @property
    def tree(self) -> cKDTree:
        if "tree" not in self._cache:
            self._cache["tree"] = cKDTree(self.centers)
        return self._cache["tree"]

    def scaled(self, lam: float) -> "Packing":
        return Packing(self.centers * lam, self.radii * lam)


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: list[tuple[int, int, float, float]]
    factor: float = 2.0


def _check_distinct(centers: np.ndarray) -> None:
    if len(centers) < 2:
        return
    d, _ = cKDTree(centers).query(centers, k=2)
    if np.any(d[:, 1] == 0.0):
        raise PackingError("coincident centers")


def inflation_ok(d: float, r: float, factor: float = 2.0) -> bool:
    """Whether a center at distance ``d`` stays outside the ``factor``-inflation of a radius-``r`` disc."""
    return d >= factor * r * (1.0 - EPS)


def validate(p: Packing, factor: float = 2.0) -> ValidationReport:
    """Check |O_i O_j| >= factor * r_i for every ordered pair (tangency allowed).

    Each violation is reported as ``(i, j, |O_i O_j|, factor * r_i)``.
    """
    key = ("valid", factor)
    if key in p._cache:
        return p._cache[key]
    _check_distinct(p.centers)
    reach = factor * p.radii
    hits = p.tree.query_ball_point(p.centers, reach)
    violations = []
    for i, js in enumerate(hits):
        for j in sorted(js):
            if j == i:
                continue
            d = math.hypot(p.centers[j, 0] - p.centers[i, 0], p.centers[j, 1] - p.centers[i, 1])
            if not inflation_ok(d, float(p.radii[i]), factor):
                violations.append((i, j, d, float(reach[i])))
    report = ValidationReport(not violations, violations, factor)
    p._cache[key] = report
    return report


def criticalize(centers: Sequence[Sequence[float]] | np.ndarray) -> Packing:
    """Packing with every radius equal to half the distance to the nearest other center."""
    c = np.asarray(centers, dtype=float).reshape(-1, 2)
    if len(c) < 2:
        raise PackingError("criticalization undefined for fewer than two centers")
    _check_distinct(c)
    return Packing(c, 0.5 * nearest_distances(c))


def is_critical(p: Packing, rtol: float = 1e-12) -> bool:
    if len(p) < 2:
        return False
    half = 0.5 * nearest_distances(p.centers)
    return bool(np.all(np.abs(p.radii - half) <= rtol * half))


@dataclass(frozen=True)
class CellResult:
    index: int
    region: ConvexPolygon
    artificially_bounded: bool

    @property
    def area(self) -> float:
        return polygon_area(self.region)

    def active_neighbors(self) -> list[int]:
        return sorted({t for t in self.region.tags if t != WINDOW})


def carve(center: np.ndarray, ri: float, centers: np.ndarray, radii: np.ndarray | None,
          tree: cKDTree, region: ConvexPolygon, self_index: int,
          radius_bound: Callable[[float], float] | None = None) -> ConvexPolygon:
    """Clip ``region`` by the separating half-planes of ``self_index`` against all other discs.

    ``radii=None`` means bisectors (Voronoi). Neighbours are visited in growing
    nearest-first batches; a batch is the last one once ``radius_bound`` shows
    that no unvisited disc can place its line closer than the region's reach.
    """
    n = len(centers)
    if n == 1:
        return region
    ox, oy = float(center[0]), float(center[1])
    reach = region.max_distance((ox, oy))
    seen = np.zeros(n, dtype=bool)
    seen[self_index] = True
    k = min(n, 16)
    while True:
        dists, idx = tree.query(center, k=k)
        dists = np.atleast_1d(dists)
        idx = np.atleast_1d(idx)
        fresh = ~seen[idx]
        js = idx[fresh]
        ds = dists[fresh]
        seen[js] = True
        if len(js):
            if radii is None:
                ts = 0.5 * ds
            else:
                ts = ri * ds / (ri + radii[js])
            order = np.argsort(ts, kind="stable")
            for m in order:
                t = float(ts[m])
                if t >= reach:
                    break
                j = int(js[m])
                d = float(ds[m])
                nx = (float(centers[j, 0]) - ox) / d
                ny = (float(centers[j, 1]) - oy) / d
                region = clip(region, HalfPlane(nx, ny, nx * ox + ny * oy + t), tag=j)
                if region.is_empty:
                    return region
                reach = region.max_distance((ox, oy))
        if k >= n:
            return region
        dk = float(dists[-1])
        if radii is None:
            lower = 0.5 * dk
        else:
            rb = radius_bound(dk) if radius_bound is not None else float(radii.max())
            lower = ri * dk / (ri + rb)
        if lower >= reach:
            return region
        k = min(2 * k, n)


def cell(p: Packing, i: int, w: Window, factor: float = 2.0) -> CellResult:
    """The cell of disc ``i`` intersected with the window ``w``."""
    if not 0 <= i < len(p):
        raise IndexError(f"disc index {i} out of range")
    report = validate(p, factor)
    if not report.valid:
        raise PackingError(f"invalid packing: {len(report.violations)} inflation violations")
    rmax = float(p.radii.max())

    def radius_bound(d: float) -> float:
        # validity: d_ij >= factor * r_j (up to the relative tolerance)
        return min(rmax, d / (factor * (1.0 - EPS)))

    region = carve(p.centers[i], float(p.radii[i]), p.centers, p.radii, p.tree, w.polygon(), i, radius_bound)
    bounded = any(t == WINDOW for t in region.tags)
    return CellResult(i, region, bounded)


def cells(p: Packing, w: Window, factor: float = 2.0) -> list[CellResult]:
    return map_indices(lambda i: cell(p, i, w, factor), range(len(p)))


def coverage_ratio(p: Packing, i: int, w: Window, cell_result: CellResult | None = None) -> float:
    res = cell_result if cell_result is not None else cell(p, i, w)
    area = polygon_area(res.region)
    if area <= 0.0:
        raise PackingError("empty cell")
    return disc_polygon_area(p.disc(i), res.region) / area


def sector_triangle_ratio(dist: float, x: float) -> float:
    """Coverage of the unit disc in the right triangle with leg ``dist`` at apex angle ``x``.

    Equals ``x / (dist**2 * tan x)``; the unit-disc sector must stay inside the
    triangle, hence ``dist >= 1``.
    """
    if not 0.0 < x < 0.5 * math.pi:
        raise ValueError("apex angle must lie in (0, pi/2)")
    if dist < 1.0:
        raise ValueError("sector leaves triangle")
    return x / (dist * dist * math.tan(x))


def density(p: Packing, w: Window) -> float:
    """Fraction of the window covered by the packing's discs."""
    if not w.area > 0.0:
        raise PackingError("empty window")
    return math.fsum(w.disc_area(p.disc(i)) for i in range(len(p))) / w.area


@dataclass(frozen=True)
class AreaBoundEntry:
    index: int
    area: float
    bound: float
    margin: float


def cell_area_lower_bound_check(p: Packing, w: Window,
                                results: Sequence[CellResult] | None = None) -> list[AreaBoundEntry]:
    """Compare every interior cell's area with 2*sqrt(3)*r_i**2 (critical packings only)."""
    if not is_critical(p):
        raise PackingError("cell-area bound applies to critical packings")
    results = results if results is not None else cells(p, w)
    out = []
    for res in results:
        if res.artificially_bounded:
            continue
        r = float(p.radii[res.index])
        bound = HEX_CELL_FACTOR * r * r
        area = polygon_area(res.region)
        out.append(AreaBoundEntry(res.index, area, bound, area - bound))
    return out


# --- instance generators -------------------------------------------------------

def hexagonal_lattice_points(spacing: float, w: Window, origin: Sequence[float] = (0.0, 0.0)) -> np.ndarray:
    """Triangular-lattice points (nearest-neighbour distance ``spacing``) lying in ``w``."""
    poly = w.polygon()
    xmin, ymin, xmax, ymax = poly.bbox()
    if w.kind == "disc":
        xmin, ymin = w.cx - w.radius, w.cy - w.radius
        xmax, ymax = w.cx + w.radius, w.cy + w.radius
    ox, oy = origin
    row_h = spacing * math.sqrt(3.0) / 2.0
    j0 = math.floor((ymin - oy) / row_h) - 1
    j1 = math.ceil((ymax - oy) / row_h) + 1
    pts = []
    for j in range(j0, j1 + 1):
        shift = 0.5 * spacing * (j % 2)
        y = oy + j * row_h
        i0 = math.floor((xmin - ox - shift) / spacing) - 1
        i1 = math.ceil((xmax - ox - shift) / spacing) + 1
        xs = ox + shift + spacing * np.arange(i0, i1 + 1)
        pts.append(np.column_stack([xs, np.full(len(xs), y)]))
    pts = np.concatenate(pts)
    tol = 1e-12 * max(1.0, abs(xmax), abs(ymax), abs(xmin), abs(ymin))
    if w.kind == "rect":
        keep = ((pts[:, 0] >= w.xmin - tol) & (pts[:, 0] <= w.xmax + tol)
                & (pts[:, 1] >= w.ymin - tol) & (pts[:, 1] <= w.ymax + tol))
    else:
        keep = np.hypot(pts[:, 0] - w.cx, pts[:, 1] - w.cy) <= w.radius + tol
    return pts[keep]


def hexagonal_packing(spacing: float, w: Window, origin: Sequence[float] = (0.0, 0.0)) -> Packing:
    pts = hexagonal_lattice_points(spacing, w, origin)
    return Packing(pts, np.full(len(pts), 0.5 * spacing))


def _uniform_in(w: Window, rng: np.random.Generator, size: int) -> np.ndarray:
    if w.kind == "rect":
        return np.column_stack([rng.uniform(w.xmin, w.xmax, size), rng.uniform(w.ymin, w.ymax, size)])
    rad = w.radius * np.sqrt(rng.uniform(0.0, 1.0, size))
    ang = rng.uniform(0.0, 2.0 * math.pi, size)
    return np.column_stack([w.cx + rad * np.cos(ang), w.cy + rad * np.sin(ang)])


def random_critical_packing(n: int, w: Window, rng: np.random.Generator,
                            separation: float | None = None) -> Packing:
    """Greedy thinning of uniform candidates to a minimum separation, then criticalization.

    The separation is drawn per instance unless given; if the window cannot hold
    ``n`` centers at that separation, it is shrunk until it can.
    """
    if n < 2:
        raise PackingError("need at least two discs")
    scale = math.sqrt(w.area / n)
    sep = separation if separation is not None else rng.uniform(0.05, 0.8) * scale
    accepted = np.empty((0, 2))
    while len(accepted) < n:
        misses = 0
        while len(accepted) < n and misses < 50 * n:
            for c in _uniform_in(w, rng, n):
                if len(accepted) == 0 or np.min(np.hypot(*(accepted - c).T)) >= sep:
                    accepted = np.vstack([accepted, c])
                    if len(accepted) == n:
                        break
                else:
                    misses += 1
        sep *= 0.8
    return criticalize(accepted)


def jittered_hexagonal_packing(spacing: float, w: Window, jitter: float, rng: np.random.Generator) -> Packing:
    """Hexagonal lattice with every point displaced by up to ``jitter * spacing``, then criticalized."""
    pts = hexagonal_lattice_points(spacing, w)
    rad = jitter * spacing * np.sqrt(rng.uniform(0.0, 1.0, len(pts)))
    ang = rng.uniform(0.0, 2.0 * math.pi, len(pts))
    pts = pts + np.column_stack([rad * np.cos(ang), rad * np.sin(ang)])
    return criticalize(pts[w.contains(pts[:, 0], pts[:, 1])])
