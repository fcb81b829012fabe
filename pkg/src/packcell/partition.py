"""Voronoi cells and the mixed cell/Voronoi partition rule W_i on a compact domain.

W_i = cell_i ∪ (V_i − ∪_j cell_j) is not convex, so it is never built as a
polygon; only its area inside the domain is computed, from convex pieces:
|W_i ∩ Ω| = |cell_i ∩ Ω| + |V_i ∩ Ω| − Σ_j |V_i ∩ cell_j ∩ Ω|.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .geometry import (
    ConvexPolygon,
    Window,
    convex_intersection,
    disc_polygon_area,
    point_diameter,
    polygon_area,
)
from .packing import Packing, carve, cell, criticalize, map_indices
from .pointset import EmpiricalPointSet, PointSetError


@dataclass(frozen=True)
class PartitionRecord:
    index: int
    voronoi_region: ConvexPolygon
    cell_region: ConvexPolygon
    w_area: float
    cell_truncated: bool


@dataclass(frozen=True)
class PartitionResult:
    records: list[PartitionRecord]
    packing: Packing
    omega_area: float

    @property
    def w_areas(self) -> np.ndarray:
        return np.array([r.w_area for r in self.records])

    @property
    def radii(self) -> np.ndarray:
        return self.packing.radii


@dataclass(frozen=True)
class ConditionReport:
    a: bool
    b: bool
    c: bool
    d_diameters: list[float]
    conservation_error: float
    overlap_area: float
    containment_error: float

    @property
    def max_diameter(self) -> float:
        return max(self.d_diameters, default=0.0)


def voronoi(X: EmpiricalPointSet, omega: Window | None = None) -> list[ConvexPolygon]:
    """V_i ∩ Ω for every point, by clipping Ω against perpendicular bisectors."""
    omega = omega if omega is not None else X.domain
    pts = X.points
    base = omega.polygon()
    if len(pts) == 1:
        return [base]
    tree = cKDTree(pts)
    return map_indices(lambda i: carve(pts[i], 1.0, pts, None, tree, base, i), range(len(pts)))


def _bboxes(polys: list[ConvexPolygon]) -> np.ndarray:
    out = np.full((len(polys), 4), np.nan)
    for k, poly in enumerate(polys):
        if not poly.is_empty:
            out[k] = poly.bbox()
    return out


def _overlapping(boxes: np.ndarray, box: tuple[float, float, float, float]) -> np.ndarray:
    xmin, ymin, xmax, ymax = box
    hit = (boxes[:, 0] <= xmax) & (boxes[:, 2] >= xmin) & (boxes[:, 1] <= ymax) & (boxes[:, 3] >= ymin)
    return np.nonzero(hit)[0]


def partition_W(X: EmpiricalPointSet, omega: Window | None = None) -> PartitionResult:
    if X.N < 2:
        raise PointSetError("r_i undefined for a single point")
    omega = omega if omega is not None else X.domain
    pack = criticalize(X.points)
    vor = voronoi(X, omega)
    cell_results = map_indices(lambda i: cell(pack, i, omega), range(X.N))
    cells = [c.region for c in cell_results]
    cell_boxes = _bboxes(cells)
    cell_areas = [polygon_area(c) for c in cells]

    def w_area(i: int) -> float:
        v = vor[i]
        if v.is_empty:
            return cell_areas[i]
        covered = math.fsum(polygon_area(convex_intersection(v, cells[j]))
                            for j in _overlapping(cell_boxes, v.bbox()))
        return cell_areas[i] + polygon_area(v) - covered

    areas = map_indices(w_area, range(X.N))
    records = [PartitionRecord(i, vor[i], cells[i], areas[i], cell_results[i].artificially_bounded)
               for i in range(X.N)]
    return PartitionResult(records, pack, omega.polygon_area())


def verify_partition_rule(result: PartitionResult, X: EmpiricalPointSet,
                          omega: Window | None = None, tol: float = 1e-6) -> ConditionReport:
    """Check conditions (a)-(c) on one instance and report the diameters behind (d).

    (d) is a statement about sequences, so only per-point diameters of
    (V_i ∪ cell_i) ∩ Ω are returned for trend inspection.
    """
    omega = omega if omega is not None else X.domain
    base = omega.polygon()
    pack = result.packing

    containment_error = 0.0
    a_ok = True
    for rec in result.records:
        d = pack.disc(rec.index)
        inside = disc_polygon_area(d, base)
        err = abs(disc_polygon_area(d, rec.cell_region) - inside)
        containment_error = max(containment_error, err)
        if err > 1e-9 or rec.w_area < inside - 1e-9:
            a_ok = False

    total = math.fsum(r.w_area for r in result.records)
    conservation_error = abs(total - result.omega_area)
    vor_total = math.fsum(polygon_area(r.voronoi_region) for r in result.records)
    b_ok = conservation_error <= tol and abs(vor_total - result.omega_area) <= tol

    cells = [r.cell_region for r in result.records]
    boxes = _bboxes(cells)
    overlap = 0.0
    for i, ci in enumerate(cells):
        if ci.is_empty:
            continue
        for j in _overlapping(boxes, ci.bbox()):
            if j > i:
                overlap += polygon_area(convex_intersection(ci, cells[j]))
    c_ok = overlap <= tol and conservation_error <= tol

    diameters = []
    for rec in result.records:
        diameters.append(point_diameter(rec.voronoi_region.vertices + rec.cell_region.vertices))
    return ConditionReport(a_ok, b_ok, c_ok, diameters, conservation_error, overlap, containment_error)
