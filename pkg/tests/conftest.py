import numpy as np
import pytest
from scipy.spatial import ConvexHull

from packcell.geometry import ConvexPolygon

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_convex(rng: np.random.Generator, k: int = 8, lo: float = 0.0, hi: float = 1.0) -> ConvexPolygon:
    pts = rng.uniform(lo, hi, (k, 2))
    hull = ConvexHull(pts)
    return ConvexPolygon.from_points(pts[hull.vertices])


def inside_polygon(poly: ConvexPolygon, xy: np.ndarray) -> np.ndarray:
    mask = np.ones(len(xy), dtype=bool)
    for h in poly.edge_halfplanes():
        mask &= h.nx * xy[:, 0] + h.ny * xy[:, 1] <= h.c
    return mask


def mc_area(mask_fn, box, n: int, rng: np.random.Generator) -> float:
    """Rejection-sampling area of {p in box : mask_fn(p)}."""
    xmin, ymin, xmax, ymax = box
    xy = np.column_stack([rng.uniform(xmin, xmax, n), rng.uniform(ymin, ymax, n)])
    return float(mask_fn(xy).mean()) * (xmax - xmin) * (ymax - ymin)


def brute_nn(points: np.ndarray, chunk: int = 512) -> np.ndarray:
    """O(N^2) nearest-neighbour distances, evaluated row block by row block."""
    out = np.empty(len(points))
    for s in range(0, len(points), chunk):
        block = points[s:s + chunk]
        diff = block[:, None, :] - points[None, :, :]
        d = np.sqrt((diff ** 2).sum(-1))
        d[np.arange(len(block)), np.arange(s, s + len(block))] = np.inf
        out[s:s + chunk] = d.min(axis=1)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
