"""Cells of disc packings under the 2x-inflation condition, and entropy estimators built on them."""
from .entropy import (
    PiecewiseConstantDensity,
    entropy_estimate,
    exact_entropy,
    gamma_experiment,
    hexagonal_recovery,
    nn_half_distances,
    partition_entropy,
    sample_iid,
    square_grid,
)
from .geometry import (
    ConvexPolygon,
    Disc,
    DiscWindow,
    HalfPlane,
    Point,
    RectWindow,
    clip,
    convex_intersection,
    disc_polygon_area,
    polygon_area,
    separating_line,
)
from .packing import (
    HEX_RATIO,
    Packing,
    cell,
    cell_area_lower_bound_check,
    coverage_ratio,
    criticalize,
    density,
    validate,
)
from .partition import partition_W, verify_partition_rule, voronoi
from .pointset import EmpiricalPointSet

__version__ = "0.1.0"
