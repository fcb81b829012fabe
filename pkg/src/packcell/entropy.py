"""Discrete approximations of the entropy E(mu) = ∫ rho ln rho.

Two estimators are provided: the nearest-neighbour form built from half
distances r_i(X), and the entropy of the density induced by the mixed
partition W. Exact entropies of piecewise-constant densities serve as the
reference, and the samplers produce the converging sequences used in the
convergence tables.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import RectWindow
from .neighbors import nearest_distances
from .partition import partition_W
from .pointset import EmpiricalPointSet, PointSetError
from .seeding import make_rng

SQRT3 = math.sqrt(3.0)


class DensityError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PiecewiseConstantDensity:
    """Density constant on each cell of a regular grid over a rectangle.

    ``values[row, col]``: rows run along y, columns along x.
    """

    domain: RectWindow
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim == 1:
            v = v.reshape(1, -1)
        if v.ndim != 2 or v.size == 0:
            raise DensityError("density values must form a non-empty 2-D grid")
        if not np.all(np.isfinite(v)) or np.any(v < 0.0):
            raise DensityError("density values must be finite and non-negative")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def uniform(cls, domain: RectWindow) -> "PiecewiseConstantDensity":
        return cls(domain, np.full((1, 1), 1.0 / domain.area))

    @classmethod
    def from_weights(cls, domain: RectWindow, weights) -> "PiecewiseConstantDensity":
        """Scale non-negative ``weights`` into a probability density on the grid."""
        w = np.array(weights, dtype=float)
        if w.ndim == 1:
            w = w.reshape(1, -1)
        cell = domain.area / w.size
        mass = w.sum() * cell
        if not mass > 0.0:
            raise DensityError("weights must have positive mass")
        return cls(domain, w / mass)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def cell_area(self) -> float:
        return self.domain.area / self.values.size

    @property
    def mass(self) -> float:
        return float(self.values.sum() * self.cell_area)

    def cell_bounds(self, row: int, col: int) -> tuple[float, float, float, float]:
        ny, nx = self.values.shape
        d = self.domain
        w = (d.xmax - d.xmin) / nx
        h = (d.ymax - d.ymin) / ny
        return d.xmin + col * w, d.ymin + row * h, d.xmin + (col + 1) * w, d.ymin + (row + 1) * h

    def regions(self):
        ny, nx = self.values.shape
        for row in range(ny):
            for col in range(nx):
                yield (row, col), float(self.values[row, col]), self.cell_bounds(row, col)


def nn_half_distances(X: EmpiricalPointSet) -> np.ndarray:
    """r_i(X): half the distance from each point to its nearest neighbour."""
    if X.N < 2:
        raise PointSetError("r_i undefined for fewer than two points")
    if "r" not in X._cache:
        X._cache["r"] = 0.5 * nearest_distances(X.points)
    return X._cache["r"]


def entropy_estimate(X: EmpiricalPointSet) -> float:
    """-(2/N) Σ ln r_i(X) - ln(2√3 N)."""
    r = nn_half_distances(X)
    n = X.N
    return -2.0 / n * math.fsum(np.log(r)) - math.log(2.0 * SQRT3 * n)


def exact_entropy(rho: PiecewiseConstantDensity) -> float:
    """∫ rho ln rho with 0 ln 0 = 0."""
    if abs(rho.mass - 1.0) > 1e-6:
        raise DensityError(f"density is not normalized (mass {rho.mass!r})")
    v = rho.values[rho.values > 0.0]
    return math.fsum(v * np.log(v)) * rho.cell_area


def partition_entropy(X: EmpiricalPointSet, omega=None) -> float:
    """Entropy of the density N^-1 Σ 1_{W_i ∩ Ω} / |W_i ∩ Ω| induced by the mixed partition."""
    if X.N < 2:
        raise PointSetError("r_i undefined for fewer than two points")
    areas = partition_W(X, omega).w_areas
    return entropy_from_areas(areas)


def entropy_from_areas(areas) -> float:
    a = np.asarray(areas, dtype=float)
    if np.any(a <= 0.0):
        raise PointSetError("degenerate partition")
    n = len(a)
    return -math.fsum(np.log(a)) / n - math.log(n)


# --- sequences -----------------------------------------------------------------

def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else make_rng(seed)


def sample_iid(rho: PiecewiseConstantDensity, n: int, seed) -> EmpiricalPointSet:
    """``n`` independent draws from ``rho``; coincident draws are redrawn."""
    if n < 2:
        raise PointSetError("need at least two points")
    rng = _rng(seed)
    probs = (rho.values * rho.cell_area).ravel()
    probs = probs / probs.sum()
    ny, nx = rho.values.shape
    d = rho.domain
    cw = (d.xmax - d.xmin) / nx
    ch = (d.ymax - d.ymin) / ny

    def draw(m: int) -> np.ndarray:
        k = rng.choice(probs.size, size=m, p=probs)
        row, col = np.divmod(k, nx)
        u = rng.uniform(0.0, 1.0, (m, 2))
        x = np.minimum(d.xmin + (col + u[:, 0]) * cw, d.xmax)
        y = np.minimum(d.ymin + (row + u[:, 1]) * ch, d.ymax)
        return np.column_stack([x, y])

    pts = draw(n)
    while True:
        _, first = np.unique(pts, axis=0, return_index=True)
        if len(first) == n:
            break
        dup = np.setdiff1d(np.arange(n), first)
        pts[dup] = draw(len(dup))
    return EmpiricalPointSet(pts, d)


@dataclass(frozen=True)
class Recovery:
    """Lattice configuration placed region by region, with per-region spacing."""

    points: EmpiricalPointSet
    spacing: dict = field(default_factory=dict)
    skipped: list = field(default_factory=list)

    @property
    def N(self) -> int:
        return self.points.N


def _lattice_fit(n: float) -> int:
    # floor that tolerates a quotient landing a hair below an integer
    return int(math.floor(n + 1e-9))


def hexagonal_recovery(rho: PiecewiseConstantDensity, n_target: int) -> Recovery:
    """Triangular lattice per constant region with local density ``n_target * rho``.

    Spacing is a = sqrt(2 / (√3 n_target rho_k)); each region holds the largest
    whole block of lattice rows and columns that fits, centred in the region.
    """
    if n_target < 2:
        raise PointSetError("need at least two points")
    pts, spacing, skipped = [], {}, []
    for key, val, (x0, y0, x1, y1) in rho.regions():
        if val <= 0.0:
            continue
        a = math.sqrt(2.0 / (SQRT3 * n_target * val))
        h = a * SQRT3 / 2.0
        rows = _lattice_fit((y1 - y0) / h)
        cols = _lattice_fit((x1 - x0) / a)
        if rows < 1 or cols < 1:
            skipped.append(key)
            continue
        spacing[key] = a
        mx = 0.5 * ((x1 - x0) - cols * a)
        my = 0.5 * ((y1 - y0) - rows * h)
        r = np.arange(rows)
        c = np.arange(cols)
        rr, cc = np.meshgrid(r, c, indexing="ij")
        xs = x0 + mx + (cc + 0.25 + 0.5 * (rr % 2)) * a
        ys = y0 + my + (rr + 0.5) * h
        pts.append(np.column_stack([xs.ravel(), ys.ravel()]))
    if not pts:
        raise PointSetError("no region can hold a lattice point at this resolution")
    return Recovery(EmpiricalPointSet(np.concatenate(pts), rho.domain), spacing, skipped)


def square_recovery(rho: PiecewiseConstantDensity, n_target: int) -> Recovery:
    """Square lattice per constant region with spacing 1 / sqrt(n_target * rho_k)."""
    if n_target < 2:
        raise PointSetError("need at least two points")
    pts, spacing, skipped = [], {}, []
    for key, val, (x0, y0, x1, y1) in rho.regions():
        if val <= 0.0:
            continue
        a = 1.0 / math.sqrt(n_target * val)
        rows = _lattice_fit((y1 - y0) / a)
        cols = _lattice_fit((x1 - x0) / a)
        if rows < 1 or cols < 1:
            skipped.append(key)
            continue
        spacing[key] = a
        mx = 0.5 * ((x1 - x0) - cols * a)
        my = 0.5 * ((y1 - y0) - rows * a)
        rr, cc = np.meshgrid(np.arange(rows), np.arange(cols), indexing="ij")
        xs = x0 + mx + (cc + 0.5) * a
        ys = y0 + my + (rr + 0.5) * a
        pts.append(np.column_stack([xs.ravel(), ys.ravel()]))
    if not pts:
        raise PointSetError("no region can hold a lattice point at this resolution")
    return Recovery(EmpiricalPointSet(np.concatenate(pts), rho.domain), spacing, skipped)


def square_grid(domain: RectWindow, m: int) -> EmpiricalPointSet:
    """m x m grid of cell centres over a rectangle."""
    xs = domain.xmin + (np.arange(m) + 0.5) * (domain.xmax - domain.xmin) / m
    ys = domain.ymin + (np.arange(m) + 0.5) * (domain.ymax - domain.ymin) / m
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    return EmpiricalPointSet(np.column_stack([gx.ravel(), gy.ravel()]), domain)


# --- convergence tables --------------------------------------------------------

MODES = ("iid", "hexagonal", "square")


@dataclass(frozen=True)
class ConvergenceRow:
    n_target: int
    N: int
    estimator: float
    partition_entropy: float | None
    exact_entropy: float

    @property
    def gap(self) -> float:
        return self.estimator - self.exact_entropy

    @property
    def partition_gap(self) -> float | None:
        if self.partition_entropy is None:
            return None
        return self.partition_entropy - self.exact_entropy


def gamma_experiment(rho: PiecewiseConstantDensity, schedule, mode: str = "hexagonal", seed: int = 0,
                     partition: bool = True) -> list[ConvergenceRow]:
    """One row per schedule entry: both estimators against the exact entropy.

    Row ``k`` of an i.i.d. experiment draws from stream ``(seed, k)``, so a row
    can be reproduced on its own. ``partition=False`` skips the (slower) mixed
    partition estimator.
    """
    sched = [int(n) for n in schedule]
    if any(b <= a for a, b in zip(sched, sched[1:])):
        raise ValueError("schedule must be strictly increasing")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    exact = exact_entropy(rho)
    rows = []
    for k, n in enumerate(sched):
        if mode == "iid":
            X = sample_iid(rho, n, make_rng(seed, k))
        elif mode == "hexagonal":
            X = hexagonal_recovery(rho, n).points
        else:
            X = square_recovery(rho, n).points
        if X.N < 2:
            raise PointSetError("r_i undefined for fewer than two points")
        est = entropy_estimate(X)
        pe = partition_entropy(X) if partition else None
        rows.append(ConvergenceRow(n, X.N, est, pe, exact))
    return rows
