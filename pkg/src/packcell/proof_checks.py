"""Numeric sweeps over the closed-form inequalities used in the cell-density argument.

Every check returns a report with a machine-readable margin. These are
numerical evidence on finite grids and random samples, not proofs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Disc, Point, separating_line
from .packing import HEX_RATIO, inflation_ok
from .seeding import make_rng

NOTICE = "numeric evidence on a finite sample, not a proof"
OA2_BOUND = 2.0 / math.sqrt(3.0)


def g_value(x, alpha):
    """x (1 + cos(2x - 2 alpha)) / sin 2x, for 0 < x < pi/2 (scalar or array)."""
    x = np.asarray(x, dtype=float)
    s = np.sin(2.0 * x)
    if np.any(s == 0.0):
        raise ValueError("g undefined where sin 2x = 0")
    out = x * (1.0 + np.cos(2.0 * x - 2.0 * np.asarray(alpha, dtype=float))) / s
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class SweepSpec:
    x_range: tuple[float, float] = (0.0, math.pi / 6)
    alpha_range: tuple[float, float] = (math.pi / 6, math.pi / 2)
    nx: int = 400
    nalpha: int = 400
    step: float = 1e-6
    enforce_regime: bool = True

    def __post_init__(self):
        if not (self.x_range[1] > self.x_range[0] and self.alpha_range[1] >= self.alpha_range[0]):
            raise ValueError("sweep ranges must be non-empty")
        if self.nx < 1 or self.nalpha < 1 or not self.step > 0.0:
            raise ValueError("grid sizes and step must be positive")

    def grid(self) -> tuple[np.ndarray, np.ndarray]:
        # x over (lo, hi], alpha over [lo, hi)
        x0, x1 = self.x_range
        a0, a1 = self.alpha_range
        xs = x0 + (x1 - x0) * np.arange(1, self.nx + 1) / self.nx
        if self.nalpha == 1:
            al = np.array([a0])
        else:
            al = a0 + (a1 - a0) * np.arange(self.nalpha) / self.nalpha
        return xs, al


@dataclass(frozen=True)
class MonotoneReport:
    min_slope: float
    argmin: tuple[float, float]
    negative_count: int
    points: int
    tolerance: float = 1e-9
    notice: str = NOTICE

    @property
    def margin(self) -> float:
        return self.min_slope

    @property
    def ok(self) -> bool:
        return self.min_slope >= -self.tolerance


def check_g_monotone(spec: SweepSpec = SweepSpec()) -> MonotoneReport:
    """Central-difference slopes of g in x over the grid; the claim is g' >= 0 when x <= pi/6 <= alpha."""
    xs, al = spec.grid()
    X, A = np.meshgrid(xs, al, indexing="ij")
    if spec.enforce_regime:
        keep = X <= A
        X, A = X[keep], A[keep]
    else:
        X, A = X.ravel(), A.ravel()
    h = spec.step
    slope = (g_value(X + h, A) - g_value(X - h, A)) / (2.0 * h)
    slope = np.atleast_1d(slope)
    k = int(np.argmin(slope))
    return MonotoneReport(float(slope[k]), (float(X[k]), float(A[k])), int(np.sum(slope < -1e-9)), int(slope.size))


@dataclass(frozen=True)
class Claim1Report:
    x: float
    trials: int
    admitted: int
    violations: int
    r_bounds: tuple[float, float]
    d_bounds: tuple[float, float]
    r_seen: tuple[float, float]
    d_seen: tuple[float, float]
    max_line_error: float
    notice: str = NOTICE

    @property
    def feasible(self) -> bool:
        return self.admitted > 0

    @property
    def ok(self) -> bool:
        return self.feasible and self.violations == 0 and self.max_line_error <= 1e-9


def check_claim1(x: float, trials: int = 10_000, seed: int = 0) -> Claim1Report:
    """Random pairs (unit D, D') whose separating line sits at distance 1+x from O.

    r' is drawn log-uniformly from a range twice as wide as the claimed interval
    (endpoints included), O' is placed at |OO'| = (1+x)(1+r') in a random
    direction, and the pair is admitted only if it satisfies the inflation
    condition. Every admitted r' and |OO'| must fall inside the claimed bounds.
    """
    if not 0.0 <= x < 1.0:
        raise ValueError("x must lie in [0, 1)")
    lo = (1.0 - x) / (1.0 + x)
    hi = (1.0 + x) / (1.0 - x)
    d_lo, d_hi = 2.0, 2.0 * hi
    rng = make_rng(seed)
    rs = np.exp(rng.uniform(math.log(0.5 * lo), math.log(2.0 * hi), trials))
    rs[: min(2, trials)] = [lo, hi][: min(2, trials)]
    theta = rng.uniform(0.0, 2.0 * math.pi, trials)
    unit = Disc(Point(0.0, 0.0), 1.0)
    tol = 1e-9
    admitted = violations = 0
    r_seen = [math.inf, -math.inf]
    d_seen = [math.inf, -math.inf]
    line_err = 0.0
    for r, th in zip(rs.tolist(), theta.tolist()):
        dist = (1.0 + x) * (1.0 + r)
        other = Disc(Point(dist * math.cos(th), dist * math.sin(th)), r)
        h = separating_line(unit, other)
        line_err = max(line_err, abs(-h.signed_distance(unit.center) - (1.0 + x)))
        d = math.hypot(other.center.x, other.center.y)
        if not (inflation_ok(d, 1.0) and inflation_ok(d, r)):
            continue
        admitted += 1
        r_seen = [min(r_seen[0], r), max(r_seen[1], r)]
        d_seen = [min(d_seen[0], d), max(d_seen[1], d)]
        if not (lo * (1 - tol) <= r <= hi * (1 + tol) and d_lo * (1 - tol) <= d <= d_hi * (1 + tol)):
            violations += 1
    return Claim1Report(x, trials, admitted, violations, (lo, hi), (d_lo, d_hi),
                        tuple(r_seen), tuple(d_seen), line_err)


def law_of_cosines(adj1: float, adj2: float, opposite: float) -> float:
    return (adj1 ** 2 + adj2 ** 2 - opposite ** 2) / (2.0 * adj1 * adj2)


@dataclass(frozen=True)
class AlphaReport:
    cos_first: float
    cos_second: float
    printed_bounds: tuple[float, float] = (0.856, 0.859)
    cos_pi_6: float = math.cos(math.pi / 6)
    cos_first_unrounded: float = 0.0
    cos_second_unrounded: float = 0.0
    notice: str = NOTICE

    @property
    def margin(self) -> float:
        return self.cos_pi_6 - max(self.cos_first, self.cos_second)

    @property
    def ok(self) -> bool:
        return (self.cos_first <= self.printed_bounds[0] and self.cos_second <= self.printed_bounds[1]
                and self.margin > 0.0)


def check_lemma_alpha_extremes() -> AlphaReport:
    """The two extreme triangles bounding the angle between neighbouring centers.

    Side lengths use the rounded constants 2, 2.74 and 1.46; the unrounded
    variants use 2(1+x)/(1-x) and 2(1-x)/(1+x) at x = 0.155.
    """
    far = 2.0 * (1.0 + 0.155) / (1.0 - 0.155)
    gap = 2.0 * (1.0 - 0.155) / (1.0 + 0.155)
    return AlphaReport(
        cos_first=law_of_cosines(2.74, 2.0, 1.46),
        cos_second=law_of_cosines(2.74, 2.74, 1.46),
        cos_first_unrounded=law_of_cosines(far, 2.0, gap),
        cos_second_unrounded=law_of_cosines(far, far, gap),
    )


def case3_lhs(alpha):
    a = np.asarray(alpha, dtype=float)
    return np.cos(a) ** 2 + np.sin(2 * a) * np.cos(a) + 2 * np.sin(a) * np.cos(2 * a)


def case3_ratio(alpha):
    """Coverage ratio when both neighbours touch each other at distance 2: alpha (1 + 2 sin alpha)^2 / (4 tan alpha)."""
    a = np.asarray(alpha, dtype=float)
    return a * (1 + 2 * np.sin(a)) ** 2 / (4 * np.tan(a))


@dataclass(frozen=True)
class Case3Report:
    min_margin: float
    argmin: float
    points: int
    min_ratio_slope: float
    ratio_at_pi_6: float
    tolerance: float = 1e-12
    notice: str = NOTICE

    @property
    def margin(self) -> float:
        return self.min_margin

    @property
    def ok(self) -> bool:
        return self.min_margin >= -self.tolerance and self.min_ratio_slope >= -1e-9


def check_case3_inequality(n: int = 10_000, step: float = 1e-6) -> Case3Report:
    """cos²a + sin 2a cos a + 2 sin a cos 2a - 1 over a in (0, pi/6], plus the slope of the ratio it controls."""
    al = (math.pi / 6) * np.arange(1, n + 1) / n
    margin = case3_lhs(al) - 1.0
    k = int(np.argmin(margin))
    inner = al[al > step]
    slope = (case3_ratio(inner + step) - case3_ratio(inner - step)) / (2 * step)
    return Case3Report(float(margin[k]), float(al[k]), n, float(slope.min()), float(case3_ratio(math.pi / 6)))


def oa2_ratio(oa2: float, x: float) -> float:
    """x / (|OA2|² sin x cos x): the unit disc's share of the right triangle with hypotenuse |OA2|."""
    return x / (oa2 * oa2 * math.sin(x) * math.cos(x))


@dataclass(frozen=True)
class OA2Report:
    trials: int
    max_oa2: float
    max_ratio_beyond: float
    min_margin: float
    inversion_error: float
    bound: float = OA2_BOUND
    notice: str = NOTICE

    @property
    def ok(self) -> bool:
        return self.min_margin >= -1e-9 and self.inversion_error <= 1e-12


def check_oa2_bound(trials: int = 10_000, seed: int = 0) -> OA2Report:
    """Dense configurations force |OA2| <= 2/sqrt(3); sparse ones stay under the hexagonal ratio.

    Forward: draw x <= pi/6 and a target ratio above pi/(2 sqrt 3), invert the
    sector/triangle ratio for the leg, and measure the hypotenuse. Converse:
    draw |OA2| > 2/sqrt(3) and x <= pi/6 and evaluate the ratio.
    """
    rng = make_rng(seed)
    xs = rng.uniform(1e-6, math.pi / 6, trials)
    cap = xs / np.tan(xs)
    fs = HEX_RATIO + rng.uniform(0.0, 1.0, trials) * (cap - HEX_RATIO)
    legs = np.sqrt(xs / (fs * np.tan(xs)))
    oa2 = legs / np.cos(xs)
    inversion_error = float(np.max(np.abs(xs / (legs ** 2 * np.tan(xs)) - fs)))
    beyond_oa2 = rng.uniform(OA2_BOUND, 3.0, trials)
    beyond_x = rng.uniform(1e-6, math.pi / 6, trials)
    ratios = beyond_x / (beyond_oa2 ** 2 * np.sin(beyond_x) * np.cos(beyond_x))
    margin = min(float(OA2_BOUND - oa2.max()), float(HEX_RATIO - ratios.max()))
    return OA2Report(trials, float(oa2.max()), float(ratios.max()), margin, inversion_error)


@dataclass(frozen=True)
class P3Report:
    max_ratio: float
    argmax: tuple[float, float]
    points: int
    notice: str = NOTICE

    @property
    def margin(self) -> float:
        return HEX_RATIO - self.max_ratio

    @property
    def ok(self) -> bool:
        return self.margin >= -1e-12


def check_lemma_p3(n_angle: int = 400, n_dist: int = 100, max_dist: float = OA2_BOUND) -> P3Report:
    """With the first line tangent to the unit disc, a second line turned by more than pi/3 caps the ratio.

    The second line has unit normal at angle theta > pi/3 from the first and
    distance s >= 1 from O; A2 is where the lines meet and the ratio is
    x / tan x with x the angle A1 O A2.
    """
    th = math.pi / 3 + (math.pi / 2 - math.pi / 3) * np.arange(1, n_angle + 1) / n_angle
    s = 1.0 + (max_dist - 1.0) * np.arange(n_dist) / max(n_dist - 1, 1)
    T, S = np.meshgrid(th, s, indexing="ij")
    u = (S - np.cos(T)) / np.sin(T)
    x = np.arctan(u)
    ratio = x / u
    k = np.unravel_index(int(np.argmax(ratio)), ratio.shape)
    return P3Report(float(ratio[k]), (float(T[k]), float(S[k])), int(ratio.size))
