"""Finite configurations of distinct points in a compact domain."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import RectWindow, Window


class PointSetError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class EmpiricalPointSet:
    points: np.ndarray
    domain: Window
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).reshape(-1, 2)
        if not np.all(np.isfinite(pts)):
            raise PointSetError("points must be finite")
        if len(pts) > 1:
            order = np.lexsort((pts[:, 1], pts[:, 0]))
            s = pts[order]
            if np.any(np.all(s[1:] == s[:-1], axis=1)):
                raise PointSetError("duplicate points")
        if not np.all(self.domain.contains(pts[:, 0], pts[:, 1])):
            raise PointSetError("points must lie inside the domain")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def N(self) -> int:
        return len(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def translated(self, dx: float, dy: float) -> "EmpiricalPointSet":
        d = self.domain
        if isinstance(d, RectWindow):
            dom = RectWindow(d.xmin + dx, d.ymin + dy, d.xmax + dx, d.ymax + dy)
        else:
            dom = type(d)(d.cx + dx, d.cy + dy, d.radius)
        return EmpiricalPointSet(self.points + np.array([dx, dy]), dom)

    def scaled(self, lam: float) -> "EmpiricalPointSet":
        d = self.domain
        if isinstance(d, RectWindow):
            dom = RectWindow(d.xmin * lam, d.ymin * lam, d.xmax * lam, d.ymax * lam)
        else:
            dom = type(d)(d.cx * lam, d.cy * lam, d.radius * lam)
        return EmpiricalPointSet(self.points * lam, dom)

    def permuted(self, perm: np.ndarray) -> "EmpiricalPointSet":
        return EmpiricalPointSet(self.points[np.asarray(perm)], self.domain)
