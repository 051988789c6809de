"""Recentering and the mirror reflection through the output mid-line."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import shapely.affinity

from .geometry import PolygonSet, Triangle2, triangle_coords


@dataclass(frozen=True, eq=False)
class AffineMap2:
    """The map ``p -> a @ p + b`` on the plane."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.a, dtype=float).reshape(2, 2)
        b = np.asarray(self.b, dtype=float).reshape(2)
        if abs(np.linalg.det(a)) == 0:
            raise ValueError("affine map must be invertible")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.a))

    def __call__(self, p):
        p = np.asarray(p, dtype=float)
        return p @ self.a.T + self.b

    def apply_to_polygons(self, s: PolygonSet) -> PolygonSet:
        (a, b), (c, d) = self.a
        return PolygonSet(shapely.affinity.affine_transform(s.geom, [a, b, c, d, *self.b]))


def recenter(xs, ys):
    """Shift both coordinates so their minima are 0.

    Returns ``(xs - x_min, ys - y_min, x_min, y_min)``.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size == 0 or ys.size == 0:
        raise ValueError("recenter needs non-empty data")
    if xs.shape != ys.shape:
        raise ValueError(f"length mismatch: {xs.shape} vs {ys.shape}")
    x_min = float(xs.min())
    y_min = float(ys.min())
    return xs - x_min, ys - y_min, x_min, y_min


def y_mid(ys) -> float:
    """Midrange ``(min + max) / 2``, not the median or mean."""
    ys = np.asarray(ys, dtype=float)
    if ys.size == 0:
        raise ValueError("y_mid of empty data")
    return 0.5 * (float(ys.min()) + float(ys.max()))


def reflection_map(mid: float) -> AffineMap2:
    if not np.isfinite(mid):
        raise ValueError("mid-line must be finite")
    return AffineMap2(np.array([[1.0, 0.0], [0.0, -1.0]]), np.array([0.0, 2.0 * mid]))


def reflect_points(phi: AffineMap2, pts) -> np.ndarray:
    return phi(np.asarray(pts, dtype=float))


def reflect_complex(phi: AffineMap2, triangles):
    """Map every triangle through ``phi``.

    Orientation-reversing maps flip vertex order, which is restored to
    counter-clockwise. Returns ``Triangle2`` objects for object input and a
    (t, 3, 2) array otherwise.
    """
    as_objects = not isinstance(triangles, np.ndarray)
    coords = triangle_coords(triangles)
    mapped = phi(coords)
    if phi.det < 0:
        mapped = mapped[:, ::-1, :]
    if as_objects:
        return [Triangle2.from_points(*tri) for tri in mapped]
    return np.ascontiguousarray(mapped)
