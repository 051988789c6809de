"""Planar geometry kernel: points, triangles, polygon sets and their areas.

Boolean algebra on polygon sets is delegated to GEOS (through shapely),
wrapped so that results are always oriented (outer rings counter-clockwise,
holes clockwise) and stripped of slivers thinner than a scale-relative
tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Sequence

import numpy as np
import shapely
from shapely.geometry import MultiPolygon, Polygon

# Relative sliver tolerance, multiplied by the bounding-box diagonal of the operands.
SNAP_TOLERANCE = 1e-9

_EPS = np.finfo(float).eps
_ORIENT_ERRBOUND = (3.0 + 16.0 * _EPS) * _EPS

BooleanOp = Literal["union", "intersection", "difference", "symmetric_difference"]


class DegenerateTriangleError(ValueError):
    """Raised when three points are collinear (zero signed area)."""


def orient2d(a: Sequence[float], b: Sequence[float], c: Sequence[float]) -> float:
    """Twice the signed area of ``abc``; the sign is exact.

    The floating-point determinant is returned whenever its magnitude exceeds
    the forward error bound. Otherwise the determinant is recomputed exactly
    with rationals, so collinearity and orientation are never misreported.
    """
    detleft = (a[0] - c[0]) * (b[1] - c[1])
    detright = (a[1] - c[1]) * (b[0] - c[0])
    det = detleft - detright
    bound = _ORIENT_ERRBOUND * (abs(detleft) + abs(detright))
    if abs(det) > bound:
        return det
    ax, ay, bx, by, cx, cy = (Fraction(float(v)) for v in (*a[:2], *b[:2], *c[:2]))
    exact = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx)
    return float(exact)


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinate in Point2({self.x}, {self.y})")
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True)
class Triangle2:
    """Non-degenerate triangle stored counter-clockwise.

    Build with :meth:`from_points`, which normalizes orientation; the raw
    constructor only checks that the given order is already CCW.
    """

    a: Point2
    b: Point2
    c: Point2

    def __post_init__(self) -> None:
        if orient2d(tuple(self.a), tuple(self.b), tuple(self.c)) <= 0:
            raise DegenerateTriangleError("vertices must be counter-clockwise and non-collinear")

    @classmethod
    def from_points(cls, p, q, r) -> "Triangle2":
        p, q, r = (v if isinstance(v, Point2) else Point2(*v) for v in (p, q, r))
        s = orient2d(tuple(p), tuple(q), tuple(r))
        if s == 0:
            raise DegenerateTriangleError(f"collinear vertices {p}, {q}, {r}")
        return cls(p, q, r) if s > 0 else cls(p, r, q)

    @property
    def vertices(self) -> tuple[Point2, Point2, Point2]:
        return (self.a, self.b, self.c)

    def coords(self) -> np.ndarray:
        return np.array([tuple(self.a), tuple(self.b), tuple(self.c)], dtype=float)


@dataclass(frozen=True)
class BBox:
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self) -> None:
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise ValueError("bounding box with min > max")

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)


def triangle_area(t: Triangle2) -> float:
    (ax, ay), (bx, by), (cx, cy) = t.a, t.b, t.c
    return 0.5 * abs((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))


def ring_signed_area(ring: np.ndarray) -> float:
    """Shoelace area of a ring given as (k, 2) coordinates, open or closed."""
    x = ring[:, 0]
    y = ring[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


class PolygonSet:
    """An immutable planar region: interior-disjoint polygons with holes."""

    __slots__ = ("_geom",)

    def __init__(self, geom=None):
        if geom is None or geom.is_empty:
            geom = MultiPolygon()
        else:
            geom = _polygonal_part(geom)
            geom = shapely.orient_polygons(geom, exterior_cw=False)
        object.__setattr__(self, "_geom", geom)

    def __setattr__(self, name, value):
        raise AttributeError("PolygonSet is immutable")

    @classmethod
    def empty(cls) -> "PolygonSet":
        return cls()

    @classmethod
    def from_rings(cls, polygons: Iterable[tuple[Sequence, Sequence[Sequence]]]) -> "PolygonSet":
        """Build from ``[(outer, [hole, ...]), ...]``. Overlapping parts are merged."""
        parts = [Polygon(outer, holes) for outer, holes in polygons]
        if not parts:
            return cls()
        return cls(shapely.union_all(shapely.make_valid(parts)))

    @classmethod
    def from_shapely(cls, geom) -> "PolygonSet":
        return cls(geom)

    @property
    def geom(self):
        return self._geom

    @property
    def polygons(self) -> list[tuple[np.ndarray, list[np.ndarray]]]:
        """``(outer, holes)`` coordinate arrays; rings are closed."""
        out = []
        for poly in _iter_polygons(self._geom):
            outer = np.asarray(poly.exterior.coords)
            holes = [np.asarray(r.coords) for r in poly.interiors]
            out.append((outer, holes))
        return out

    @property
    def is_empty(self) -> bool:
        return self._geom.is_empty

    @property
    def area(self) -> float:
        return area(self)

    def bbox(self) -> BBox | None:
        if self.is_empty:
            return None
        x0, y0, x1, y1 = self._geom.bounds
        return BBox(x0, x1, y0, y1)

    def to_geojson(self) -> dict:
        coords = []
        for outer, holes in self.polygons:
            coords.append([outer.tolist()] + [h.tolist() for h in holes])
        return {"type": "MultiPolygon", "coordinates": coords}

    @classmethod
    def from_geojson(cls, doc: dict) -> "PolygonSet":
        kind = doc.get("type")
        if kind == "Polygon":
            polys = [doc["coordinates"]]
        elif kind == "MultiPolygon":
            polys = doc["coordinates"]
        else:
            raise ValueError(f"unsupported GeoJSON type {kind!r}")
        return cls.from_rings((rings[0], rings[1:]) for rings in polys if rings)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolygonSet):
            return NotImplemented
        return bool(shapely.equals(self._geom, other._geom)) or (self.is_empty and other.is_empty)

    def __hash__(self):
        return hash(shapely.normalize(self._geom).wkb)

    def __repr__(self) -> str:
        return f"PolygonSet(parts={len(self.polygons)}, area={self.area:.6g})"


def _iter_polygons(geom):
    if geom.is_empty:
        return
    if isinstance(geom, Polygon):
        yield geom
    elif hasattr(geom, "geoms"):
        for g in geom.geoms:
            yield from _iter_polygons(g)


def _polygonal_part(geom) -> MultiPolygon:
    polys = [p for p in _iter_polygons(geom) if not p.is_empty]
    return MultiPolygon(polys)


def _drop_slivers(geom, tol: float):
    """Remove parts and holes whose mean thickness (2·area/perimeter) is below ``tol``."""
    kept = []
    for poly in _iter_polygons(geom):
        if poly.length == 0 or 2.0 * poly.area / poly.length < tol:
            # the outer hull may still be thick when holes eat most of the area
            shell = Polygon(poly.exterior)
            if shell.length == 0 or 2.0 * shell.area / shell.length < tol:
                continue
        holes = []
        for ring in poly.interiors:
            h = Polygon(ring)
            if h.length > 0 and 2.0 * h.area / h.length >= tol:
                holes.append(ring)
        cleaned = Polygon(poly.exterior, holes)
        if cleaned.length > 0 and 2.0 * cleaned.area / cleaned.length >= tol:
            kept.append(cleaned)
    return MultiPolygon(kept)


def triangle_coords(ts) -> np.ndarray:
    """Stack triangles (Triangle2 objects or an array) into a (t, 3, 2) float array."""
    if isinstance(ts, np.ndarray):
        arr = np.asarray(ts, dtype=float)
        return arr.reshape(-1, 3, 2)
    ts = list(ts)
    if not ts:
        return np.empty((0, 3, 2))
    if isinstance(ts[0], Triangle2):
        return np.stack([t.coords() for t in ts])
    return np.asarray(ts, dtype=float).reshape(-1, 3, 2)


def nondegenerate_mask(coords: np.ndarray) -> np.ndarray:
    """Boolean mask of triangles with non-zero signed area (exact sign)."""
    a, b, c = coords[:, 0], coords[:, 1], coords[:, 2]
    detleft = (a[:, 0] - c[:, 0]) * (b[:, 1] - c[:, 1])
    detright = (a[:, 1] - c[:, 1]) * (b[:, 0] - c[:, 0])
    det = detleft - detright
    bound = _ORIENT_ERRBOUND * (np.abs(detleft) + np.abs(detright))
    mask = np.abs(det) > bound
    for idx in np.flatnonzero(~mask):
        mask[idx] = orient2d(a[idx], b[idx], c[idx]) != 0
    return mask


def union_triangles(ts) -> PolygonSet:
    """Point-set union of triangles.

    Accepts ``Triangle2`` objects or a (t, 3, 2) coordinate array. Degenerate
    rows of an array input are skipped; use :func:`count_degenerate` to report
    how many.
    """
    coords = triangle_coords(ts)
    if len(coords) == 0:
        return PolygonSet.empty()
    coords = coords[nondegenerate_mask(coords)]
    if len(coords) == 0:
        return PolygonSet.empty()
    polys = shapely.polygons(coords)
    merged = shapely.union_all(polys)
    lo = coords.reshape(-1, 2).min(axis=0)
    hi = coords.reshape(-1, 2).max(axis=0)
    tol = SNAP_TOLERANCE * float(np.hypot(*(hi - lo)))
    return PolygonSet(_drop_slivers(merged, tol))


def count_degenerate(ts) -> int:
    coords = triangle_coords(ts)
    return int(len(coords) - nondegenerate_mask(coords).sum()) if len(coords) else 0


_OPS = {
    "union": shapely.union,
    "intersection": shapely.intersection,
    "difference": shapely.difference,
    "symmetric_difference": shapely.symmetric_difference,
}


def boolean_op(a: PolygonSet, b: PolygonSet, op: BooleanOp) -> PolygonSet:
    """Regularized boolean set operation on two polygon sets."""
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown boolean operation {op!r}") from None
    if a.is_empty and b.is_empty:
        return PolygonSet.empty()
    result = fn(a.geom, b.geom)
    boxes = [s.bbox() for s in (a, b) if not s.is_empty]
    diag = math.hypot(
        max(bb.x_max for bb in boxes) - min(bb.x_min for bb in boxes),
        max(bb.y_max for bb in boxes) - min(bb.y_min for bb in boxes),
    )
    return PolygonSet(_drop_slivers(result, SNAP_TOLERANCE * diag))


def area(s: PolygonSet) -> float:
    """Lebesgue measure of the region: outer rings minus holes."""
    total = 0.0
    for outer, holes in s.polygons:
        total += abs(ring_signed_area(outer))
        for h in holes:
            total -= abs(ring_signed_area(h))
    return max(total, 0.0)


def bounding_box(points) -> BBox:
    pts = as_point_array(points)
    if len(pts) == 0:
        raise ValueError("bounding box of an empty point set")
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    return BBox(float(lo[0]), float(hi[0]), float(lo[1]), float(hi[1]))


def as_point_array(points) -> np.ndarray:
    """Coerce Point2 lists, tuples or arrays into a finite (n, 2) float array."""
    if isinstance(points, np.ndarray):
        arr = np.asarray(points, dtype=float)
    else:
        seq = list(points)
        if not seq:
            return np.empty((0, 2))
        arr = np.array([tuple(p) for p in seq], dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected (n, 2) points, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError("points must be finite")
    return arr
