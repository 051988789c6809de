"""Per-variable geometric sensitivity pipeline.

For one input column against the output: recenter, rescale to the unit
square, build the Rips complex at a fixed or quantile radius, mirror its
planar realization through the output mid-line and measure how much of the
two regions fail to overlap.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .complex import (
    RipsComplex,
    build_neighborhood_graph,
    covering_triangles,
    epsilon_from_quantile,
    pairwise_distances,
    rips_expansion,
)
from .geometry import PolygonSet, boolean_op, bounding_box, count_degenerate, union_triangles
from .persistence import Barcode, barcode_for_points, maxmin_subsample
from .symmetry import recenter, reflection_map, y_mid

log = logging.getLogger(__name__)

MIN_POINTS = 10


@dataclass(frozen=True)
class AnalysisConfig:
    """Radius selection and preprocessing.

    Exactly one of ``epsilon`` (fixed radius) or ``quantile`` (of the
    pairwise distances) must be set.
    """

    epsilon: float | None = None
    quantile: float | None = 0.05
    normalize: bool = True
    seed: int = 0
    with_barcode: bool = False
    barcode_max_points: int = 300

    def __post_init__(self) -> None:
        if (self.epsilon is None) == (self.quantile is None):
            raise ValueError("set exactly one of epsilon or quantile")
        if self.epsilon is not None and not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.quantile is not None and not 0 < self.quantile < 1:
            raise ValueError("quantile must lie in (0, 1)")


@dataclass(frozen=True, eq=False)
class VariableGeometry:
    """Planar objects behind one result, kept for rendering."""

    points: np.ndarray
    complex: PolygonSet
    reflection: PolygonSet
    symdiff: PolygonSet
    y_mid: float


@dataclass(frozen=True)
class AnalysisResult:
    variable: str
    epsilon: float
    area_v: float
    area_box: float
    rho_geom: float
    s_geom: float
    area_symdiff: float
    triangle_count: int
    n: int
    barcode: Barcode | None = None
    sobol: float | None = None
    diagnostics: tuple[str, ...] = ()
    geometry: VariableGeometry | None = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        doc = {
            "variable": self.variable,
            "epsilon": self.epsilon,
            "area_v": self.area_v,
            "area_box": self.area_box,
            "rho_geom": self.rho_geom,
            "s_geom": self.s_geom,
            "area_symdiff": self.area_symdiff,
            "triangle_count": self.triangle_count,
            "n": self.n,
            "diagnostics": list(self.diagnostics),
        }
        if self.sobol is not None:
            doc["sobol"] = self.sobol
        if self.barcode is not None:
            doc["barcode"] = self.barcode.to_json()
        return doc


def geometric_index(area_symdiff: float, area_v: float) -> float:
    """Area of the symmetric difference over twice the complex area, in [0, 1]."""
    if area_symdiff < 0 or area_v < 0:
        raise ValueError("areas must be non-negative")
    if area_v == 0:
        return 0.0
    return min(max(area_symdiff / (2.0 * area_v), 0.0), 1.0)


def geometric_correlation(area_v: float, area_box: float) -> float:
    """Fraction of the reference box left empty by the complex."""
    if area_v < 0:
        raise ValueError("area must be non-negative")
    if not area_box > 0:
        raise ValueError("reference box has zero area")
    return min(max(1.0 - area_v / area_box, 0.0), 1.0)


def _prepare(xs, ys, normalize: bool):
    x, y, _, _ = recenter(xs, ys)
    if normalize:
        xr, yr = float(x.max()), float(y.max())
        if xr > 0:
            x = x / xr
        if yr > 0:
            y = y / yr
    return x, y


def analyze_variable(
    xs,
    ys,
    cfg: AnalysisConfig = AnalysisConfig(),
    name: str = "X",
    *,
    keep_geometry: bool = False,
) -> AnalysisResult:
    xs = np.asarray(xs, dtype=float).ravel()
    ys = np.asarray(ys, dtype=float).ravel()
    if xs.shape != ys.shape:
        raise ValueError(f"length mismatch: {xs.size} inputs vs {ys.size} outputs")
    if xs.size < MIN_POINTS:
        raise ValueError(f"need at least {MIN_POINTS} points, got {xs.size}")
    if not (np.isfinite(xs).all() and np.isfinite(ys).all()):
        raise ValueError("non-finite values in data")

    x, y = _prepare(xs, ys, cfg.normalize)
    pts = np.column_stack([x, y])
    box = bounding_box(pts)
    n = len(pts)
    if box.area == 0:
        msg = "degenerate input: constant column gives a zero-area box"
        log.warning("%s: %s", name, msg)
        return AnalysisResult(name, cfg.epsilon or 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0, n, diagnostics=(msg,))

    dist = pairwise_distances(pts)
    eps = cfg.epsilon if cfg.epsilon is not None else epsilon_from_quantile(pts, cfg.quantile, dist)
    cx = rips_expansion(build_neighborhood_graph(pts, eps, dist), dist)
    region, degenerate = realize(cx)
    diagnostics = []
    if degenerate:
        diagnostics.append(f"skipped {degenerate} degenerate triangles")

    mid = y_mid(y)
    phi = reflection_map(mid)
    # phi is an isometry, so reflecting the union equals the union of reflected triangles
    mirrored = phi.apply_to_polygons(region)
    symdiff = boolean_op(region, mirrored, "symmetric_difference")

    area_v = region.area
    if area_v == 0:
        msg = "empty complex at this radius; increase epsilon or quantile"
        log.warning("%s: %s", name, msg)
        diagnostics.append(msg)
        area_box = box.area
    else:
        area_box = region.bbox().area
    area_sd = symdiff.area
    result = AnalysisResult(
        variable=name,
        epsilon=float(eps),
        area_v=area_v,
        area_box=area_box,
        rho_geom=geometric_correlation(area_v, area_box),
        s_geom=geometric_index(area_sd, area_v),
        area_symdiff=area_sd,
        triangle_count=len(cx.triangles),
        n=n,
        diagnostics=tuple(diagnostics),
        geometry=VariableGeometry(pts, region, mirrored, symdiff, mid) if keep_geometry else None,
    )
    if cfg.with_barcode:
        sub = maxmin_subsample(pts, cfg.barcode_max_points)
        barcode, _ = barcode_for_points(pts[sub])
        result = replace(result, barcode=barcode)
    return result


def realize(cx: RipsComplex) -> tuple[PolygonSet, int]:
    """Planar union of the complex's triangles and the count of degenerate ones."""
    keep = covering_triangles(cx)
    coords = cx.triangle_coords(keep)
    return union_triangles(coords), count_degenerate(coords)


def analyze_dataset(
    inputs,
    output,
    cfg: AnalysisConfig = AnalysisConfig(),
    names: Sequence[str] | None = None,
    *,
    workers: int = 1,
    keep_geometry: bool = False,
) -> list[AnalysisResult]:
    """One independent first-order analysis per input column."""
    x = np.asarray(inputs, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    y = np.asarray(output, dtype=float).ravel()
    if x.ndim != 2 or x.shape[0] != y.size:
        raise ValueError(f"dimension mismatch: inputs {x.shape}, output {y.shape}")
    if names is None:
        names = [f"X{k + 1}" for k in range(x.shape[1])]
    if len(names) != x.shape[1]:
        raise ValueError("one name per input column required")

    def job(k: int) -> AnalysisResult:
        return analyze_variable(x[:, k], y, cfg, names[k], keep_geometry=keep_geometry)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(job, range(x.shape[1])))
    return [job(k) for k in range(x.shape[1])]
