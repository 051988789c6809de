"""Neighborhood graphs and their Vietoris-Rips expansion up to dimension 2."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .geometry import as_point_array


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class NeighborhoodGraph:
    """Points with the edges ``i < j`` whose length is at most ``epsilon``."""

    vertices: np.ndarray  # (n, 2)
    edges: np.ndarray  # (m, 2) int, rows sorted lexicographically
    weights: np.ndarray  # (m,)
    epsilon: float

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(i), int(j)) for i, j in self.edges}

    def adjacency(self) -> np.ndarray:
        n = self.n_vertices
        adj = np.zeros((n, n), dtype=bool)
        adj[self.edges[:, 0], self.edges[:, 1]] = True
        adj[self.edges[:, 1], self.edges[:, 0]] = True
        return adj


@dataclass(frozen=True, eq=False)
class RipsComplex:
    graph: NeighborhoodGraph
    triangles: np.ndarray  # (t, 3) int, i < j < k, lexicographic order
    triangle_weights: np.ndarray  # (t,)
    epsilon: float

    @property
    def vertices(self) -> np.ndarray:
        return self.graph.vertices

    def triangle_coords(self, index: np.ndarray | None = None) -> np.ndarray:
        tri = self.triangles if index is None else self.triangles[index]
        return self.vertices[tri]

    def triangle_set(self) -> set[tuple[int, int, int]]:
        return {(int(i), int(j), int(k)) for i, j, k in self.triangles}

    def to_json(self) -> str:
        doc = {
            "vertices": self.vertices.tolist(),
            "edges": [[int(i), int(j), float(w)] for (i, j), w in zip(self.graph.edges, self.graph.weights)],
            "triangles": [
                [int(i), int(j), int(k), float(w)]
                for (i, j, k), w in zip(self.triangles, self.triangle_weights)
            ],
            "epsilon": float(self.epsilon),
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "RipsComplex":
        doc = json.loads(text)
        verts = np.asarray(doc["vertices"], dtype=float).reshape(-1, 2)
        e = np.asarray(doc["edges"], dtype=float).reshape(-1, 3)
        t = np.asarray(doc["triangles"], dtype=float).reshape(-1, 4)
        graph = NeighborhoodGraph(
            _frozen(verts), _frozen(e[:, :2].astype(np.int64)), _frozen(e[:, 2]), float(doc["epsilon"])
        )
        return cls(graph, _frozen(t[:, :3].astype(np.int64)), _frozen(t[:, 3]), float(doc["epsilon"]))


def pairwise_distances(points) -> np.ndarray:
    """Symmetric Euclidean distance table with an exactly zero diagonal."""
    pts = as_point_array(points)
    if len(pts) < 2:
        raise ValueError("need at least 2 points")
    dx = pts[:, 0][:, None] - pts[:, 0][None, :]
    dy = pts[:, 1][:, None] - pts[:, 1][None, :]
    return np.sqrt(dx * dx + dy * dy)


def epsilon_from_quantile(points, q: float, distances: np.ndarray | None = None) -> float:
    """Type-7 (linear interpolation) ``q``-quantile of the positive pairwise distances."""
    if not 0.0 < q < 1.0:
        raise ValueError(f"quantile must lie in (0, 1), got {q}")
    d = pairwise_distances(points) if distances is None else distances
    iu = np.triu_indices(len(d), k=1)
    flat = d[iu]
    flat = flat[flat > 0]
    if flat.size == 0:
        raise ValueError("all points coincide; no positive distance")
    return float(np.quantile(flat, q, method="linear"))


def build_neighborhood_graph(points, epsilon: float, distances: np.ndarray | None = None) -> NeighborhoodGraph:
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    pts = as_point_array(points)
    d = pairwise_distances(pts) if distances is None else distances
    iu, ju = np.triu_indices(len(pts), k=1)
    w = d[iu, ju]
    keep = (w > 0) & (w <= epsilon)
    edges = np.stack([iu[keep], ju[keep]], axis=1).astype(np.int64)
    return NeighborhoodGraph(_frozen(pts.copy()), _frozen(edges), _frozen(w[keep]), float(epsilon))


def rips_expansion(graph: NeighborhoodGraph, distances: np.ndarray | None = None) -> RipsComplex:
    """All 3-cliques of the graph, each weighted by its longest edge.

    For every vertex ``i`` the higher-indexed neighbors are intersected
    through the adjacency matrix, which yields the cliques ``i < j < k`` in
    lexicographic order.
    """
    n = graph.n_vertices
    adj = graph.adjacency()
    d = pairwise_distances(graph.vertices) if distances is None else distances
    chunks = []
    for i in range(n):
        up = np.flatnonzero(adj[i, i + 1 :]) + i + 1
        if len(up) < 2:
            continue
        sub = np.triu(adj[np.ix_(up, up)], k=1)
        a, b = np.nonzero(sub)
        if len(a):
            chunks.append(np.stack([np.full(len(a), i), up[a], up[b]], axis=1))
    if chunks:
        tri = np.concatenate(chunks).astype(np.int64)
        w = np.maximum.reduce([d[tri[:, 0], tri[:, 1]], d[tri[:, 0], tri[:, 2]], d[tri[:, 1], tri[:, 2]]])
    else:
        tri = np.empty((0, 3), dtype=np.int64)
        w = np.empty(0)
    return RipsComplex(graph, _frozen(tri), _frozen(w), graph.epsilon)


def build_rips_complex(points, epsilon: float) -> RipsComplex:
    pts = as_point_array(points)
    d = pairwise_distances(pts)
    return rips_expansion(build_neighborhood_graph(pts, epsilon, d), d)


def covering_triangles(cx: RipsComplex) -> np.ndarray:
    """Indices of the triangles that contain no vertex strictly inside.

    A vertex strictly inside triangle ``ijk`` is closer than the longest edge
    to each of ``i, j, k``, so the three sub-triangles it spans are also in
    the complex and cover ``ijk``. Dropping such triangles therefore leaves
    the union unchanged while shrinking it by roughly an order of magnitude
    on dense clouds. The inside test keeps a small margin so that only
    clearly interior vertices trigger removal.
    """
    tri = cx.triangles
    if len(tri) == 0:
        return np.empty(0, dtype=np.int64)
    pts = cx.vertices
    adj = cx.graph.adjacency()
    scale = float(np.ptp(pts, axis=0).max()) or 1.0
    margin = 1e-12 * scale * scale
    keep = np.ones(len(tri), dtype=bool)
    starts = np.searchsorted(tri[:, 0], np.arange(len(pts) + 1))
    for i in range(len(pts)):
        lo, hi = starts[i], starts[i + 1]
        if lo == hi:
            continue
        block = tri[lo:hi]
        cand = np.flatnonzero(adj[i])
        a = pts[i]
        b = pts[block[:, 1]][:, None, :]
        c = pts[block[:, 2]][:, None, :]
        m = pts[cand][None, :, :]
        sign = np.sign(_cross(a, b[:, 0], c[:, 0]))[:, None]
        o1 = _cross(a, b, m) * sign
        o2 = _cross(b, c, m) * sign
        o3 = _cross(c, a, m) * sign
        inside = (o1 > margin) & (o2 > margin) & (o3 > margin)
        keep[lo:hi] = ~inside.any(axis=1)
    return np.flatnonzero(keep)


def _cross(a, b, c):
    return (b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1]) - (b[..., 1] - a[..., 1]) * (c[..., 0] - a[..., 0])
