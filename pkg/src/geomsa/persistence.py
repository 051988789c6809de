"""H0/H1 persistence barcodes of the Rips filtration (Z/2 coefficients)."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .complex import build_rips_complex, epsilon_from_quantile, pairwise_distances
from .geometry import as_point_array

DEFAULT_EPSILON_MAX_QUANTILE = 0.20


@dataclass(frozen=True, eq=False)
class Filtration:
    """Vertices at weight 0, then edges and triangles sorted by (weight, lex).

    The global order interleaves dimensions by (weight, dimension, vertex
    tuple), so every face precedes its cofaces.
    """

    n_vertices: int
    edges: np.ndarray  # (m, 2), filtration order
    edge_weights: np.ndarray
    triangles: np.ndarray  # (t, 3), filtration order
    triangle_weights: np.ndarray
    epsilon_max: float
    distances: np.ndarray | None = None

    def simplices(self) -> list[tuple[tuple[int, ...], float]]:
        items = [((v,), 0.0) for v in range(self.n_vertices)]
        items += [((int(i), int(j)), float(w)) for (i, j), w in zip(self.edges, self.edge_weights)]
        items += [((int(i), int(j), int(k)), float(w)) for (i, j, k), w in zip(self.triangles, self.triangle_weights)]
        items.sort(key=lambda s: (s[1], len(s[0]), s[0]))
        return items

    def __len__(self) -> int:
        return self.n_vertices + len(self.edges) + len(self.triangles)


@dataclass(frozen=True)
class Interval:
    dim: int
    birth: float
    death: float = math.inf

    @property
    def zero_length(self) -> bool:
        return self.birth == self.death

    @property
    def persistence(self) -> float:
        return self.death - self.birth


@dataclass(frozen=True)
class Barcode:
    intervals: tuple[Interval, ...]

    def dimension(self, dim: int, *, include_zero_length: bool = False) -> list[Interval]:
        return [
            iv for iv in self.intervals if iv.dim == dim and (include_zero_length or not iv.zero_length)
        ]

    def to_json(self) -> list[dict]:
        return [
            {"dim": iv.dim, "birth": iv.birth, "death": None if math.isinf(iv.death) else iv.death}
            for iv in self.intervals
        ]

    @classmethod
    def from_json(cls, doc: list[dict]) -> "Barcode":
        return cls(
            tuple(
                Interval(int(d["dim"]), float(d["birth"]), math.inf if d["death"] is None else float(d["death"]))
                for d in doc
            )
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def build_filtration(points, epsilon_max: float) -> Filtration:
    if not epsilon_max > 0:
        raise ValueError(f"epsilon_max must be positive, got {epsilon_max}")
    pts = as_point_array(points)
    if len(pts) < 2:
        raise ValueError("need at least 2 points")
    cx = build_rips_complex(pts, epsilon_max)
    e, ew = cx.graph.edges, cx.graph.weights
    eo = np.lexsort((e[:, 1], e[:, 0], ew))
    t, tw = cx.triangles, cx.triangle_weights
    to = np.lexsort((t[:, 2], t[:, 1], t[:, 0], tw))
    return Filtration(
        len(pts), e[eo], ew[eo], t[to], tw[to], float(epsilon_max), pairwise_distances(pts)
    )


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x


def _dependent_triangles(f: Filtration) -> np.ndarray:
    """Mask of triangles whose boundary is a sum of earlier triangle boundaries.

    If some vertex ``m`` makes ``ijkm`` a tetrahedron whose other three
    faces all come earlier in the filtration, then the boundary of ``ijk``
    equals the sum of theirs, so its column reduces to zero and can be
    skipped without reducing it.
    """
    tri = f.triangles
    n = f.n_vertices
    if len(tri) == 0:
        return np.zeros(0, dtype=bool)
    d = f.distances
    if d is None:
        raise ValueError("filtration lacks its distance table")
    eps = f.epsilon_max
    adj = (d <= eps) & (d > 0)
    code = (tri[:, 0] * n + tri[:, 1]) * n + tri[:, 2]
    dep = np.zeros(len(tri), dtype=bool)
    # group by lowest vertex to vectorize the candidate scan
    order = np.argsort(tri[:, 0], kind="stable")
    starts = np.searchsorted(tri[order, 0], np.arange(n + 1))
    for v in range(n):
        lo, hi = starts[v], starts[v + 1]
        if lo == hi:
            continue
        idx = order[lo:hi]
        block = tri[idx]
        i, j, k = block[:, 0], block[:, 1], block[:, 2]
        cand = np.flatnonzero(adj[v])
        row, col = np.nonzero(adj[j][:, cand] & adj[k][:, cand])
        if len(row) == 0:
            continue
        i, j, k, m = i[row], j[row], k[row], cand[col]
        w = f.triangle_weights[idx][row]
        c = code[idx][row]
        dim_, djm, dkm = d[i, m], d[j, m], d[k, m]
        earlier = np.ones(len(row), dtype=bool)
        for p, q, dpq, dpm, dqm in (
            (i, j, d[i, j], dim_, djm),
            (i, k, d[i, k], dim_, dkm),
            (j, k, d[j, k], djm, dkm),
        ):
            fw = np.maximum(np.maximum(dpq, dpm), dqm)
            tie = fw == w
            # p < q, so the sorted face is (min(p, m), middle, max(q, m))
            first = np.minimum(p, m)
            last = np.maximum(q, m)
            fc = (first * n + (p + q + m - first - last)) * n + last
            earlier &= (fw < w) | (tie & (fc < c))
        hit = np.zeros(len(idx), dtype=bool)
        hit[row[earlier]] = True
        dep[idx] = hit
    return dep


def compute_barcode(f: Filtration) -> Barcode:
    """Persistence pairing by boundary-matrix reduction over Z/2.

    Triangle columns are reduced first (the twist order); their pivots are
    exactly the edges that close a cycle, so edge columns never need
    reducing and the remaining edges are resolved by union-find, which is the
    elder-rule reduction of the edge-vertex boundary. Zero-length intervals
    are kept; :attr:`Interval.zero_length` flags them.
    """
    n = f.n_vertices
    m = len(f.edges)
    edge_rank = {(int(a), int(b)): r for r, (a, b) in enumerate(f.edges)}

    pivot_of: dict[int, set[int]] = {}
    deaths: dict[int, float] = {}
    dependent = _dependent_triangles(f) if len(f.triangles) else np.zeros(0, dtype=bool)
    for t, (a, b, c) in enumerate(f.triangles):
        if dependent[t]:
            continue
        col = {edge_rank[(int(a), int(b))], edge_rank[(int(a), int(c))], edge_rank[(int(b), int(c))]}
        while col:
            low = max(col)
            other = pivot_of.get(low)
            if other is None:
                pivot_of[low] = col
                deaths[low] = float(f.triangle_weights[t])
                break
            col ^= other

    intervals: list[Interval] = []
    uf = _UnionFind(n)
    h1: list[Interval] = []
    for r in range(m):
        a, b = int(f.edges[r, 0]), int(f.edges[r, 1])
        w = float(f.edge_weights[r])
        ra, rb = uf.find(a), uf.find(b)
        if ra != rb:
            # elder rule: all components are born at 0, the later root dies
            young, old = (ra, rb) if ra > rb else (rb, ra)
            uf.parent[young] = old
            intervals.append(Interval(0, 0.0, w))
        else:
            h1.append(Interval(1, w, deaths.get(r, math.inf)))
    roots = {uf.find(v) for v in range(n)}
    intervals.extend(Interval(0, 0.0, math.inf) for _ in roots)
    intervals.sort(key=lambda iv: (iv.death, iv.birth))
    h1.sort(key=lambda iv: (iv.birth, iv.death))
    return Barcode(tuple(intervals + h1))


def betti_at(b: Barcode, epsilon: float) -> tuple[int, int]:
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    counts = [0, 0]
    for iv in b.intervals:
        if iv.birth <= epsilon < iv.death:
            counts[iv.dim] += 1
    return counts[0], counts[1]


def barcode_for_points(points, epsilon_max: float | None = None, quantile: float = DEFAULT_EPSILON_MAX_QUANTILE):
    pts = as_point_array(points)
    if epsilon_max is None:
        epsilon_max = epsilon_from_quantile(pts, quantile)
    return compute_barcode(build_filtration(pts, epsilon_max)), float(epsilon_max)


def maxmin_subsample(points, size: int, start: int = 0) -> np.ndarray:
    """Indices of a greedy farthest-point subsample (deterministic from ``start``)."""
    pts = as_point_array(points)
    n = len(pts)
    if size >= n:
        return np.arange(n)
    chosen = [start]
    dist = np.hypot(*(pts - pts[start]).T)
    for _ in range(size - 1):
        nxt = int(np.argmax(dist))
        chosen.append(nxt)
        dist = np.minimum(dist, np.hypot(*(pts - pts[nxt]).T))
    return np.sort(np.array(chosen))

