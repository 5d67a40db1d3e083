"""Graph approximants of the gasket and their exact geodesic metrics.

``H(n)`` is the union of the hole boundaries of level ``<= n``; ``G(n)``
adds the outer triangle.  Every side is cut into unit edges of length
``s * 2**-n`` so that collinear pieces from different levels coincide
exactly.  Vertices are integer lattice coordinates at scale ``n`` and all
distances are integers in those units.
"""
from __future__ import annotations

import heapq
import os
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable

from .topology import (
    LatticePoint,
    TriAddress,
    down_triangle,
    enumerate_holes,
    squared_norm,
    up_triangle,
)

#: default largest approximant level; override with SIERPINSKI_MAX_GRAPH_LEVEL
DEFAULT_MAX_LEVEL = 12


def max_graph_level() -> int:
    return int(os.environ.get("SIERPINSKI_MAX_GRAPH_LEVEL", DEFAULT_MAX_LEVEL))


class CapExceeded(ValueError):
    pass


@dataclass(eq=False)
class ApproximantGraph:
    """Unit-edge graph of ``G(n)`` or ``H(n)``; weights in units of ``s * 2**-n``."""

    kind: str
    n: int
    vertices: list[tuple[int, int]]
    index: dict[tuple[int, int], int]
    adjacency: list[list[tuple[int, int]]]
    provenance: dict[tuple[int, int], TriAddress] = field(repr=False)

    @cached_property
    def unit_weights(self) -> bool:
        return all(w == 1 for nbrs in self.adjacency for _v, w in nbrs)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def edges(self) -> Iterable[tuple[int, int, int]]:
        for u, nbrs in enumerate(self.adjacency):
            for v, w in nbrs:
                if u < v:
                    yield u, v, w

    def vertex_id(self, p: LatticePoint | tuple[int, int]) -> int:
        key = p.at_scale(self.n) if isinstance(p, LatticePoint) else tuple(p)
        try:
            return self.index[key]
        except KeyError:
            raise KeyError(f"{p} is not a vertex of {self.kind}({self.n})") from None

    def point(self, i: int) -> LatticePoint:
        a, b = self.vertices[i]
        return LatticePoint(a, b, self.n)

    def has_vertex(self, p: LatticePoint) -> bool:
        try:
            return p.at_scale(self.n) in self.index
        except ValueError:
            return False

    def summary(self) -> dict:
        return {"kind": self.kind, "n": self.n, "vertices": self.num_vertices, "edges": self.num_edges}


def _side_chain(p: tuple[int, int], q: tuple[int, int], steps: int):
    da, db = (q[0] - p[0]) // steps, (q[1] - p[1]) // steps
    for i in range(steps):
        yield (p[0] + i * da, p[1] + i * db), (p[0] + (i + 1) * da, p[1] + (i + 1) * db)


def build_graph(kind: str, n: int) -> ApproximantGraph:
    """Build ``H(n)`` (``kind="H"``) or ``G(n)`` (``kind="G"``)."""
    kind = kind.upper()
    if kind not in ("G", "H"):
        raise ValueError("kind must be 'G' or 'H'")
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > max_graph_level():
        raise CapExceeded(f"n={n} exceeds the graph level cap {max_graph_level()}")
    tris = [(h, down_triangle(h)) for h in enumerate_holes(n)]
    if kind == "G":
        tris.append((TriAddress.up(0), up_triangle(TriAddress.up(0))))
    index: dict[tuple[int, int], int] = {}
    vertices: list[tuple[int, int]] = []
    adjacency: list[list[tuple[int, int]]] = []
    seen: set[tuple[int, int]] = set()
    provenance = {}

    def vid(p):
        i = index.get(p)
        if i is None:
            i = index[p] = len(vertices)
            vertices.append(p)
            adjacency.append([])
        return i

    for addr, tri in tris:
        steps = 1 << (n - addr.level)
        corners = [v.at_scale(n) for v in tri.vertices]
        for p, q in zip(corners, corners[1:] + corners[:1]):
            for a, b in _side_chain(p, q, steps):
                u, v = vid(a), vid(b)
                key = (min(u, v), max(u, v))
                if key in seen:
                    continue
                seen.add(key)
                provenance[key] = addr
                adjacency[u].append((v, 1))
                adjacency[v].append((u, 1))
    return ApproximantGraph(kind, n, vertices, index, adjacency, provenance)


def shortest_paths(g: ApproximantGraph, source: int) -> list[int | None]:
    """Single-source integer distances (Dijkstra; unreachable -> None)."""
    dist: list[int | None] = [None] * g.num_vertices
    if g.unit_weights:
        # all weights are one unit: breadth-first order is Dijkstra order
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            du = dist[u] + 1
            for v, _w in g.adjacency[u]:
                if dist[v] is None:
                    dist[v] = du
                    queue.append(v)
        return dist
    heap = [(0, source)]
    dist[source] = 0
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, w in g.adjacency[u]:
            nd = d + w
            if dist[v] is None or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def graph_distance(g: ApproximantGraph, x: LatticePoint, y: LatticePoint) -> Fraction:
    """Geodesic distance in units of ``s``."""
    i, j = g.vertex_id(x), g.vertex_id(y)
    d = shortest_paths(g, i)[j]
    if d is None:
        raise ValueError("vertices are not connected")
    return Fraction(d, 1 << g.n)


# -- named points ---------------------------------------------------------

CORNERS = {"A": (Fraction(0), Fraction(0)), "C": (Fraction(1), Fraction(0)), "T": (Fraction(0), Fraction(1))}
_EDGES = {"L": ("A", "T"), "R": ("C", "T"), "B": ("A", "C")}


def parse_point(text: str) -> LatticePoint:
    """Parse ``A``/``C``/``T``, ``edge-point L|R|B t`` or ``lattice a b n``.

    Corners: A = (0,0) bottom-left, C = bottom-right, T = top.  Edge
    ``L`` runs A->T, ``R`` runs C->T, ``B`` runs A->C; ``t`` is a dyadic
    fraction of the way along.
    """
    parts = text.split()
    if len(parts) == 1 and parts[0].upper() in CORNERS:
        x, y = CORNERS[parts[0].upper()]
    elif len(parts) == 3 and parts[0] == "edge-point" and parts[1].upper() in _EDGES:
        t = Fraction(parts[2])
        if not 0 <= t <= 1:
            raise ValueError("edge fraction must lie in [0, 1]")
        p, q = (CORNERS[c] for c in _EDGES[parts[1].upper()])
        x, y = p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])
    elif len(parts) == 4 and parts[0] == "lattice":
        return LatticePoint(int(parts[1]), int(parts[2]), int(parts[3]))
    else:
        raise ValueError(f"cannot parse point {text!r}")
    return from_coords(x, y)


def from_coords(x: Fraction, y: Fraction) -> LatticePoint:
    """Lattice point for dyadic lattice-frame coordinates (units of ``s``)."""
    x, y = Fraction(x), Fraction(y)
    d = max(x.denominator, y.denominator)
    n = d.bit_length() - 1
    if 1 << n != d or (x.denominator & (x.denominator - 1)) or (y.denominator & (y.denominator - 1)):
        raise ValueError("coordinates must be dyadic rationals")
    return LatticePoint(int(x * d), int(y * d), n)


def format_point(p: LatticePoint) -> str:
    a, b, n = p._key()
    return f"lattice {a} {b} {n}"


# -- the P1/P2 configuration ----------------------------------------------

P1 = from_coords(Fraction(0), Fraction(1, 4))
P2 = from_coords(Fraction(0), Fraction(3, 4))
Q = from_coords(Fraction(0), Fraction(1, 2))
#: geodesic distance of P1 and P2 along the outer edge, units of s
ALPHA = Fraction(1, 2)


def p1p2_experiment(n: int) -> Fraction:
    """``d_{H(n)}(P1, P2) / alpha`` exactly."""
    if n < 2:
        raise ValueError("P1 and P2 are vertices only from n = 2 on")
    return graph_distance(build_graph("H", n), P1, P2) / ALPHA


# -- metric checks --------------------------------------------------------


@dataclass
class MetricReport:
    n: int
    samples: int
    seed: int
    violations: list[dict]
    worst_h_over_g: Fraction
    worst_g_over_euclid_sq: Fraction
    worst_euclid_sq_over_g_sq: Fraction

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "schema": "metric-check/1",
            "n": self.n,
            "samples": self.samples,
            "seed": self.seed,
            "violations": self.violations,
            "worst_dH_over_dG": str(self.worst_h_over_g),
            "worst_dG_sq_over_euclid_sq": str(self.worst_g_over_euclid_sq),
            "worst_euclid_sq_over_dG_sq": str(self.worst_euclid_sq_over_g_sq),
            "bounds": {"dH_over_dG": 2, "dG_over_euclid": 8, "euclid_over_dG": 1},
            "passed": self.passed,
        }


def check_pair(dg: int, dh: int, da: int, db: int) -> list[str]:
    """Violated inequalities for one pair; all quantities in lattice units."""
    out = []
    e2 = squared_norm(da, db)
    if not dg <= dh:
        out.append("d_G <= d_H")
    if not dh <= 2 * dg:
        out.append("d_H <= 2 d_G")
    if not e2 <= dg * dg:
        out.append("|x-y| <= d_G")
    if not dg * dg <= 64 * e2:
        out.append("d_G <= 8|x-y|")
    return out


def metric_bounds_check(n: int, samples: int = 200, seed: int = 42, pairs=None) -> MetricReport:
    """Random vertex pairs of ``H(n)`` (hence of ``G(n)``) against the sandwich bounds."""
    G, H = build_graph("G", n), build_graph("H", n)
    rng = random.Random(seed)
    verts = H.vertices
    if pairs is None:
        pairs = [(rng.choice(verts), rng.choice(verts)) for _ in range(samples)]
    by_source: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for x, y in pairs:
        by_source.setdefault(x, []).append(y)
    worst_hg = Fraction(0)
    worst_ge = Fraction(0)
    worst_eg = Fraction(0)
    violations = []
    for x, ys in by_source.items():
        dG = shortest_paths(G, G.index[x])
        dH = shortest_paths(H, H.index[x])
        for y in ys:
            dg, dh = dG[G.index[y]], dH[H.index[y]]
            da, db = y[0] - x[0], y[1] - x[1]
            bad = check_pair(dg, dh, da, db)
            if bad:
                violations.append({"x": list(x), "y": list(y), "failed": bad})
            if dg:
                e2 = squared_norm(da, db)
                worst_hg = max(worst_hg, Fraction(dh, dg))
                worst_ge = max(worst_ge, Fraction(dg * dg, e2))
                worst_eg = max(worst_eg, Fraction(e2, dg * dg))
    return MetricReport(n, len(pairs), seed, violations, worst_hg, worst_ge, worst_eg)


def lipschitz_slope_certificate(g: ApproximantGraph, base: LatticePoint | int) -> Fraction:
    """Largest edge slope of ``v -> d_g(base, v)``; 1 on any connected graph with an edge."""
    src = base if isinstance(base, int) else g.vertex_id(base)
    phi = shortest_paths(g, src)
    best = Fraction(0)
    for u, v, w in g.edges():
        if phi[u] is None or phi[v] is None:
            continue
        best = max(best, Fraction(abs(phi[u] - phi[v]), w))
    return best
