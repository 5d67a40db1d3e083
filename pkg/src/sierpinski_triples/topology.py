"""Exact geometry of the gasket's triangle hierarchy and the pyramid's faces.

Planar points live on the triangular lattice ``(a*e1 + b*e2) * s / 2**n`` with
``e1 = (1, 0)`` and ``e2 = (1/2, sqrt(3)/2)``.  Orientation predicates are
affine invariant and the lattice frame is positively oriented, so every
containment test runs on integer or rational lattice coordinates and never
touches ``sqrt(3)``.

Digit convention for addresses: 0 = bottom-left, 1 = bottom-right, 2 = top.
``Delta_{n,j}`` has ``j = 1 + int(path, base 3)``; the hole ``nabla_{m,k}`` is the
middle triangle of ``Delta_{m-1, k}``.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

#: side of Delta_{0,1}; circumference 2*pi
GASKET_SIDE = 2 * math.pi / 3
#: side of the pyramid's initial tetrahedron P_0
PYRAMID_SIDE = 2 * math.pi / 3

_CORNER = {0: (0, 0), 1: (1, 0), 2: (0, 1)}


class Orientation(enum.Enum):
    UP = "up"
    DOWN = "down"


@dataclass(frozen=True, eq=False)
class LatticePoint:
    """The planar point ``(a*e1 + b*e2) * s * 2**-scale``."""

    a: int
    b: int
    scale: int = 0

    def __post_init__(self):
        if self.scale < 0:
            raise ValueError("scale must be nonnegative")

    def _key(self) -> tuple[int, int, int]:
        a, b, n = self.a, self.b, self.scale
        while n > 0 and a % 2 == 0 and b % 2 == 0:
            a, b, n = a // 2, b // 2, n - 1
        return a, b, n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LatticePoint):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"LatticePoint({self.a}, {self.b}, scale={self.scale})"

    def at_scale(self, n: int) -> tuple[int, int]:
        """Integer coordinates at scale ``n``; raises if the point is finer."""
        a, b, k = self._key()
        if k > n:
            raise ValueError(f"{self!r} is not a scale-{n} lattice point")
        f = 1 << (n - k)
        return a * f, b * f

    def coords(self) -> tuple[Fraction, Fraction]:
        """Lattice-frame coordinates in units of ``s``."""
        d = 1 << self.scale
        return Fraction(self.a, d), Fraction(self.b, d)

    def xy(self, side: float = GASKET_SIDE) -> tuple[float, float]:
        x, y = self.coords()
        return lattice_to_xy(x, y, side)


def lattice_to_xy(x, y, side: float = GASKET_SIDE) -> tuple[float, float]:
    """Cartesian coordinates of the lattice-frame point ``x*e1 + y*e2`` (units of ``s``)."""
    return (float(x) + 0.5 * float(y)) * side, float(y) * (math.sqrt(3) / 2) * side


def squared_norm(da, db):
    """``|da*e1 + db*e2|**2`` in units of the lattice step squared."""
    return da * da + da * db + db * db


def orient2d(p, q, r) -> int:
    """Sign of the turn p -> q -> r; exact for int/Fraction inputs."""
    det = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (det > 0) - (det < 0)


def locate_in_triangle(pt, v1, v2, v3) -> int:
    """1 strictly inside, 0 on the boundary, -1 outside (ccw vertices)."""
    s = (orient2d(v1, v2, pt), orient2d(v2, v3, pt), orient2d(v3, v1, pt))
    if min(s) > 0:
        return 1
    if min(s) < 0:
        return -1
    return 0


@dataclass(frozen=True)
class TriAddress:
    """Address of ``Delta_{n,j}`` (UP) or of the hole ``nabla_{m,k}`` (DOWN)."""

    orientation: Orientation
    level: int
    path: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "path", tuple(int(d) for d in self.path))
        if any(d not in (0, 1, 2) for d in self.path):
            raise ValueError(f"path digits must be 0, 1 or 2: {self.path}")
        if self.orientation is Orientation.UP:
            if self.level < 0 or len(self.path) != self.level:
                raise ValueError(f"up triangle at level {self.level} needs {self.level} digits")
        else:
            if self.level < 1 or len(self.path) != self.level - 1:
                raise ValueError(f"hole at level {self.level} needs {self.level - 1} digits")

    @classmethod
    def up(cls, level: int, path: Sequence[int] = ()) -> "TriAddress":
        return cls(Orientation.UP, level, tuple(path))

    @classmethod
    def down(cls, level: int, path: Sequence[int] = ()) -> "TriAddress":
        return cls(Orientation.DOWN, level, tuple(path))

    @classmethod
    def from_index(cls, orientation: Orientation, level: int, index: int) -> "TriAddress":
        ndig = level if orientation is Orientation.UP else level - 1
        if not 1 <= index <= 3**ndig:
            raise ValueError(f"index {index} out of range at level {level}")
        return cls(orientation, level, _digits(index - 1, 3, ndig))

    @property
    def is_up(self) -> bool:
        return self.orientation is Orientation.UP

    @property
    def index(self) -> int:
        """Index ``j`` (UP) or ``k`` (DOWN), starting at 1."""
        return 1 + _value(self.path, 3)

    @property
    def parent(self) -> "TriAddress":
        """Enclosing up triangle one level coarser (for holes: the cut triangle)."""
        if self.is_up:
            if self.level == 0:
                raise ValueError("the root triangle has no parent")
            return TriAddress.up(self.level - 1, self.path[:-1])
        return TriAddress.up(self.level - 1, self.path)

    def to_json(self) -> dict:
        return {"orient": self.orientation.value, "level": self.level, "path": list(self.path)}

    @classmethod
    def from_json(cls, data: dict) -> "TriAddress":
        return cls(Orientation(data["orient"]), int(data["level"]), tuple(data["path"]))

    def __str__(self) -> str:
        sym = "Delta" if self.is_up else "nabla"
        return f"{sym}_{{{self.level},{self.index}}}"


def _digits(value: int, base: int, width: int) -> tuple[int, ...]:
    out = []
    for _ in range(width):
        value, r = divmod(value, base)
        out.append(r)
    if value:
        raise ValueError("value does not fit")
    return tuple(reversed(out))


def _value(digits: Sequence[int], base: int) -> int:
    v = 0
    for d in digits:
        v = v * base + d
    return v


@dataclass(frozen=True)
class PlanarTriangle:
    """Equilateral lattice triangle, vertices counterclockwise."""

    v1: LatticePoint
    v2: LatticePoint
    v3: LatticePoint
    side: Fraction

    @property
    def vertices(self) -> tuple[LatticePoint, LatticePoint, LatticePoint]:
        return self.v1, self.v2, self.v3

    def frac_vertices(self) -> list[tuple[Fraction, Fraction]]:
        return [v.coords() for v in self.vertices]

    def locate(self, point) -> int:
        """1 inside, 0 on the boundary, -1 outside; ``point`` in lattice units of ``s``."""
        return locate_in_triangle(tuple(Fraction(c) for c in point), *self.frac_vertices())

    def centroid(self) -> tuple[Fraction, Fraction]:
        vs = self.frac_vertices()
        return sum(v[0] for v in vs) / 3, sum(v[1] for v in vs) / 3

    def squared_sides(self) -> tuple[Fraction, ...]:
        vs = self.frac_vertices()
        return tuple(
            squared_norm(q[0] - p[0], q[1] - p[1]) for p, q in zip(vs, vs[1:] + vs[:1])
        )

    def xy(self, side: float = GASKET_SIDE) -> list[tuple[float, float]]:
        return [v.xy(side) for v in self.vertices]


def _up_origin(path: Sequence[int]) -> tuple[int, int]:
    a = b = 0
    for d in path:
        ca, cb = _CORNER[d]
        a, b = 2 * a + ca, 2 * b + cb
    return a, b


def up_triangle(addr: TriAddress) -> PlanarTriangle:
    if not addr.is_up:
        raise ValueError("up_triangle needs an UP address")
    n = addr.level
    a, b = _up_origin(addr.path)
    return PlanarTriangle(
        LatticePoint(a, b, n),
        LatticePoint(a + 1, b, n),
        LatticePoint(a, b + 1, n),
        Fraction(1, 2**n),
    )


def down_triangle(addr: TriAddress) -> PlanarTriangle:
    if addr.is_up:
        raise ValueError("down_triangle needs a DOWN address")
    m = addr.level
    a, b = _up_origin(addr.path)
    a, b = 2 * a, 2 * b
    # edge midpoints of the parent, ccw: bottom, right, left
    return PlanarTriangle(
        LatticePoint(a + 1, b, m),
        LatticePoint(a + 1, b + 1, m),
        LatticePoint(a, b + 1, m),
        Fraction(1, 2**m),
    )


def triangle(addr: TriAddress) -> PlanarTriangle:
    return up_triangle(addr) if addr.is_up else down_triangle(addr)


def enumerate_up(level: int) -> Iterator[TriAddress]:
    for path in itertools.product(range(3), repeat=level):
        yield TriAddress.up(level, path)


def enumerate_holes(max_level: int, min_level: int = 1) -> list[TriAddress]:
    """All holes with ``min_level <= m <= max_level`` in (m, k) order."""
    if max_level < 1:
        raise ValueError("max_level must be at least 1")
    return [
        TriAddress.down(m, path)
        for m in range(max(1, min_level), max_level + 1)
        for path in itertools.product(range(3), repeat=m - 1)
    ]


def contains(up: TriAddress, down: TriAddress) -> bool:
    """Whether the hole ``down`` lies inside the closed up triangle ``up``."""
    if not up.is_up or down.is_up:
        raise ValueError("contains(up, down) takes an UP and a DOWN address")
    n = up.level
    return down.level >= n + 1 and down.path[:n] == up.path


def locate_point(point, max_level: int) -> tuple[str, TriAddress | None]:
    """Classify a lattice-frame point against the hole hierarchy.

    Returns ``("outside", None)`` outside Delta_{0,1}, ``("hole", addr)`` when
    the point is strictly inside a hole of level ``<= max_level``,
    ``("gasket", None)`` if it lies on an edge of the construction, and
    ``("unresolved", up_addr)`` if it is still inside an up triangle of level
    ``max_level`` without being separated from the gasket.
    """
    x, y = Fraction(point[0]), Fraction(point[1])
    loc = locate_in_triangle((x, y), (0, 0), (1, 0), (0, 1))
    if loc < 0:
        return "outside", None
    if loc == 0:
        return "gasket", None
    path: list[int] = []
    half = Fraction(1, 2)
    for m in range(1, max_level + 1):
        s = x + y
        if x < half and y < half and s > half:
            return "hole", TriAddress.down(m, path)
        if s < half:
            d = 0
        elif x > half:
            d = 1
        elif y > half:
            d = 2
        else:
            return "gasket", None
        ca, cb = _CORNER[d]
        x, y = 2 * x - ca, 2 * y - cb
        path.append(d)
    return "unresolved", TriAddress.up(max_level, path)


# --------------------------------------------------------------------------
# Sierpinski pyramid

Vec3 = tuple[Fraction, Fraction, Fraction]

#: P_0 in a frame where its side is 2*sqrt(2) units; vertex 0 is the apex and
#: the face opposite it is horizontal.
P0_VERTICES: tuple[Vec3, ...] = tuple(
    tuple(Fraction(c) for c in v)
    for v in ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1))
)
_P0_SQUARED_SIDE = Fraction(8)


def _sub(p, q):
    return tuple(a - b for a, b in zip(p, q))


def _add(p, q):
    return tuple(a + b for a, b in zip(p, q))


def _mid(p, q):
    return tuple((a + b) / 2 for a, b in zip(p, q))


def _dot(p, q):
    return sum(a * b for a, b in zip(p, q))


def _cross(p, q):
    return (
        p[1] * q[2] - p[2] * q[1],
        p[2] * q[0] - p[0] * q[2],
        p[0] * q[1] - p[1] * q[0],
    )


def _centroid(points):
    n = len(points)
    return tuple(sum(p[i] for p in points) / n for i in range(3))


@dataclass(frozen=True)
class PyramidFaceAddress:
    """Face ``Delta_{n,m,k}`` of the octahedron cut from ``P_{n-1,m}``."""

    n: int
    m: int
    k: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if not 1 <= self.m <= 4 ** (self.n - 1):
            raise ValueError(f"m={self.m} out of range for n={self.n}")
        if not 1 <= self.k <= 8:
            raise ValueError("k must be in 1..8")

    @property
    def path(self) -> tuple[int, ...]:
        """Base-4 ancestor path of the tetrahedron ``P_{n-1,m}``."""
        return _digits(self.m - 1, 4, self.n - 1)

    @property
    def in_hsp(self) -> bool:
        return self.k <= 3

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "k": self.k}

    @classmethod
    def from_json(cls, data: dict) -> "PyramidFaceAddress":
        return cls(int(data["n"]), int(data["m"]), int(data["k"]))

    @classmethod
    def from_path(cls, path: Sequence[int], k: int) -> "PyramidFaceAddress":
        return cls(len(path) + 1, 1 + _value(path, 4), k)


@dataclass(frozen=True)
class SpaceTriangle:
    """Planar triangle in space, boundary ccw seen from its outward normal."""

    v1: Vec3
    v2: Vec3
    v3: Vec3
    level: int

    @property
    def vertices(self) -> tuple[Vec3, Vec3, Vec3]:
        return self.v1, self.v2, self.v3

    def normal(self) -> Vec3:
        return _cross(_sub(self.v2, self.v1), _sub(self.v3, self.v1))

    def squared_sides(self) -> tuple[Fraction, ...]:
        vs = self.vertices
        return tuple(_dot(_sub(q, p), _sub(q, p)) for p, q in zip(vs, vs[1:] + vs[:1]))

    def side_length(self, side: float = PYRAMID_SIDE) -> float:
        """Side in the same units as ``side`` (the edge of P_0)."""
        return math.sqrt(float(self.squared_sides()[0] / _P0_SQUARED_SIDE)) * side

    def centroid(self) -> Vec3:
        return _centroid(self.vertices)


def _outward(tri: Sequence[Vec3], inside: Vec3, level: int) -> SpaceTriangle:
    a, b, c = tri
    nrm = _cross(_sub(b, a), _sub(c, a))
    if _dot(nrm, _sub(a, inside)) < 0:
        b, c = c, b
    return SpaceTriangle(a, b, c, level)


def tetrahedron(path: Sequence[int]) -> tuple[Vec3, ...]:
    """Vertices of the tetrahedron reached by the base-4 ``path`` (apex first)."""
    verts = P0_VERTICES
    for d in path:
        if d not in (0, 1, 2, 3):
            raise ValueError("pyramid path digits are 0..3")
        verts = tuple(_mid(verts[d], v) for v in verts)
    return verts


def outer_faces() -> list[tuple[int, SpaceTriangle]]:
    """The four faces ``Delta_{0,k}`` of P_0, k = 1..4 by opposite vertex 1, 2, 3, 0."""
    c = _centroid(P0_VERTICES)
    out = []
    for k, opp in enumerate((1, 2, 3, 0), start=1):
        tri = [v for i, v in enumerate(P0_VERTICES) if i != opp]
        out.append((k, _outward(tri, c, 0)))
    return out


def pyramid_faces(n: int, m: int) -> list[tuple[PyramidFaceAddress, SpaceTriangle]]:
    """The eight faces of the octahedron cut from ``P_{n-1,m}``, classified.

    k = 1, 2, 3: holes in the oblique faces opposite vertices 1, 2, 3;
    k = 4: hole in the horizontal face; k = 5..8: faces cutting off the
    corner tetrahedra at vertices 0..3.  All are oriented by the outward
    normal of the octahedron, which agrees with the tetrahedron's outward
    normal on the four hole faces.
    """
    addr0 = PyramidFaceAddress(n, m, 1)
    verts = tetrahedron(addr0.path)
    center = _centroid(verts)
    mid = {(i, j): _mid(verts[i], verts[j]) for i in range(4) for j in range(4) if i < j}

    def M(i, j):
        return mid[(min(i, j), max(i, j))]

    out = []
    for k, opp in enumerate((1, 2, 3, 0), start=1):
        others = [i for i in range(4) if i != opp]
        tri = [M(others[0], others[1]), M(others[1], others[2]), M(others[0], others[2])]
        out.append((PyramidFaceAddress(n, m, k), _outward(tri, center, n)))
    for i in range(4):
        others = [j for j in range(4) if j != i]
        tri = [M(i, j) for j in others]
        out.append((PyramidFaceAddress(n, m, 5 + i), _outward(tri, center, n)))
    return out


def enumerate_octahedra(max_n: int) -> Iterator[tuple[int, int]]:
    for n in range(1, max_n + 1):
        for m in range(1, 4 ** (n - 1) + 1):
            yield n, m
