"""Winding numbers around triangle boundaries and the index pairing of a triple.

The pairing of a direct sum of circle modules with a non-vanishing function
``u`` is the signed sum of the windings of ``u`` around the module
boundaries (reversed modules count negatively).  For rational ``u`` the
winding around a triangle is the number of enclosed poles counted with
power, which is decided exactly in lattice coordinates.

On the pyramid the test functions are oriented lines with a power: the
winding around an oriented face is the signed crossing number of the line,
i.e. its linking number with the face boundary.
"""
from __future__ import annotations

import cmath
import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .holes import Domain, HoleFunction, Region
from .spectrum import (
    CircleModuleSpec,
    ExcludedPart,
    HolePart,
    TripleSpec,
    ZeroPart,
)
from .topology import (
    PlanarTriangle,
    PyramidFaceAddress,
    SpaceTriangle,
    TriAddress,
    _cross,
    _dot,
    _sub,
    contains,
    down_triangle,
    lattice_to_xy,
    locate_in_triangle,
    locate_point,
    outer_faces,
    pyramid_faces,
    tetrahedron,
    triangle,
    up_triangle,
)

#: hard cap on samples per boundary for the sampled winding number
MAX_SAMPLES = 1 << 20


class BoundaryPoleError(ValueError):
    """A pole (or crossing) lies on a triangle boundary."""


class RefinementError(RuntimeError):
    """Adaptive sampling could not resolve the argument increments."""


class SeparationError(ValueError):
    """A pole is not separated from the fractal at the requested depth."""


@dataclass(frozen=True)
class Pole:
    """A zero (power > 0) or pole (power < 0) at a lattice-frame point."""

    x: Fraction
    y: Fraction
    power: int = 1

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))
        if self.power == 0:
            raise ValueError("power must be nonzero")

    @property
    def point(self) -> tuple[Fraction, Fraction]:
        return self.x, self.y

    def complex(self) -> complex:
        return complex(*lattice_to_xy(self.x, self.y, 1.0))


@dataclass(frozen=True)
class RationalTestFunction:
    """``u(z) = prod (z - lambda_i)**p_i`` with exact lattice-frame ``lambda_i``.

    Coordinates are in the lattice frame in units of the root side ``s``:
    the point ``(x, y)`` is ``x*e1 + y*e2``.
    """

    poles: tuple[Pole, ...]

    @classmethod
    def at(cls, point, power: int = 1) -> "RationalTestFunction":
        return cls((Pole(point[0], point[1], power),))

    @classmethod
    def around_hole(cls, hole: TriAddress, power: int = 1) -> "RationalTestFunction":
        """``z - lambda`` with lambda the centroid of ``hole``."""
        return cls.at(down_triangle(hole).centroid(), power)

    def __mul__(self, other: "RationalTestFunction") -> "RationalTestFunction":
        return RationalTestFunction(self.poles + other.poles)

    def __call__(self, z: complex) -> complex:
        out = 1 + 0j
        for p in self.poles:
            out *= (z - p.complex()) ** p.power
        return out

    def to_json(self) -> dict:
        return {
            "schema": "test-function/1",
            "poles": [{"x": str(p.x), "y": str(p.y), "power": p.power} for p in self.poles],
        }

    @classmethod
    def from_json(cls, data: dict) -> "RationalTestFunction":
        return cls(
            tuple(
                Pole(Fraction(str(p["x"])), Fraction(str(p["y"])), int(p.get("power", 1)))
                for p in data["poles"]
            )
        )


@dataclass(frozen=True)
class SampledTestFunction:
    """A non-vanishing function given only by point evaluation (Cartesian, units of s)."""

    func: Callable[[complex], complex]

    def __call__(self, z: complex) -> complex:
        return self.func(z)


@dataclass(frozen=True)
class AxisTestFunction:
    """Pyramid test function: an oriented line ``p + t d`` with a power.

    Coordinates are in the frame of :data:`P0_VERTICES`.
    """

    point: tuple[Fraction, Fraction, Fraction]
    direction: tuple[Fraction, Fraction, Fraction]
    power: int = 1

    def __post_init__(self):
        object.__setattr__(self, "point", tuple(Fraction(c) for c in self.point))
        object.__setattr__(self, "direction", tuple(Fraction(c) for c in self.direction))
        if not any(self.direction):
            raise ValueError("direction must be nonzero")

    @classmethod
    def through_hole(cls, face: PyramidFaceAddress, power: int = 1) -> "AxisTestFunction":
        """The line from the centroid of face 4 through the centroid of hole face ``k``.

        It leaves the octahedron through the hole along the outward normal
        side, so its winding around that hole is ``+power``.
        """
        faces = dict(pyramid_faces(face.n, face.m))
        a = faces[face].centroid()
        b = faces[PyramidFaceAddress(face.n, face.m, 4)].centroid()
        return cls(a, _sub(a, b), power)


# -- winding numbers ------------------------------------------------------


def _integer_frame(p: Pole, tri: PlanarTriangle):
    """Pole and vertices on one integer grid, so the orientation tests stay in ints."""
    n = max(v.scale for v in tri.vertices)
    q = p.x.denominator * p.y.denominator
    pt = (p.x.numerator * p.y.denominator << n, p.y.numerator * p.x.denominator << n)
    verts = []
    for v in tri.vertices:
        a, b = v.at_scale(n)
        verts.append((a * q, b * q))
    return pt, verts


def _rational_winding(u: RationalTestFunction, tri: PlanarTriangle) -> int:
    total = 0
    for p in u.poles:
        pt, verts = _integer_frame(p, tri)
        loc = locate_in_triangle(pt, *verts)
        if loc == 0:
            raise BoundaryPoleError(f"pole {p.point} lies on the boundary of the triangle")
        if loc > 0:
            total += p.power
    return total


def _arg_step(u, z0: complex, z1: complex, w0: complex, w1: complex, budget: list[int]) -> float:
    stack = [(z0, z1, w0, w1)]
    total = 0.0
    while stack:
        a, b, wa, wb = stack.pop()
        step = cmath.phase(wb / wa)
        if abs(step) < math.pi / 2:
            total += step
            continue
        budget[0] -= 1
        if budget[0] <= 0:
            raise RefinementError("sampling cap reached with argument increments >= pi/2")
        mid = (a + b) / 2
        wm = u(mid)
        if wm == 0:
            raise BoundaryPoleError(f"u vanishes at {mid}")
        stack.append((mid, b, wm, wb))
        stack.append((a, mid, wa, wm))
    return total


def sampled_winding(u, corners: Sequence[complex], initial: int = 16) -> int:
    """Winding of ``u`` along the closed polygon ``corners`` by argument tracking.

    Each edge starts with ``initial`` samples and an interval is bisected
    until the argument increment across it is below pi/2.
    """
    budget = [MAX_SAMPLES]
    total = 0.0
    n = len(corners)
    for i in range(n):
        a, b = corners[i], corners[(i + 1) % n]
        pts = [a + (b - a) * t / initial for t in range(initial + 1)]
        vals = [u(z) for z in pts]
        if any(v == 0 for v in vals):
            raise BoundaryPoleError("u vanishes on the boundary")
        for z0, z1, w0, w1 in zip(pts, pts[1:], vals, vals[1:]):
            total += _arg_step(u, z0, z1, w0, w1, budget)
    turns = total / (2 * math.pi)
    w = round(turns)
    if abs(turns - w) > 1e-6:
        raise RefinementError(f"accumulated argument {turns} turns is not an integer")
    return int(w)


def winding_number(u, tri: PlanarTriangle, method: str = "auto") -> int:
    """Winding number of ``u`` around the positively oriented boundary of ``tri``."""
    if method not in ("auto", "exact", "sampled"):
        raise ValueError(f"unknown method {method!r}")
    if isinstance(u, RationalTestFunction) and method != "sampled":
        return _rational_winding(u, tri)
    if method == "exact":
        raise TypeError("exact winding needs a rational test function")
    if isinstance(u, RationalTestFunction):
        _rational_winding(u, tri)  # reject boundary poles before sampling
    corners = [complex(*v.xy(1.0)) for v in tri.vertices]
    return sampled_winding(u, corners)


def _crossing_sign(line: AxisTestFunction, tri: SpaceTriangle) -> int:
    """Signed crossing of an oriented line through an oriented space triangle."""
    p, d = line.point, line.direction
    v1, v2, v3 = tri.vertices
    nrm = tri.normal()
    dn = _dot(d, nrm)
    off = _dot(nrm, _sub(v1, p))
    if dn == 0:
        if off != 0:
            return 0
        raise BoundaryPoleError("test line lies in the plane of a face")
    t = off / dn
    q = tuple(pi + t * di for pi, di in zip(p, d))
    signs = [
        _dot(_cross(_sub(b, a), _sub(q, a)), nrm) for a, b in ((v1, v2), (v2, v3), (v3, v1))
    ]
    if any(s == 0 for s in signs) and all(s >= 0 for s in signs):
        raise BoundaryPoleError("test line crosses a face boundary")
    if all(s > 0 for s in signs):
        return 1 if dn > 0 else -1
    return 0


def space_winding(u: AxisTestFunction, tri: SpaceTriangle) -> int:
    return u.power * _crossing_sign(u, tri)


# -- pairing --------------------------------------------------------------


def _pole_holes(u: RationalTestFunction, depth: int) -> list[tuple[TriAddress | None, int]]:
    out = []
    for p in u.poles:
        kind, addr = locate_point(p.point, depth)
        if kind == "gasket":
            raise BoundaryPoleError(f"pole {p.point} lies on the gasket")
        if kind == "unresolved":
            raise SeparationError(f"pole {p.point} is not separated from the gasket at depth {depth}")
        out.append((addr, p.power))
    return out


def _module_encloses_hole(src, hole: TriAddress) -> bool:
    if src.is_up:
        return contains(src, hole)
    return src == hole


def index_pairing(spec: TripleSpec, u, depth: int = 12, method: str = "fast") -> int:
    """Index pairing of the class of ``spec`` with ``[u]``.

    ``method="fast"`` locates each pole in the hole hierarchy and sums the
    signed multiplicities of the modules whose triangle encloses it.
    ``method="brute"`` evaluates the winding of ``u`` around every module
    boundary up to level ``depth`` with exact point-in-triangle tests.
    """
    if spec.domain is Domain.PYRAMID:
        if not isinstance(u, AxisTestFunction):
            raise TypeError("pyramid pairings take an AxisTestFunction")
        if method == "brute":
            return _pyramid_pairing(spec, u, depth)
        if method != "fast":
            raise ValueError(f"unknown method {method!r}")
        return _pyramid_pairing_pruned(spec, u, depth)
    if not isinstance(u, RationalTestFunction):
        raise TypeError("gasket pairings take a RationalTestFunction")
    located = _pole_holes(u, depth)
    if method == "brute":
        total = 0
        seen: dict = {}  # a triangle can carry several modules
        for mod, sign in spec.summands(depth):
            w = seen.get(mod.source)
            if w is None:
                w = seen[mod.source] = winding_number(u, triangle(mod.source))
            total += sign * mod.signed_multiplicity * w
        return total
    if method != "fast":
        raise ValueError(f"unknown method {method!r}")
    total = 0
    for hole, power in located:
        if hole is None:
            continue
        total += power * _signed_count(spec, hole)
    return total


def _signed_count(spec: TripleSpec, hole: TriAddress) -> int:
    """Signed number of modules of ``spec`` whose triangle encloses ``hole``."""
    total = 0
    for p in spec.parts:
        if isinstance(p, ZeroPart):
            continue  # reversed Delta_{0,1} cancels the hole's own module
        if isinstance(p, ExcludedPart):
            sign = -1 if p.address.is_up else 1
            if _module_encloses_hole(p.address, hole):
                total -= sign
        elif isinstance(p, HolePart):
            total += p.f(hole)
        else:
            for c in p.modules:
                if _module_encloses_hole(c.source, hole):
                    total += c.signed_multiplicity
    return total


def _all_space_faces(max_n: int):
    for k, tri in outer_faces():
        yield ("pyramid-outer", k), tri
    for n in range(1, max_n + 1):
        for m in range(1, 4 ** (n - 1) + 1):
            yield from pyramid_faces(n, m)


def _pyramid_pairing(spec: TripleSpec, u: AxisTestFunction, depth: int) -> int:
    faces = dict(_all_space_faces(depth))
    total = 0
    for mod, sign in spec.summands(depth):
        total += sign * mod.signed_multiplicity * space_winding(u, faces[mod.source])
    return total


def _face_multiplicity(spec: TripleSpec, face) -> int:
    """Signed number of modules of a pyramid spec on one face."""
    total = 0
    for p in spec.parts:
        if isinstance(p, ZeroPart):
            total += 1
        elif isinstance(p, HolePart):
            if isinstance(face, PyramidFaceAddress) and face.in_hsp:
                total += p.f(face)
        elif not isinstance(p, ExcludedPart):
            total += sum(c.signed_multiplicity for c in p.modules if c.source == face)
    return total


def line_meets_tetrahedron(u: AxisTestFunction, verts: Sequence) -> bool:
    """Whether the line ``p + t d`` meets the closed tetrahedron, exactly."""
    p, d = u.point, u.direction
    lo, hi = None, None
    for i in range(4):
        a, b, c = (verts[j] for j in range(4) if j != i)
        nrm = _cross(_sub(b, a), _sub(c, a))
        if _dot(nrm, _sub(verts[i], a)) > 0:
            nrm = _sub((0, 0, 0), nrm)
        # outward normal: the tetrahedron is nrm . (x - a) <= 0
        dn, off = _dot(nrm, d), _dot(nrm, _sub(a, p))
        if dn == 0:
            if off < 0:
                return False
        elif dn > 0:
            hi = off / dn if hi is None else min(hi, off / dn)
        else:
            lo = off / dn if lo is None else max(lo, off / dn)
    return lo is None or hi is None or lo <= hi


def _pyramid_pairing_pruned(spec: TripleSpec, u: AxisTestFunction, depth: int) -> int:
    """Only octahedra inside tetrahedra that the line meets can be crossed."""
    total = sum(_face_multiplicity(spec, ("pyramid-outer", k)) * space_winding(u, tri) for k, tri in outer_faces())
    stack: list[tuple[int, ...]] = [()]
    while stack:
        path = stack.pop()
        if len(path) >= depth or not line_meets_tetrahedron(u, tetrahedron(path)):
            continue
        addr = PyramidFaceAddress.from_path(path, 1)
        for face, tri in pyramid_faces(addr.n, addr.m):
            mult = _face_multiplicity(spec, face)
            if mult:
                total += mult * space_winding(u, tri)
        stack.extend(path + (d,) for d in range(4))
    return total


def octahedron_winding_sum(u: AxisTestFunction, n: int, m: int) -> int:
    """Oriented winding sum of ``u`` over the eight faces of one octahedron."""
    return sum(space_winding(u, tri) for _addr, tri in pyramid_faces(n, m))


def crossed_holes(u: AxisTestFunction, depth: int) -> dict[PyramidFaceAddress, int]:
    """Signed crossings of ``u`` with non-horizontal hole faces up to ``depth``."""
    out = {}
    for n in range(1, depth + 1):
        for m in range(1, 4 ** (n - 1) + 1):
            for addr, tri in pyramid_faces(n, m):
                if addr.in_hsp:
                    w = space_winding(u, tri)
                    if w:
                        out[addr] = w
    return out


def verify_winding_additivity(u: RationalTestFunction, up: TriAddress, depth: int) -> bool:
    """Winding around ``up`` equals the sum of windings around its holes to ``depth``."""
    lhs = winding_number(u, up_triangle(up))
    rhs = 0
    n = up.level
    for m in range(n + 1, depth + 1):
        for h in _holes_below(up, m):
            rhs += winding_number(u, down_triangle(h))
    return lhs == rhs


def _holes_below(up: TriAddress, m: int):
    for tail in itertools.product(range(3), repeat=m - 1 - up.level):
        yield TriAddress.down(m, up.path + tail)


def khomology_class(spec: TripleSpec) -> HoleFunction:
    """The hole function ``f`` with ``pairing(spec, z - lambda_h) = f(h)`` for every hole."""
    f = HoleFunction.zero(spec.domain)
    for p in spec.parts:
        if isinstance(p, ZeroPart):
            continue
        if isinstance(p, ExcludedPart):
            if p.address.is_up:
                f = f + HoleFunction.constant(1)
            else:
                f = f + HoleFunction.indicator(Region.hole(p.address), value=-1)
        elif isinstance(p, HolePart):
            f = f + p.f
        else:
            for c in p.modules:
                f = f + _module_class(c, spec.domain)
    return f


def _module_class(c: CircleModuleSpec, domain: Domain) -> HoleFunction:
    src = c.source
    if isinstance(src, TriAddress):
        region = Region.cell(src) if src.is_up else Region.hole(src)
        return HoleFunction.indicator(region, "gasket", c.signed_multiplicity)
    if isinstance(src, PyramidFaceAddress) and src.in_hsp:
        return HoleFunction.indicator(Region.hole(src), "pyramid", c.signed_multiplicity)
    raise ValueError(f"module on {src} has no coordinate in the non-horizontal hole basis")


# -- random generators for checks ----------------------------------------


def random_hole_point(rng: random.Random, max_level: int) -> tuple[TriAddress, tuple[Fraction, Fraction]]:
    """A random hole of level ``<= max_level`` and a random rational point inside it."""
    m = rng.randint(1, max_level)
    hole = TriAddress.down(m, [rng.randrange(3) for _ in range(m - 1)])
    tri = down_triangle(hole)
    # random barycentric weights with positive integer entries
    w = [rng.randint(1, 9) for _ in range(3)]
    tot = sum(w)
    vs = tri.frac_vertices()
    pt = tuple(sum(Fraction(wi, tot) * v[i] for wi, v in zip(w, vs)) for i in range(2))
    return hole, pt


def random_test_function(
    rng: random.Random, max_level: int, n_poles: int = 5, outside: bool = False
) -> RationalTestFunction:
    """Poles in distinct random holes, powers in -3..3 excluding 0."""
    poles, used = [], set()
    while len(poles) < n_poles:
        hole, pt = random_hole_point(rng, max_level)
        if hole in used:
            continue
        used.add(hole)
        power = rng.choice([-3, -2, -1, 1, 2, 3])
        poles.append(Pole(pt[0], pt[1], power))
    if outside:
        poles.append(Pole(Fraction(rng.randint(2, 5)), Fraction(rng.randint(1, 4), 3), 1))
    return RationalTestFunction(tuple(poles))


def random_axis(rng: random.Random, attempts: int = 100) -> AxisTestFunction:
    """A random rational line with generic direction."""
    for _ in range(attempts):
        p = tuple(Fraction(rng.randint(-40, 40), rng.randint(1, 17)) for _ in range(3))
        d = tuple(Fraction(rng.randint(-30, 30), rng.randint(1, 13)) for _ in range(3))
        if any(d):
            return AxisTestFunction(p, d, rng.choice([-2, -1, 1, 2]))
    raise RuntimeError("could not draw a line")
