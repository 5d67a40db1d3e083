import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sierpinski_triples.topology import (
    Orientation,
    P0_VERTICES,
    PyramidFaceAddress,
    TriAddress,
    contains,
    down_triangle,
    enumerate_holes,
    enumerate_octahedra,
    enumerate_up,
    locate_point,
    outer_faces,
    pyramid_faces,
    tetrahedron,
    up_triangle,
)

SQ3 = math.sqrt(3)


def _xy_inside(p, tri, eps=1e-12):
    """Float point-in-triangle via barycentric coordinates (independent oracle)."""
    (x1, y1), (x2, y2), (x3, y3) = tri
    det = (y2 - y3) * (x1 - x3) + (x3 - x2) * (y1 - y3)
    l1 = ((y2 - y3) * (p[0] - x3) + (x3 - x2) * (p[1] - y3)) / det
    l2 = ((y3 - y1) * (p[0] - x3) + (x1 - x3) * (p[1] - y3)) / det
    l3 = 1 - l1 - l2
    return min(l1, l2, l3) > -eps


def _float_up(path):
    """Cartesian corners of an up triangle by direct IFS iteration."""
    corners = [(0.0, 0.0), (1.0, 0.0), (0.5, SQ3 / 2)]
    tri = list(corners)
    for d in path:
        anchor = tri[d]
        tri = [((anchor[0] + v[0]) / 2, (anchor[1] + v[1]) / 2) for v in tri]
    return tri


def _float_hole(path):
    a, b, c = _float_up(path)
    mid = lambda p, q: ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
    return [mid(a, b), mid(b, c), mid(a, c)]


def _cart(pt):
    x, y = float(pt[0]), float(pt[1])
    return x + y / 2, y * SQ3 / 2


# [TRIVIAL] counts
@pytest.mark.parametrize("n", range(0, 6))
def test_up_triangle_counts(n):
    assert len(list(enumerate_up(n))) == 3**n


@pytest.mark.parametrize("m", range(1, 7))
def test_hole_counts(m):
    assert len(enumerate_holes(m, m)) == 3 ** (m - 1)
    assert len(enumerate_holes(m)) == (3**m - 1) // 2


# [DERIVED] lattice geometry vs a floating IFS construction
@pytest.mark.parametrize("n", range(0, 5))
def test_up_triangles_match_float_ifs(n):
    for addr in enumerate_up(n):
        exact = [_cart(v.coords()) for v in up_triangle(addr).vertices]
        ref = _float_up(addr.path)
        for p, q in zip(exact, ref):
            assert math.dist(p, q) < 1e-12
        assert all(s == Fraction(1, 4**n) for s in up_triangle(addr).squared_sides())


@pytest.mark.parametrize("m", range(1, 5))
def test_holes_match_float_ifs(m):
    for addr in enumerate_holes(m, m):
        exact = {tuple(round(c, 12) for c in _cart(v.coords())) for v in down_triangle(addr).vertices}
        ref = {tuple(round(c, 12) for c in v) for v in _float_hole(addr.path)}
        assert exact == ref


def test_containment_matches_geometry():
    for n in range(0, 4):
        for up in enumerate_up(n):
            ref_tri = _float_up(up.path)
            for hole in enumerate_holes(5):
                c = _cart(down_triangle(hole).centroid())
                # a hole inside the closed up triangle has its centroid inside it
                # and is strictly smaller (level > n)
                geometric = _xy_inside(c, ref_tri, eps=-1e-12) and hole.level > n
                assert contains(up, hole) == geometric


def test_contains_rejects_wrong_orientation():
    with pytest.raises(ValueError):
        contains(TriAddress.down(1), TriAddress.down(2, [0]))


def test_reference_examples():
    # [TRIVIAL] the first-level hole is the middle triangle with vertices at edge midpoints
    h = down_triangle(TriAddress.down(1))
    assert sorted(v.coords() for v in h.vertices) == sorted(
        [(Fraction(1, 2), Fraction(0)), (Fraction(1, 2), Fraction(1, 2)), (Fraction(0), Fraction(1, 2))]
    )
    assert contains(TriAddress.up(1, [0]), TriAddress.down(2, [0]))
    assert not contains(TriAddress.up(1, [0]), TriAddress.down(1))


@given(st.lists(st.integers(0, 2), max_size=8), st.booleans())
def test_address_json_roundtrip(path, up):
    addr = TriAddress.up(len(path), path) if up else TriAddress.down(len(path) + 1, path)
    assert TriAddress.from_json(addr.to_json()) == addr
    assert TriAddress.from_index(addr.orientation, addr.level, addr.index) == addr


def test_address_validation():
    with pytest.raises(ValueError):
        TriAddress.up(2, [0])
    with pytest.raises(ValueError):
        TriAddress.down(1, [0])
    with pytest.raises(ValueError):
        TriAddress.up(1, [3])


# [DERIVED] point location vs float hole membership
def test_locate_point_random():
    rng = random.Random(3)
    for _ in range(400):
        x, y = Fraction(rng.randrange(1, 2**10), 2**10 * 3), Fraction(rng.randrange(1, 2**10), 2**10 * 7)
        kind, addr = locate_point((x, y), 6)
        c = _cart((x, y))
        if kind == "outside":
            assert x + y > 1
        elif kind == "hole":
            assert _xy_inside(c, _float_hole(addr.path), eps=-1e-12)
            # and in no coarser hole
            for m in range(1, addr.level):
                for h in enumerate_holes(m, m):
                    assert not _xy_inside(c, _float_hole(h.path), eps=1e-12)
        else:
            assert kind in ("gasket", "unresolved")


def test_locate_point_edges():
    assert locate_point((Fraction(1, 2), Fraction(0)), 5) == ("gasket", None)
    assert locate_point((Fraction(2), Fraction(0)), 5) == ("outside", None)
    assert locate_point((Fraction(1, 3), Fraction(1, 3)), 5) == ("hole", TriAddress.down(1))


# -- pyramid ----------------------------------------------------------------


def _sq(p, q):
    return sum((a - b) ** 2 for a, b in zip(p, q))


def test_p0_is_regular():
    for p, q in itertools.combinations(P0_VERTICES, 2):
        assert _sq(p, q) == 8


@pytest.mark.parametrize("n", range(0, 4))
def test_subtetrahedra_are_regular_and_nested(n):
    for path in itertools.product(range(4), repeat=n):
        vs = tetrahedron(path)
        assert all(_sq(p, q) == Fraction(8, 4**n) for p, q in itertools.combinations(vs, 2))
        if n:
            parent = tetrahedron(path[:-1])
            assert vs[path[-1]] == parent[path[-1]]


def test_outer_faces_oriented_outward():
    c = tuple(sum(v[i] for v in P0_VERTICES) / 4 for i in range(3))
    for k, tri in outer_faces():
        nrm = tri.normal()
        assert sum(a * (b - cc) for a, b, cc in zip(nrm, tri.centroid(), c)) > 0
    # face 4 (opposite the apex) is horizontal in the sense of being opposite vertex 0
    face4 = dict(outer_faces())[4]
    assert P0_VERTICES[0] not in face4.vertices


@pytest.mark.parametrize("n", range(1, 4))
def test_octahedron_faces(n):
    for _n, m in enumerate_octahedra(n):
        if _n != n:
            continue
        faces = pyramid_faces(n, m)
        assert [f.k for f, _t in faces] == list(range(1, 9))
        verts = tetrahedron(PyramidFaceAddress(n, m, 1).path)
        center = tuple(sum(v[i] for v in verts) / 4 for i in range(3))
        for addr, tri in faces:
            assert all(s == Fraction(8, 4**n) for s in tri.squared_sides())
            nrm = tri.normal()
            assert sum(a * (b - cc) for a, b, cc in zip(nrm, tri.centroid(), center)) > 0
            assert addr.in_hsp == (addr.k <= 3)
        # the twelve octahedron vertices are the six edge midpoints, each on four faces
        incid = {}
        for _a, tri in faces:
            for v in tri.vertices:
                incid[v] = incid.get(v, 0) + 1
        assert len(incid) == 6 and set(incid.values()) == {4}


def test_octahedron_count():
    assert sum(1 for _ in enumerate_octahedra(3)) == 1 + 4 + 16


@given(st.lists(st.integers(0, 3), max_size=5), st.integers(1, 8))
def test_face_address_roundtrip(path, k):
    a = PyramidFaceAddress.from_path(path, k)
    assert a.path == tuple(path)
    assert PyramidFaceAddress.from_json(a.to_json()) == a


def test_orientation_enum():
    assert Orientation("up") is Orientation.UP
