import cmath
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sierpinski_triples.holes import HoleFunction, example_313, iter_holes, random_hole_function
from sierpinski_triples.pairing import (
    AxisTestFunction,
    BoundaryPoleError,
    Pole,
    RationalTestFunction,
    SampledTestFunction,
    SeparationError,
    crossed_holes,
    index_pairing,
    khomology_class,
    line_meets_tetrahedron,
    octahedron_winding_sum,
    random_axis,
    random_test_function,
    sampled_winding,
    space_winding,
    verify_winding_additivity,
    winding_number,
)
from sierpinski_triples.spectrum import CircleModuleSpec, ModuleOrientation, TripleSpec
from sierpinski_triples.topology import (
    PyramidFaceAddress,
    TriAddress,
    down_triangle,
    enumerate_holes,
    enumerate_octahedra,
    enumerate_up,
    pyramid_faces,
    tetrahedron,
    triangle,
    up_triangle,
)

seeds = st.integers(0, 2**32 - 1)


def float_inside(pt, tri):
    """Float barycentric point-in-triangle on lattice coordinates (oracle)."""
    (x1, y1), (x2, y2), (x3, y3) = [(float(a), float(b)) for a, b in tri.frac_vertices()]
    x, y = float(pt[0]), float(pt[1])
    det = (y2 - y3) * (x1 - x3) + (x3 - x2) * (y1 - y3)
    l1 = ((y2 - y3) * (x - x3) + (x3 - x2) * (y - y3)) / det
    l2 = ((y3 - y1) * (x - x3) + (x1 - x3) * (y - y3)) / det
    return min(l1, l2, 1 - l1 - l2) > 0


def float_winding(u, tri):
    return sum(p.power for p in u.poles if float_inside((p.x, p.y), tri))


# -- winding numbers --------------------------------------------------------


def test_winding_examples():
    u = RationalTestFunction.around_hole(TriAddress.down(1))
    assert winding_number(u, down_triangle(TriAddress.down(1))) == 1
    assert winding_number(u, down_triangle(TriAddress.down(2, [0]))) == 0
    assert winding_number(u, up_triangle(TriAddress.up(0))) == 1
    lam = down_triangle(TriAddress.down(2, [0])).centroid()
    mu = down_triangle(TriAddress.down(3, [1, 2])).centroid()
    v = RationalTestFunction.at(lam, 3) * RationalTestFunction.at(mu, -1)
    for tri, w in ((down_triangle(TriAddress.down(2, [0])), 3), (down_triangle(TriAddress.down(3, [1, 2])), -1)):
        assert winding_number(v, tri, "exact") == w
        assert winding_number(v, tri, "sampled") == w


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_exact_winding_matches_float_oracle(seed):
    rng = random.Random(seed)
    u = random_test_function(rng, 5, n_poles=4, outside=True)
    for _ in range(10):
        lvl = rng.randint(0, 5)
        if rng.random() < 0.5:
            tri = up_triangle(TriAddress.up(lvl, [rng.randrange(3) for _ in range(lvl)]))
        else:
            tri = down_triangle(TriAddress.down(lvl + 1, [rng.randrange(3) for _ in range(lvl)]))
        assert winding_number(u, tri) == float_winding(u, tri)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_sampled_matches_exact(seed):
    rng = random.Random(seed)
    u = random_test_function(rng, 4, n_poles=3)
    for addr in list(enumerate_up(1)) + enumerate_holes(2):
        tri = triangle(addr)
        assert winding_number(u, tri, "sampled") == winding_number(u, tri, "exact")


def test_sampled_general_function():
    # a non-rational non-vanishing function: exp(z) * (z - c)**2, two turns around c
    tri = down_triangle(TriAddress.down(1))
    cen = complex(*[sum(v[i] for v in tri.xy(1.0)) / 3 for i in range(2)])
    u = SampledTestFunction(lambda z: cmath.exp(z) * (z - cen) ** 2)
    assert winding_number(u, tri) == 2
    assert sampled_winding(u, [complex(*p) for p in up_triangle(TriAddress.up(1, [0])).xy(1.0)]) == 0
    with pytest.raises(TypeError):
        winding_number(u, tri, "exact")


def test_boundary_pole_rejected():
    edge = RationalTestFunction.at((Fraction(1, 2), Fraction(1, 4)))
    with pytest.raises(BoundaryPoleError):
        winding_number(edge, down_triangle(TriAddress.down(1)))
    with pytest.raises(BoundaryPoleError):
        index_pairing(TripleSpec.zgt(), edge, 6)


def test_unseparated_pole():
    u = RationalTestFunction.around_hole(TriAddress.down(8, [0] * 7))
    with pytest.raises(SeparationError):
        index_pairing(TripleSpec.zgt(), u, 5)
    assert index_pairing(TripleSpec.zgt(), u, 8) == 0


# -- additivity -------------------------------------------------------------


def test_additivity_examples():
    u = RationalTestFunction.around_hole(TriAddress.down(1))
    assert verify_winding_additivity(u, TriAddress.up(0), 3)
    far = RationalTestFunction.at((Fraction(3), Fraction(2)))
    assert all(winding_number(far, triangle(a)) == 0 for a in list(enumerate_up(2)) + enumerate_holes(3))
    rng = random.Random(8)
    v = random_test_function(rng, 6, n_poles=5)
    assert all(verify_winding_additivity(v, up, 6) for n in (1, 2) for up in enumerate_up(n))


def test_additivity_detects_shallow_depth():
    deep = RationalTestFunction.around_hole(TriAddress.down(4, [0, 1, 2]))
    assert verify_winding_additivity(deep, TriAddress.up(0), 4)
    assert not verify_winding_additivity(deep, TriAddress.up(0), 3)


# -- pairings on the gasket ---------------------------------------------------


def _random_gasket_spec(rng):
    choice = rng.randrange(5)
    if choice == 0:
        return TripleSpec.zgt()
    if choice == 1:
        m = rng.randint(1, 4)
        return TripleSpec.rgt(TriAddress.down(m, [rng.randrange(3) for _ in range(m - 1)]))
    if choice == 2:
        return TripleSpec.rgt(TriAddress.up(0))
    if choice == 3:
        return TripleSpec.st(random_hole_function(rng, "gasket"))
    mods = []
    for _ in range(rng.randint(1, 4)):
        lvl = rng.randint(0, 3)
        path = [rng.randrange(3) for _ in range(lvl)]
        src = TriAddress.up(lvl, path) if rng.random() < 0.5 else TriAddress.down(lvl + 1, path)
        mods.append(CircleModuleSpec(src, rng.choice(list(ModuleOrientation)), rng.randint(1, 3)))
    return TripleSpec.modules(mods) + TripleSpec.zgt()


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_fast_equals_brute(seed):
    rng = random.Random(seed)
    spec = _random_gasket_spec(rng)
    u = random_test_function(rng, 4, n_poles=3, outside=rng.random() < 0.5)
    assert index_pairing(spec, u, 5, "fast") == index_pairing(spec, u, 5, "brute")


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_class_reproduces_pairing(seed):
    rng = random.Random(seed)
    spec = _random_gasket_spec(rng)
    f = khomology_class(spec)
    for h in iter_holes("gasket", 4):
        u = RationalTestFunction.around_hole(h)
        assert index_pairing(spec, u, 4) == f(h)


def test_class_examples():
    assert khomology_class(TripleSpec.zgt()).equals_on(HoleFunction.zero(), 6)
    assert khomology_class(TripleSpec.zpt()).equals_on(HoleFunction.zero("pyramid"), 3)
    _f, _g, h = example_313()
    assert khomology_class(TripleSpec.st(h)).equals_on(h, 6)
    whole = khomology_class(TripleSpec.single(TriAddress.up(0)))
    assert whole.equals_on(HoleFunction.constant(1), 6)
    hole = TriAddress.down(2, [1])
    r = khomology_class(TripleSpec.rgt(hole))
    assert r(hole) == -1 and all(r(x) == 0 for x in iter_holes("gasket", 5) if x != hole)
    assert khomology_class(TripleSpec.rgt(TriAddress.up(0))).equals_on(HoleFunction.constant(1), 5)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_pairing_homomorphism_and_orientation(seed):
    rng = random.Random(seed)
    s1, s2 = _random_gasket_spec(rng), _random_gasket_spec(rng)
    u = random_test_function(rng, 4, n_poles=2)
    v = random_test_function(rng, 4, n_poles=2)
    assert index_pairing(s1, u * v, 5) == index_pairing(s1, u, 5) + index_pairing(s1, v, 5)
    assert index_pairing(s1 + s2, u, 5) == index_pairing(s1, u, 5) + index_pairing(s2, u, 5)
    src = TriAddress.up(1, [rng.randrange(3)])
    pos = TripleSpec.single(src, ModuleOrientation.POSITIVE)
    rev = TripleSpec.single(src, ModuleOrientation.REVERSED)
    assert index_pairing(rev, u, 5) == -index_pairing(pos, u, 5)


def test_zgt_pairs_trivially():
    rng = random.Random(5)
    for _ in range(30):
        u = random_test_function(rng, 6, outside=True)
        assert index_pairing(TripleSpec.zgt(), u, 6) == 0
        assert index_pairing(TripleSpec.zgt(), u, 6, "brute") == 0


def test_st_pairs_to_f():
    rng = random.Random(17)
    for _ in range(3):
        f = random_hole_function(rng, "gasket")
        spec = TripleSpec.st(f)
        for h in iter_holes("gasket", 4):
            assert index_pairing(spec, RationalTestFunction.around_hole(h), 4, "brute") == f(h)


def test_test_function_json():
    data = {"poles": [{"x": "1/3", "y": "1/7", "power": 2}]}
    u = RationalTestFunction.from_json(data)
    assert u.poles == (Pole(Fraction(1, 3), Fraction(1, 7), 2),)
    assert RationalTestFunction.from_json(u.to_json()) == u


# -- the pyramid ------------------------------------------------------------


def mt_crossing(p, d, tri):
    """Float Moller-Trumbore crossing sign of the line p + t d with an oriented triangle."""
    v1, v2, v3 = [tuple(float(c) for c in v) for v in tri.vertices]
    p = tuple(float(c) for c in p)
    d = tuple(float(c) for c in d)
    sub = lambda a, b: tuple(x - y for x, y in zip(a, b))
    cross = lambda a, b: (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])
    dot = lambda a, b: sum(x * y for x, y in zip(a, b))
    e1, e2 = sub(v2, v1), sub(v3, v1)
    h = cross(d, e2)
    a = dot(e1, h)
    if abs(a) < 1e-14:
        return 0
    f = 1 / a
    s = sub(p, v1)
    uu = f * dot(s, h)
    q = cross(s, e1)
    vv = f * dot(d, q)
    if uu <= 0 or vv <= 0 or uu + vv >= 1:
        return 0
    return 1 if dot(d, cross(e1, e2)) > 0 else -1


def _generic_axes(rng, count, depth):
    out = []
    while len(out) < count:
        line = random_axis(rng)
        try:
            index_pairing(TripleSpec.zpt(), line, depth)
        except BoundaryPoleError:
            continue
        out.append(line)
    return out


def test_zpt_and_octahedra_cancel():
    rng = random.Random(23)
    for line in _generic_axes(rng, 20, 3):
        assert index_pairing(TripleSpec.zpt(), line, 3) == 0
        assert all(octahedron_winding_sum(line, n, m) == 0 for n, m in enumerate_octahedra(3))


def test_space_winding_matches_float_oracle():
    rng = random.Random(29)
    for line in _generic_axes(rng, 20, 2):
        for n, m in enumerate_octahedra(2):
            for _addr, tri in pyramid_faces(n, m):
                assert space_winding(line, tri) == line.power * mt_crossing(line.point, line.direction, tri)


def test_through_hole_axis():
    face = PyramidFaceAddress(2, 3, 2)
    line = AxisTestFunction.through_hole(face)
    assert crossed_holes(line, 2)[face] == 1
    assert octahedron_winding_sum(line, 2, 3) == 0


def test_st_pyramid_pairing_matches_crossings():
    """Pairing with ST(f) on the pyramid is sum_h W(h) f(h), W from float crossings."""
    rng = random.Random(31)
    depth = 2
    faces = {a: t for n, m in enumerate_octahedra(depth) for a, t in pyramid_faces(n, m)}
    for _ in range(5):
        f = random_hole_function(rng, "pyramid")
        spec = TripleSpec.st(f)
        for h in iter_holes("pyramid", depth):
            line = AxisTestFunction.through_hole(h)
            expected = sum(
                f(a) * mt_crossing(line.point, line.direction, t) for a, t in faces.items() if a.in_hsp
            )
            assert index_pairing(spec, line, depth) == expected


def float_meets_tetrahedron(line, verts):
    """Oracle: sample the line densely and test barycentric membership in floats."""
    v = np.array([[float(c) for c in x] for x in verts])
    p = np.array([float(c) for c in line.point])
    d = np.array([float(c) for c in line.direction])
    T = np.column_stack([v[1] - v[0], v[2] - v[0], v[3] - v[0]])
    inv = np.linalg.inv(T)
    ts = np.linspace(-50, 50, 200001)
    lam = inv @ (p[:, None] + d[:, None] * ts - v[0][:, None])
    inside = (lam >= -1e-9).all(axis=0) & (lam.sum(axis=0) <= 1 + 1e-9)
    return bool(inside.any())


def test_line_meets_tetrahedron_oracle():
    rng = random.Random(37)
    agree = 0
    for _ in range(60):
        line = random_axis(rng)
        path = [rng.randrange(4) for _ in range(rng.randint(0, 2))]
        verts = tetrahedron(path)
        agree += line_meets_tetrahedron(line, verts) == float_meets_tetrahedron(line, verts)
    assert agree == 60


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_pyramid_fast_matches_brute(seed):
    rng = random.Random(seed)
    spec = TripleSpec.zpt() if rng.random() < 0.3 else TripleSpec.st(random_hole_function(rng, "pyramid"))
    if rng.random() < 0.5:
        line = AxisTestFunction.through_hole(PyramidFaceAddress(3, rng.randint(1, 16), rng.randint(1, 3)))
    else:
        line = random_axis(rng)
    try:
        brute = index_pairing(spec, line, 4, "brute")
    except BoundaryPoleError:
        with pytest.raises(BoundaryPoleError):
            index_pairing(spec, line, 4, "fast")
        return
    assert index_pairing(spec, line, 4, "fast") == brute
