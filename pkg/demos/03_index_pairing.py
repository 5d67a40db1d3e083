"""Index pairings: each triple defines a K-homology class.

A rational test function with a simple pole in a hole winds once around
that hole's boundary.  The zero triple pairs to 0 with everything, while the
triple ST(f) with extra circles on each hole pairs to f at that hole.  The
fast route locates the pole; the brute route sums windings over every module.
"""
from sierpinski_triples.holes import example_313
from sierpinski_triples.pairing import AxisTestFunction, RationalTestFunction, index_pairing
from sierpinski_triples.spectrum import TripleSpec
from sierpinski_triples.topology import PyramidFaceAddress, enumerate_holes

_f, g, h = example_313()
for name, fn in (("g", g), ("h", h)):
    spec = TripleSpec.st(fn)
    print(f"ST({name}):")
    for hole in enumerate_holes(2):
        u = RationalTestFunction.around_hole(hole)
        fast = index_pairing(spec, u, 4)
        brute = index_pairing(spec, u, 4, "brute")
        zero = index_pairing(TripleSpec.zgt(), u, 4)
        print(f"  {hole}: fast {fast:+d}, brute {brute:+d}, f(hole) {fn(hole):+d}, ZGT {zero}")

face = PyramidFaceAddress(2, 3, 2)
line = AxisTestFunction.through_hole(face)
print(f"\npyramid: a line through {face} pairs with ZPT to {index_pairing(TripleSpec.zpt(), line, 6)}")
