"""Trace measures from partial sums of |D|^-d.

sigma_N sums the N largest eigenvalues of |D|^-d.  Localized to a level-n
cell, its share of the whole tends to 3^-n for self-similar triples; for the
non-invariant h the two sides of the gasket get different shares.  The global
sigma_N / ln N approaches the residue only like 1/ln N.
"""
import math

from sierpinski_triples.holes import HoleFunction
from sierpinski_triples.spectrum import TripleSpec, dixmier_residue
from sierpinski_triples.trace import example_313, partial_trace, scaling_check

zgt = TripleSpec.zgt()
# lim (x - 1) zeta(x d), the limit of sigma_N / ln N
R = dixmier_residue(zgt).closed
print(f"sigma_N / ln N against {R:.6f}:")
for k in range(3, 8):
    est = partial_trace(zgt, "all", 10**k).estimate
    print(f"  N=1e{k}: {est:.6f}  excess x ln N = {(est / R - 1) * math.log(10**k):.3f}")

for name, spec in (("ZGT", zgt), ("ST(2)", TripleSpec.st(HoleFunction.constant(2)))):
    rep = scaling_check(spec, 2, 10**5)
    print(f"\n{name}: level-2 cell shares, max deviation from 1/9 = {rep['max_relative_deviation']:.2e}")

for N in (10**4, 10**5, 10**6):
    rep = example_313(N)
    print(f"h at N={N}: F11 {rep['ratio_F11']:.4f}, F12 {rep['ratio_F12']:.4f}, gap {rep['gap']:.4f}")
