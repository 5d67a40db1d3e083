"""Classifying functions on the holes.

Summable functions give a triple whose zeta function has the gasket's
dimension as abscissa.  Boundedly almost invariant (b.a.i.) functions give a
trace measure that is self-similar, and c_1 functions are eventually constant.
The three worked examples f = 1, g = +-1 and h = f + g separate the classes.
"""
from sierpinski_triples.holes import example_313

f, g, h = example_313()
for name, fn in (("f", f), ("g", g), ("h", h)):
    c = fn.classify()
    print(f"{name}: summable={c['summable']} bai={c['bai']} c1={c['c1']} "
          f"root limsup={c['root_limsup']} deviation rate={c['deviation_rate']}")

print("\nlevel aggregates of h (abs sum, average, deviation):")
for m in range(1, 8):
    a = h.level_aggregate(m)
    print(f"  m={m}: {a.abs_sum:>5} {str(a.average):>4} {str(a.deviation):>5}")
