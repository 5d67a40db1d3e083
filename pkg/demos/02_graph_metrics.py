"""Geodesic distances on the graph approximants G(n) and H(n).

H(n) keeps only the hole boundaries, G(n) adds the outer edges.  Distances are
exact rationals in units of the side length.  Two points on the left edge
show that H(n) can be exactly 3/2 times longer than the gasket metric, and
random pairs stay inside the sandwich d_G <= d_H <= 2 d_G.
"""
from sierpinski_triples.graphs import P1, P2, build_graph, graph_distance, metric_bounds_check, p1p2_experiment

print("d_H(n)(P1, P2) / alpha:")
for n in range(2, 8):
    print(f"  n={n}: {p1p2_experiment(n)}")

for n in (3, 5):
    g, h = build_graph("G", n), build_graph("H", n)
    print(f"\nn={n}: G has {g.num_vertices} vertices, H has {h.num_vertices}")
    print(f"  d_G(P1, P2) = {graph_distance(g, P1, P2)}, d_H(P1, P2) = {graph_distance(h, P1, P2)}")

rep = metric_bounds_check(6, 200, seed=42)
print(f"\n200 random pairs on level 6: passed={rep.passed}, worst d_H/d_G = {rep.worst_h_over_g}")
