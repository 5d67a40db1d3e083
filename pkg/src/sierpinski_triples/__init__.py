"""Spectral triples on the Sierpinski gasket and pyramid.

Exact combinatorics of holes and modules, zeta functions and residues,
K-homology pairings, graph approximant metrics and partial-sum traces.
"""
from .graphs import build_graph, graph_distance, metric_bounds_check, p1p2_experiment
from .holes import Domain, HoleFunction, Region
from .pairing import AxisTestFunction, RationalTestFunction, index_pairing, khomology_class, winding_number
from .spectrum import TripleSpec, dixmier_residue, eigenvalues, zeta_closed, zeta_direct
from .topology import LatticePoint, PyramidFaceAddress, TriAddress
from .trace import LocalRegion, partial_trace, scaling_check
from .zeta import riemann_zeta

__all__ = [
    "AxisTestFunction",
    "Domain",
    "HoleFunction",
    "LatticePoint",
    "LocalRegion",
    "PyramidFaceAddress",
    "RationalTestFunction",
    "Region",
    "TriAddress",
    "TripleSpec",
    "build_graph",
    "dixmier_residue",
    "eigenvalues",
    "graph_distance",
    "index_pairing",
    "khomology_class",
    "metric_bounds_check",
    "p1p2_experiment",
    "partial_trace",
    "riemann_zeta",
    "scaling_check",
    "winding_number",
    "zeta_closed",
    "zeta_direct",
]
