"""Small maximal matchings on permutahedra, hypercubes, associahedra and products of permutahedra."""

from .construct import batch_matched_tau, cube_matched_neighbor, perm_matched_neighbor, product_matched_neighbor
from .graphs import AssocGraph, CubeGraph, ExplicitGraph, PermGraph, ProductGraph, make_graph
from .matching import MaterializedMatching, materialize, verify_covering_pair, verify_matching, verify_maximal

__version__ = "0.1.0"
