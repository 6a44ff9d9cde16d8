"""Normalized distance Laplacian toolkit.

Spectra and spectral gaps of the normalized distance Laplacian, exact
distance Cheeger constants with extremal-case classification, closed-form
Cayley spectra via characters, and numeric verification of the certificates
behind the universal gap floors.
"""

from .cayley import (
    AbelianGroup,
    Character,
    GroupDistanceVector,
    cayley_graph,
    cayley_spectrum,
    characters,
    distance_vector_from_graph,
    odd_order_constant,
)
from .cheeger import (
    CheegerResult,
    cheeger_constant,
    cheeger_lower_bound,
    check_cheeger_bounds,
    classify_extremal,
    h_of_cut,
    subset_triangle_slack,
)
from .constants import CAYLEY_FLOOR, GAP_FLOOR, ODD_ORDER_FLOOR
from .graphs import (
    DistanceMatrix,
    FiniteMetricSpace,
    Graph,
    bfs_apsp,
    encode_graph6,
    metric_from_graph,
    parse_edge_list,
    parse_graph6,
    parse_metric_csv,
    transmission,
    validate_metric,
)
from .spectral import (
    Spectrum,
    SymmetricMatrix,
    check_spectrum_bounds,
    classical_normalized_laplacian,
    normalized_distance_laplacian,
    rayleigh_quotient,
    spectral_gap,
    symmetric_eigensystem,
)

__version__ = "0.1.0"

__all__ = [
    "AbelianGroup",
    "CAYLEY_FLOOR",
    "Character",
    "CheegerResult",
    "DistanceMatrix",
    "FiniteMetricSpace",
    "GAP_FLOOR",
    "Graph",
    "GroupDistanceVector",
    "ODD_ORDER_FLOOR",
    "Spectrum",
    "SymmetricMatrix",
    "bfs_apsp",
    "cayley_graph",
    "cayley_spectrum",
    "characters",
    "cheeger_constant",
    "cheeger_lower_bound",
    "check_cheeger_bounds",
    "check_spectrum_bounds",
    "classical_normalized_laplacian",
    "classify_extremal",
    "distance_vector_from_graph",
    "encode_graph6",
    "h_of_cut",
    "metric_from_graph",
    "normalized_distance_laplacian",
    "odd_order_constant",
    "parse_edge_list",
    "parse_graph6",
    "parse_metric_csv",
    "rayleigh_quotient",
    "spectral_gap",
    "subset_triangle_slack",
    "symmetric_eigensystem",
    "transmission",
    "validate_metric",
]
