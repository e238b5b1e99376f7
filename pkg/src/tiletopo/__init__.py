"""tiletopo: combinatorial topology of self-affine lattice tiles.

Build the neighbor graph of an integer tile system, classify its boundary
sets, decide which are faces, compute intersection graphs and dimension
values, and search interior connectivity certificates.
"""

from .addresses import (
    Address,
    address_membership,
    addresses_equivalent,
    format_address,
    make_address,
    parse_address,
    point_of_address,
)
from .boundary import (
    BoundaryClassification,
    classify_cardinality,
    hausdorff_dimension_selfsimilar,
    modified_dimension,
    perron_root,
    point_neighbor_matrix_test,
    strong_components,
)
from .faces import (
    dimension_face_filter,
    exact_face_test,
    face_report,
    language_containment,
    sufficient_face_test,
)
from .interior import (
    interior_connectedness_certificate,
    suffix_cover_word,
    tiling_witness_word,
)
from .intersections import (
    build_intersection_graph,
    center_address,
    one_point_intersections,
    opposite_face_pairs,
    polyhedral_report,
    simple_connectedness_obstruction,
)
from .neighborgraph import (
    BoundsBox,
    CapExceededError,
    NeighborGraph,
    attractor_bounds,
    build_neighbor_graph,
    check_osc_flag,
    check_tiling_existence,
    opposite_edge,
    piece_relation,
    to_dot,
)
from .render import boundary_points, chaos_points, cloud_csv, save_cloud_figure
from .report import AnalysisOptions, AnalysisReport, analyze
from .tilespec import (
    SpectrumReport,
    TileSystem,
    TileSystemError,
    is_standard_digit_set,
    load_tile_system,
    make_tile_system,
    parse_tile_system,
    spectrum,
    twindragon,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
