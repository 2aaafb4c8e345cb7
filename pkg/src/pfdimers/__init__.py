"""Exact dimer partition functions on graphs in closed surfaces.

The pipeline: encode the embedding as a signed rotation system, build an
admissible (zero-curvature) edge orientation, enumerate its 2^(b1) classes,
weigh the class Pfaffians by Arf/Brown invariants or combine real and
imaginary parts per the practical formulas, and check everything against a
brute-force matching enumerator.
"""

from .errors import *  # noqa: F401,F403
from .generators import LatticeInstance, TransverseCurve, from_polygon_word, lattice
from .homology import (
    HomologyBasis,
    basis_from_cycles,
    crossing_cochain,
    cycle_basis,
    dual_flip,
    intersection_number,
    is_coboundary,
    is_cocycle,
)
from .kasteleyn import (
    CurvatureReport,
    Orientation,
    canonical_orientation,
    construct_kasteleyn,
    count_all_kasteleyn,
    curvature,
    curvature_report,
    enumerate_classes,
    equivalent,
    face_curvatures,
    is_kasteleyn,
    omega_change,
)
from .oracle import (
    count_matchings,
    enumerate_matchings,
    find_matching,
    homology_buckets,
    partition_bruteforce,
)
from .partition import (
    PartitionResult,
    companion_cycle,
    normalize_orientation,
    partition,
    partition_general_pin,
    partition_nonorientable_practical,
    partition_orientable_practical,
    partition_orientable_spin,
)
from .pfaffian import (
    SkewMatrix,
    bipartite_pfaffian,
    build_adjacency,
    pfaffian,
    pfaffian_expansion,
)
from .spin_quadratic import (
    QuadraticEnhancement,
    arf,
    basis_enhancement,
    brown,
    ell_omega,
    extend_enhancement,
    matching_sign,
    n_mismatch,
    normalize_qB,
    quad_enhancement,
)
from .surface_graph import (
    CombinatorialMap,
    Face,
    FaceSet,
    SurfaceType,
    build_map,
    classify,
    euler_characteristic,
    relabel,
    stiefel_whitney_cocycle,
    trace_faces,
    untwist,
    vertex_labels,
)

__version__ = "0.1.0"
