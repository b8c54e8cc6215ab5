"""Subconstituent and quantum adjacency algebras of finite rooted graphs.

Exact construction of the algebras T (generated by the adjacency matrix
and the distance-shell projectors) and Q (generated by the lowering,
flat, and raising parts of the adjacency matrix), decomposition of the
standard module into irreducible submodules, classification up to
isomorphism and quasi-isomorphism, and the Q = T decision, with the
exact algebra dimensions and the numeric module classification
cross-validating each other.
"""

from .analysis import (
    AnalysisResult,
    ExactModel,
    analyze_graph,
    analyze_to_report,
    build_exact_model,
    build_report,
    classify_model,
    verification_checks,
)
from .builder import (
    QuantumDecomposition,
    adjacency_matrix,
    build_Q,
    build_T,
    dual_idempotents,
    grading_components,
    hamming_dual_adjacency,
    lfr_decomposition,
    q_grading,
)
from .errors import (
    ClassificationError,
    ConsistencyError,
    DecompositionError,
    DisconnectedGraphError,
    Graph6ParseError,
    ProfileError,
    SizeCapError,
    UnsupportedParameterError,
)
from .exact import (
    MatrixAlgebra,
    Subspace,
    algebra_closure,
    contains,
    rref,
    span_of,
    subspace_intersection,
)
from .graphs import (
    DistancePartition,
    Graph,
    distance_partition,
    encode_graph6,
    gen_dual_polar,
    gen_hamming,
    parse_graph6,
)
from .modules import (
    IrreducibleModuleView,
    ModuleClassification,
    Tolerances,
    classify_modules,
    commutant,
    decompose_standard_module,
    intertwiner_exists,
    module_profile,
    thin_parameters,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisResult",
    "ExactModel",
    "analyze_graph",
    "analyze_to_report",
    "build_exact_model",
    "build_report",
    "classify_model",
    "verification_checks",
    "QuantumDecomposition",
    "adjacency_matrix",
    "build_Q",
    "build_T",
    "dual_idempotents",
    "grading_components",
    "hamming_dual_adjacency",
    "lfr_decomposition",
    "q_grading",
    "ClassificationError",
    "ConsistencyError",
    "DecompositionError",
    "DisconnectedGraphError",
    "Graph6ParseError",
    "ProfileError",
    "SizeCapError",
    "UnsupportedParameterError",
    "MatrixAlgebra",
    "Subspace",
    "algebra_closure",
    "contains",
    "rref",
    "span_of",
    "subspace_intersection",
    "DistancePartition",
    "Graph",
    "distance_partition",
    "encode_graph6",
    "gen_dual_polar",
    "gen_hamming",
    "parse_graph6",
    "IrreducibleModuleView",
    "ModuleClassification",
    "Tolerances",
    "classify_modules",
    "commutant",
    "decompose_standard_module",
    "intertwiner_exists",
    "module_profile",
    "thin_parameters",
]
