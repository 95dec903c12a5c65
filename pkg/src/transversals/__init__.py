"""Extremal constructions and exact certification for independent transversals
in vertex-partitioned graphs and uniform hypergraphs."""

from .builders import (
    BuildRecipe,
    DegreeBoundedProfile,
    SizePrediction,
    bounded_degree_profile,
    build,
    build_bounded_degree,
    build_forest,
    build_hypergraph,
    build_hypergraph_bounded_degree,
    build_local_degree,
    build_star_counterexample,
    hypergraph_bounded_parts,
    hypergraph_bounded_profile,
    local_degree_profile,
    pad_blocks,
    predict_size,
)
from .errors import (
    BuildSizeError,
    CertificateError,
    ForeignEdgeError,
    InstanceError,
    ParameterError,
    ParseError,
    SequenceError,
    UniformityError,
    UnknownBlockError,
)
from .model import (
    HEAVY,
    LIGHT,
    Block,
    InstanceMetrics,
    PartitionedInstance,
    VertexInfo,
    block_degree,
    compute_metrics,
    is_forest,
    is_stretched,
    local_degree,
    max_block_average_degree,
    max_degree,
    relabel,
    thickness,
)
from .sequences import (
    GradeSequence,
    HypergraphGradeSequence,
    MobiusOrbit,
    OrbitOutcome,
    Violation,
    forest_grade_sequence,
    haxell_threshold,
    hypergraph_grade_sequence,
    minimal_epsilon,
    minimal_hypergraph_t,
    minimal_t,
    mobius_orbit,
    simple_sequence,
    threshold_constant,
    validate_sequence,
)
from .serialization import (
    export_dot,
    parse_certificate,
    parse_instance,
    read_certificate,
    read_instance,
    serialize_certificate,
    serialize_instance,
    write_certificate,
    write_instance,
)
from .solving import (
    Certificate,
    ForbiddenStep,
    ForbiddenViaForcedStep,
    ForcedSetStep,
    JoinForcedStep,
    TransversalReport,
    WWReport,
    check_certificate,
    check_ww_bound,
    count_transversals,
    find_transversal,
    propagate_certificate,
)

__all__ = [
    "Block",
    "BuildRecipe",
    "BuildSizeError",
    "Certificate",
    "CertificateError",
    "DegreeBoundedProfile",
    "ForbiddenStep",
    "ForbiddenViaForcedStep",
    "ForcedSetStep",
    "ForeignEdgeError",
    "GradeSequence",
    "HEAVY",
    "HypergraphGradeSequence",
    "InstanceError",
    "InstanceMetrics",
    "JoinForcedStep",
    "LIGHT",
    "MobiusOrbit",
    "OrbitOutcome",
    "ParameterError",
    "ParseError",
    "PartitionedInstance",
    "SequenceError",
    "SizePrediction",
    "TransversalReport",
    "UniformityError",
    "UnknownBlockError",
    "VertexInfo",
    "Violation",
    "WWReport",
    "block_degree",
    "bounded_degree_profile",
    "build",
    "build_bounded_degree",
    "build_forest",
    "build_hypergraph",
    "build_hypergraph_bounded_degree",
    "build_local_degree",
    "build_star_counterexample",
    "check_certificate",
    "check_ww_bound",
    "compute_metrics",
    "count_transversals",
    "export_dot",
    "find_transversal",
    "forest_grade_sequence",
    "haxell_threshold",
    "hypergraph_bounded_parts",
    "hypergraph_bounded_profile",
    "hypergraph_grade_sequence",
    "is_forest",
    "is_stretched",
    "local_degree",
    "local_degree_profile",
    "max_block_average_degree",
    "max_degree",
    "minimal_epsilon",
    "minimal_hypergraph_t",
    "minimal_t",
    "mobius_orbit",
    "pad_blocks",
    "parse_certificate",
    "parse_instance",
    "predict_size",
    "propagate_certificate",
    "read_certificate",
    "read_instance",
    "relabel",
    "serialize_certificate",
    "serialize_instance",
    "simple_sequence",
    "thickness",
    "threshold_constant",
    "validate_sequence",
    "write_certificate",
    "write_instance",
]
