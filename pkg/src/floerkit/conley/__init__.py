"""Combinatorial Conley index engine for sampled flows on boxes."""

from .flows import (
    CATALOG,
    FlowSpec,
    SignAction,
    catalog_flow,
    depth_family,
    double_well,
    flow_from_json,
    flow_to_json,
    linear_flow,
    sample_field,
    shift_family,
)
from .index import (
    IndexPair,
    VerificationReport,
    conley_index,
    conley_index_homology,
    construct_index_pair,
    relative_cubical_complex,
    verify_index_pair,
)
from .ops import ContinuationReport, continuation_check, pair_is_invariant, restrict_to_fixed_subgrid
from .system import (
    CellSet,
    TransitionSystem,
    discretize_flow,
    forward_closure,
    invariant_part,
    is_isolating,
    point_system,
    reverse_system,
)

__all__ = [
    "CATALOG",
    "CellSet",
    "ContinuationReport",
    "FlowSpec",
    "IndexPair",
    "SignAction",
    "TransitionSystem",
    "VerificationReport",
    "catalog_flow",
    "conley_index",
    "conley_index_homology",
    "construct_index_pair",
    "continuation_check",
    "depth_family",
    "discretize_flow",
    "double_well",
    "flow_from_json",
    "flow_to_json",
    "forward_closure",
    "invariant_part",
    "is_isolating",
    "linear_flow",
    "pair_is_invariant",
    "point_system",
    "relative_cubical_complex",
    "restrict_to_fixed_subgrid",
    "reverse_system",
    "sample_field",
    "shift_family",
    "verify_index_pair",
]
