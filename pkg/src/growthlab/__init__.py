"""Exact growth sequences of oligomorphic permutation structures.

Labelled and unlabelled growth prefixes of group expressions, growth
bound verdicts, labelled counting of small hereditary graph classes,
flip recovery on coloured paths, and searches for order and coding
witnesses in finite relations.  All arithmetic is exact.
"""

from ._backend import HAS_NUMBA, resolve_backend
from .egf_algebra import (
    Egf,
    NonIntegralError,
    egf_exp_shift,
    egf_product,
    egf_wreath,
    from_seq,
    to_seq,
)
from .errors import CapacityError, ParseError
from .graph_classes import (
    ClassSpec,
    FlipSpec,
    Graph,
    count_labelled,
    flip_recover,
    flipped_paths,
    graph_in_class,
    half_graph,
    labelled_path_count,
    parse_class_spec,
    parse_graph,
    semi_induced_order,
)
from .group_expr import (
    DirectProduct,
    Finite,
    WreathSomega,
    classify,
    eval_lseq,
    eval_sseq,
    format_expr,
    gap_verdict,
    parse_expr,
)
from .orbit_oracle import (
    FinPermGroup,
    OrbitCount,
    count_orbits_all,
    count_orbits_injective,
    stabilizer_bound_check,
    truncate_expr,
)
from .seq_core import (
    BoundReport,
    IntSeq,
    bell,
    bell2,
    check_bounds,
    meet_trivial_pairs,
    stirling2,
    stirling_transform,
)
from .witness_search import (
    CodingWitness,
    FinRelation,
    OrderWitness,
    SearchResult,
    find_coding_witness,
    find_order_witness,
    find_tuple_coding_witness,
    parse_relation,
    verify_coding_witness,
    verify_order_witness,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "CapacityError",
    "ClassSpec",
    "CodingWitness",
    "DirectProduct",
    "Egf",
    "FinPermGroup",
    "FinRelation",
    "Finite",
    "FlipSpec",
    "Graph",
    "HAS_NUMBA",
    "IntSeq",
    "NonIntegralError",
    "OrbitCount",
    "OrderWitness",
    "ParseError",
    "SearchResult",
    "WreathSomega",
    "bell",
    "bell2",
    "check_bounds",
    "classify",
    "count_labelled",
    "count_orbits_all",
    "count_orbits_injective",
    "egf_exp_shift",
    "egf_product",
    "egf_wreath",
    "eval_lseq",
    "eval_sseq",
    "find_coding_witness",
    "find_order_witness",
    "find_tuple_coding_witness",
    "flip_recover",
    "flipped_paths",
    "format_expr",
    "from_seq",
    "gap_verdict",
    "graph_in_class",
    "half_graph",
    "labelled_path_count",
    "meet_trivial_pairs",
    "parse_class_spec",
    "parse_expr",
    "parse_graph",
    "parse_relation",
    "resolve_backend",
    "semi_induced_order",
    "stabilizer_bound_check",
    "stirling2",
    "stirling_transform",
    "to_seq",
    "truncate_expr",
    "verify_coding_witness",
    "verify_order_witness",
]
