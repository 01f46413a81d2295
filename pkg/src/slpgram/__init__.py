"""q-gram frequency mining over grammar-compressed (SLP) strings."""

from .builders import BuilderConfig, build_chain, build_random, build_repair
from .neighbor import (
    DupStats,
    FlattenedTrie,
    NeighborGraph,
    TrieSegment,
    build_neighbor_graph,
    compute_dup_stats,
    flatten_neighbor_trie,
)
from .slp import (
    ConsistencyError,
    Expander,
    QMarks,
    Rule,
    SlpError,
    SlpFormatError,
    SlpGrammar,
    SlpMetrics,
    ValidationError,
    char_frequencies,
    compute_metrics,
    compute_qmarks,
    expand,
    extract_prefix,
    extract_suffix,
    parse_slp,
    prune_unused,
    serialize_slp,
    validate,
)
from .ssa import BoundaryWindow, boundary_window, build_ssa_text
from .suffix import (
    QGramReport,
    WeightedText,
    build_lcp_array,
    build_suffix_array,
    weighted_qgram_counts,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryWindow",
    "BuilderConfig",
    "ConsistencyError",
    "DupStats",
    "Expander",
    "FlattenedTrie",
    "NeighborGraph",
    "QGramReport",
    "QMarks",
    "Rule",
    "SlpError",
    "SlpFormatError",
    "SlpGrammar",
    "SlpMetrics",
    "TrieSegment",
    "ValidationError",
    "WeightedText",
    "boundary_window",
    "build_chain",
    "build_lcp_array",
    "build_neighbor_graph",
    "build_random",
    "build_repair",
    "build_ssa_text",
    "build_suffix_array",
    "char_frequencies",
    "compute_dup_stats",
    "compute_metrics",
    "compute_qmarks",
    "expand",
    "extract_prefix",
    "extract_suffix",
    "flatten_neighbor_trie",
    "parse_slp",
    "prune_unused",
    "serialize_slp",
    "validate",
    "weighted_qgram_counts",
]
