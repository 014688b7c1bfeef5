"""Vertex-and-edge replacement systems: expansion, history graphs, expansivity tests."""

from .graphs import (
    INFINITY,
    Edge,
    GraphError,
    TypedGraph,
    ValidationReport,
    barycentric_subdivision,
    bfs_distance,
    erase_colors,
    graph_equal,
    relabel,
    subdivision_colors,
    subdivision_kappa,
    validate_kappa_compatible,
)
from .engine import (
    HistoryTruncation,
    HorizontalEdge,
    IncompatibleGraphError,
    LiftError,
    ReplacementEdge,
    ReplacementGraph,
    UnknownWordError,
    Vers,
    VersError,
    at_distance,
    base_bouquet,
    expand,
    expected_word_count,
    gamma,
    history,
    spanning_lift,
    validate_vers,
)
from .automata import (
    Automaton,
    AutomatonError,
    act,
    schreier_graph,
    validate_automaton,
    vers_from_automaton,
)
from .expansivity import (
    AbstractPath,
    ExpansivityResult,
    ExpansivityWitness,
    GeodesicSquare,
    enumerate_abstract_paths,
    find_expanding_constant,
    find_geodesic_squares,
    is_n_expanding,
    same_level_distance,
)
from .numberfield import (
    FieldError,
    FieldScalar,
    invert_matrix,
    scalar,
    solve_linear,
)
from .ifs import (
    Address,
    AffineMap,
    AmbiguousCellError,
    IfsError,
    MembershipError,
    PcfIfs,
    cell_intersection_oracle,
    cell_membership,
    identity_map,
    ifs_power,
    point_of_address,
    post_critical_closure,
    ratio_condition_check,
    shift_closure,
    tree_power,
    validate_pcf_ifs,
    vers_from_ifs,
)
from .ers import (
    Ers,
    ErsError,
    ErsReplacement,
    ers_expansion_step,
    full_expansion,
    gluing_related_at_depth,
    is_expanding_ers,
    partition_bary,
    validate_ers,
    vers_from_ers,
)
from .documents import (
    DocumentError,
    Report,
    SpecDocument,
    automaton_document,
    bundled,
    bundled_names,
    document_bytes,
    ers_document,
    export,
    graph_json,
    ifs_document,
    oracle_compare,
    parse_graph_json,
    parse_spec,
    vers_document,
)

__all__ = [
    "INFINITY",
    "Edge",
    "GraphError",
    "TypedGraph",
    "ValidationReport",
    "barycentric_subdivision",
    "bfs_distance",
    "erase_colors",
    "graph_equal",
    "relabel",
    "subdivision_colors",
    "subdivision_kappa",
    "validate_kappa_compatible",
    "HistoryTruncation",
    "HorizontalEdge",
    "IncompatibleGraphError",
    "LiftError",
    "ReplacementEdge",
    "ReplacementGraph",
    "UnknownWordError",
    "Vers",
    "VersError",
    "at_distance",
    "base_bouquet",
    "expand",
    "expected_word_count",
    "gamma",
    "history",
    "spanning_lift",
    "validate_vers",
    "Automaton",
    "AutomatonError",
    "act",
    "schreier_graph",
    "validate_automaton",
    "vers_from_automaton",
    "AbstractPath",
    "ExpansivityResult",
    "ExpansivityWitness",
    "GeodesicSquare",
    "enumerate_abstract_paths",
    "find_expanding_constant",
    "find_geodesic_squares",
    "is_n_expanding",
    "same_level_distance",
    "FieldError",
    "FieldScalar",
    "invert_matrix",
    "scalar",
    "solve_linear",
    "Address",
    "AffineMap",
    "AmbiguousCellError",
    "IfsError",
    "MembershipError",
    "PcfIfs",
    "cell_intersection_oracle",
    "cell_membership",
    "identity_map",
    "ifs_power",
    "point_of_address",
    "post_critical_closure",
    "ratio_condition_check",
    "shift_closure",
    "tree_power",
    "validate_pcf_ifs",
    "vers_from_ifs",
    "Ers",
    "ErsError",
    "ErsReplacement",
    "ers_expansion_step",
    "full_expansion",
    "gluing_related_at_depth",
    "is_expanding_ers",
    "partition_bary",
    "validate_ers",
    "vers_from_ers",
    "DocumentError",
    "Report",
    "SpecDocument",
    "automaton_document",
    "bundled",
    "bundled_names",
    "document_bytes",
    "ers_document",
    "export",
    "graph_json",
    "ifs_document",
    "oracle_compare",
    "parse_graph_json",
    "parse_spec",
    "vers_document",
]

__version__ = "0.1.0"
