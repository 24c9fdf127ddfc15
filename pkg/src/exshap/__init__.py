"""Exact extended Shapley values for coalition games with externalities.

The package parses rule files describing partition function games, converts
between rule representations, builds labeled incompatibility graphs, and
computes five extended values by several independent routes so results can
be cross-checked. A small lab of counting pipelines demonstrates how the
values encode classic graph counting problems.
"""

from .combinatorics import (
    DEFAULT_PARTITION_CAP,
    CapExceededError,
    RationalMatrix,
    SingularMatrixError,
    bell,
    determinant,
    enumerate_set_partitions,
    r_bell,
    solve_linear,
    stirling2,
)
from .core import (
    EmbeddedCoalition,
    PartitionGame,
    ValueKind,
    coalition,
    enumerate_embedded_coalitions,
    esv_bruteforce,
    esv_weight,
    externality_free_lift,
    full_coalition,
    game_add,
    game_scale,
    members,
    shapley,
    weight_from_shape,
    zeta,
)
from .graphs import (
    DEFAULT_SUBSET_CAP,
    LabeledGraph,
    NonBipartiteError,
    bipartition,
    build_graph,
    clique_covers,
    complement,
    components,
    enumerate_colorings,
    game_from_graph,
    graph_to_hybrid,
    hosoya,
    independent_sets,
    make_graph,
    matchings,
    matchings_by_size,
    parse_graph,
    render_graph,
    to_dot,
)
from .hardness import (
    REDUCTIONS,
    CrossCheckError,
    ReductionReport,
    chromatic_reduction,
    hosoya_reduction,
    independent_sets_reduction,
    matchings_reduction,
)
from .rules import (
    BoolExpr,
    EmbeddedRule,
    HybridRule,
    McRule,
    ParseError,
    RuleFile,
    WeightedRule,
    compatible,
    game_of_rules,
    mc_to_weighted,
    parse_rule_file,
    parse_rules,
    render_rule,
    render_rule_file,
    render_rules,
    satisfies_embedded,
    satisfies_expr,
    satisfies_hybrid_simple,
    satisfies_weighted,
)
from .transforms import (
    StarViolationError,
    check_star,
    embedded_to_hybrid,
    hybrid_to_embedded,
    to_embedded,
    to_hybrid,
    weighted_to_hybrid,
)
from .values import ef_poly, esv_colorings, mq_poly, mq_size_table, my_delta, ss_cliquecover

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_PARTITION_CAP",
    "DEFAULT_SUBSET_CAP",
    "REDUCTIONS",
    "BoolExpr",
    "CapExceededError",
    "CrossCheckError",
    "EmbeddedCoalition",
    "EmbeddedRule",
    "HybridRule",
    "LabeledGraph",
    "McRule",
    "NonBipartiteError",
    "ParseError",
    "PartitionGame",
    "RationalMatrix",
    "ReductionReport",
    "RuleFile",
    "SingularMatrixError",
    "StarViolationError",
    "ValueKind",
    "WeightedRule",
    "bell",
    "bipartition",
    "build_graph",
    "check_star",
    "chromatic_reduction",
    "clique_covers",
    "coalition",
    "compatible",
    "complement",
    "components",
    "determinant",
    "ef_poly",
    "embedded_to_hybrid",
    "enumerate_colorings",
    "enumerate_embedded_coalitions",
    "enumerate_set_partitions",
    "esv_bruteforce",
    "esv_colorings",
    "esv_weight",
    "externality_free_lift",
    "full_coalition",
    "game_add",
    "game_from_graph",
    "game_of_rules",
    "game_scale",
    "graph_to_hybrid",
    "hosoya",
    "hosoya_reduction",
    "hybrid_to_embedded",
    "independent_sets",
    "independent_sets_reduction",
    "make_graph",
    "matchings",
    "matchings_by_size",
    "matchings_reduction",
    "mc_to_weighted",
    "members",
    "mq_poly",
    "mq_size_table",
    "my_delta",
    "parse_graph",
    "parse_rule_file",
    "parse_rules",
    "r_bell",
    "render_graph",
    "render_rule",
    "render_rule_file",
    "render_rules",
    "satisfies_embedded",
    "satisfies_expr",
    "satisfies_hybrid_simple",
    "satisfies_weighted",
    "shapley",
    "solve_linear",
    "ss_cliquecover",
    "stirling2",
    "to_dot",
    "to_embedded",
    "to_hybrid",
    "weight_from_shape",
    "weighted_to_hybrid",
    "zeta",
]
