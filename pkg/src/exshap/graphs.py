"""Labeled incompatibility graphs for hybrid rules.

A hybrid rule maps to a graph with one node per expression, labeled by the
expression's positive players, with an edge wherever two expressions cannot
be satisfied by the same coalition. Partitions of the node set into
independent sets enumerate exactly the satisfying embedded coalitions of
the rule, which is what the value algorithms consume.

Nodes are named 1..k. Node sets and player sets are bitmasks (bit t-1 for
node or player t).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from math import perm

from .combinatorics import (
    DEFAULT_PARTITION_CAP,
    CapExceededError,
    Partition,
)
from .core import PartitionGame, canon_partition, full_coalition, members
from .rules import BoolExpr, HybridRule, ParseError, compatible

__all__ = [
    "DEFAULT_SUBSET_CAP",
    "NonBipartiteError",
    "LabeledGraph",
    "make_graph",
    "complement",
    "build_graph",
    "graph_to_hybrid",
    "check_embedded_graph",
    "enumerate_colorings",
    "game_from_graph",
    "components",
    "bipartition",
    "independent_sets",
    "matchings",
    "hosoya",
    "matchings_by_size",
    "clique_covers",
    "parse_graph",
    "render_graph",
    "to_dot",
]

DEFAULT_SUBSET_CAP = 20


class NonBipartiteError(ValueError):
    """Raised by operations that only apply to bipartite graphs."""


@dataclass(frozen=True)
class LabeledGraph:
    """Undirected graph with a nonempty player set attached to each node.

    ``labels[t]`` is the player mask of node t+1; ``adj[t]`` the node mask
    of its neighbors.
    """

    labels: tuple[int, ...]
    adj: tuple[int, ...]

    def __post_init__(self) -> None:
        k = len(self.labels)
        if k == 0:
            raise ValueError("a graph needs at least one node")
        if len(self.adj) != k:
            raise ValueError("labels and adjacency rows must align")
        full = (1 << k) - 1
        for t in range(k):
            if self.labels[t] == 0:
                raise ValueError(f"node {t + 1} has an empty label")
            if self.adj[t] & ~full:
                raise ValueError(f"adjacency row {t + 1} names a node outside 1..{k}")
            if self.adj[t] >> t & 1:
                raise ValueError(f"node {t + 1} is adjacent to itself")
        for t in range(k):
            for u in members(self.adj[t]):
                if not self.adj[u - 1] >> t & 1:
                    raise ValueError(f"edge {t + 1}-{u} is not symmetric")

    @property
    def k(self) -> int:
        return len(self.labels)

    @property
    def player_union(self) -> int:
        mask = 0
        for lab in self.labels:
            mask |= lab
        return mask

    @property
    def n(self) -> int:
        return self.player_union.bit_length()

    def edge_list(self) -> tuple[tuple[int, int], ...]:
        out = []
        for t in range(self.k):
            for u in members(self.adj[t]):
                if u - 1 > t:
                    out.append((t + 1, u))
        return tuple(out)


def make_graph(
    k: int,
    edges: tuple[tuple[int, int], ...] | list[tuple[int, int]] = (),
    labels: tuple[int, ...] | None = None,
) -> LabeledGraph:
    """Construct a graph from an edge list; labels default to singletons."""
    if k < 1:
        raise ValueError("a graph needs at least one node")
    adj = [0] * k
    for i, j in edges:
        if not (1 <= i <= k and 1 <= j <= k):
            raise ValueError(f"edge {i}-{j} outside 1..{k}")
        if i == j:
            raise ValueError(f"node {i} cannot be adjacent to itself")
        adj[i - 1] |= 1 << (j - 1)
        adj[j - 1] |= 1 << (i - 1)
    if labels is None:
        labels = tuple(1 << t for t in range(k))
    return LabeledGraph(tuple(labels), tuple(adj))


def complement(graph: LabeledGraph) -> LabeledGraph:
    full = (1 << graph.k) - 1
    adj = tuple((full & ~graph.adj[t]) & ~(1 << t) for t in range(graph.k))
    return LabeledGraph(graph.labels, adj)


def build_graph(rule: HybridRule) -> LabeledGraph:
    """Incompatibility graph of a hybrid rule, node t for expression t."""
    k = len(rule.exprs)
    labels = tuple(e.positives for e in rule.exprs)
    adj = [0] * k
    for a in range(k):
        for b in range(a + 1, k):
            if not compatible(rule.exprs[a], rule.exprs[b]):
                adj[a] |= 1 << b
                adj[b] |= 1 << a
    return LabeledGraph(labels, tuple(adj))


def graph_to_hybrid(graph: LabeledGraph, weight: Fraction = Fraction(1)) -> HybridRule:
    """Hybrid rule whose incompatibility graph is exactly this graph.

    Each expression takes its node's label as positives and its neighbors'
    labels as negatives. Requires the labels to partition the players
    (build_graph of the result then returns an identical graph).
    """
    exprs = []
    for t in range(graph.k):
        neg = 0
        for u in members(graph.adj[t]):
            neg |= graph.labels[u - 1]
        exprs.append(BoolExpr(graph.labels[t], neg))
    return HybridRule(graph.n, tuple(exprs), weight)


def check_embedded_graph(graph: LabeledGraph) -> bool:
    """Can this graph arise from an embedded rule?

    Requires the labels to partition the players, the non-neighbors of node
    1 to be pairwise non-adjacent, and each such non-neighbor to carry a
    single player. Matches check_star on the corresponding hybrid rule.
    """
    union = 0
    for lab in graph.labels:
        if lab & union:
            return False
        union |= lab
    if union != full_coalition(union.bit_length()):
        return False
    outside = [t for t in range(1, graph.k) if not graph.adj[0] >> t & 1]
    for t in outside:
        if graph.labels[t].bit_count() != 1:
            return False
    for a in range(len(outside)):
        for b in range(a + 1, len(outside)):
            if graph.adj[outside[a]] >> outside[b] & 1:
                return False
    return True


def _check_node_cap(graph: LabeledGraph, cap: int | None, default: int) -> None:
    limit = default if cap is None else cap
    if graph.k > limit:
        raise CapExceededError(
            f"graph has {graph.k} nodes, above the cap of {limit}"
        )


def enumerate_colorings(
    graph: LabeledGraph, cap: int | None = None
) -> Iterator[tuple[Partition, int]]:
    """Partitions of the node set into independent sets, with multiplicity.

    Yields (partition, theta) where theta counts the distinct proper
    colorings from a palette of k = node count that induce the partition:
    theta = perm(k, number of blocks). Blocks appear in order of their
    lowest node; partitions in first-block-growth order.
    """
    _check_node_cap(graph, cap, DEFAULT_PARTITION_CAP)
    k = graph.k
    adj = graph.adj

    def walk(node: int, blocks: list[int]) -> Iterator[tuple[Partition, int]]:
        if node == k:
            yield tuple(blocks), perm(k, len(blocks))
            return
        bit = 1 << node
        for idx in range(len(blocks)):
            if not blocks[idx] & adj[node]:
                blocks[idx] |= bit
                yield from walk(node + 1, blocks)
                blocks[idx] &= ~bit
        blocks.append(bit)
        yield from walk(node + 1, blocks)
        blocks.pop()

    return walk(1, [1])


def game_from_graph(graph: LabeledGraph, cap: int | None = None) -> PartitionGame:
    """Partition game separating this graph's colorings.

    Each node partition maps to the embedded coalition whose coalition
    collects the labels of node 1's block; the game assigns a distinct
    positive value to each, so equal values identify equal colorings.
    """
    union = 0
    for lab in graph.labels:
        if lab & union:
            raise ValueError("labels must be pairwise disjoint")
        union |= lab
    n = union.bit_length()
    if union != full_coalition(n):
        raise ValueError(f"labels must cover every player 1..{n}")
    values: dict[tuple[int, Partition], Fraction] = {}
    for count, (node_partition, _) in enumerate(enumerate_colorings(graph, cap)):
        coalition = 0
        player_blocks = []
        for block in node_partition:
            mask = 0
            for t in members(block):
                mask |= graph.labels[t - 1]
            player_blocks.append(mask)
            if block & 1:
                coalition = mask
        values[(coalition, canon_partition(player_blocks))] = Fraction(count + 1)
    return PartitionGame(n, values)


def components(graph: LabeledGraph) -> tuple[int, ...]:
    """Connected components as node masks, by lowest contained node."""
    seen = 0
    out = []
    for start in range(graph.k):
        if seen >> start & 1:
            continue
        comp = 1 << start
        frontier = [start]
        while frontier:
            t = frontier.pop()
            for u in members(graph.adj[t]):
                if not comp >> (u - 1) & 1:
                    comp |= 1 << (u - 1)
                    frontier.append(u - 1)
        seen |= comp
        out.append(comp)
    return tuple(out)


def bipartition(graph: LabeledGraph, component: int) -> tuple[int, int] | None:
    """Two-color one connected component, or None if it has an odd cycle.

    Returns (B, C) node masks with the component's lowest node in B; C is
    empty for a single isolated node.
    """
    if component == 0:
        raise ValueError("component mask cannot be empty")
    start = (component & -component).bit_length() - 1
    side = {start: 0}
    frontier = [start]
    while frontier:
        t = frontier.pop()
        for u in members(graph.adj[t] & component):
            v = u - 1
            if v not in side:
                side[v] = side[t] ^ 1
                frontier.append(v)
            elif side[v] == side[t]:
                return None
    b = c = 0
    for t, s in side.items():
        if s == 0:
            b |= 1 << t
        else:
            c |= 1 << t
    return b, c


def independent_sets(graph: LabeledGraph, cap: int | None = None) -> Iterator[int]:
    """All independent node sets as masks, the empty set first."""
    _check_node_cap(graph, cap, DEFAULT_SUBSET_CAP)
    k = graph.k
    adj = graph.adj

    def walk(node: int, chosen: int) -> Iterator[int]:
        if node == k:
            yield chosen
            return
        yield from walk(node + 1, chosen)
        if not chosen & adj[node]:
            yield from walk(node + 1, chosen | 1 << node)

    return walk(0, 0)


def matchings(
    graph: LabeledGraph, cap: int | None = None
) -> Iterator[tuple[tuple[int, int], ...]]:
    """All matchings as tuples of disjoint edges, the empty matching first."""
    _check_node_cap(graph, cap, DEFAULT_SUBSET_CAP)
    edges = graph.edge_list()

    def walk(
        e: int, used: int, chosen: list[tuple[int, int]]
    ) -> Iterator[tuple[tuple[int, int], ...]]:
        if e == len(edges):
            yield tuple(chosen)
            return
        yield from walk(e + 1, used, chosen)
        i, j = edges[e]
        mask = (1 << (i - 1)) | (1 << (j - 1))
        if not used & mask:
            chosen.append(edges[e])
            yield from walk(e + 1, used | mask, chosen)
            chosen.pop()

    return walk(0, 0, [])


def hosoya(graph: LabeledGraph, cap: int | None = None) -> int:
    """Number of matchings, the empty matching included."""
    return sum(1 for _ in matchings(graph, cap))


def matchings_by_size(graph: LabeledGraph, cap: int | None = None) -> tuple[int, ...]:
    """Entry e counts the matchings with exactly e edges, for e = 0..k."""
    counts = [0] * (graph.k + 1)
    for m in matchings(graph, cap):
        counts[len(m)] += 1
    return tuple(counts)


def clique_covers(graph: LabeledGraph, cap: int | None = None) -> Iterator[Partition]:
    """Partitions of the node set into cliques, as block mask tuples."""
    _check_node_cap(graph, cap, DEFAULT_PARTITION_CAP)
    k = graph.k
    adj = graph.adj

    def walk(node: int, blocks: list[int]) -> Iterator[Partition]:
        if node == k:
            yield tuple(blocks)
            return
        bit = 1 << node
        for idx in range(len(blocks)):
            if not blocks[idx] & ~adj[node]:
                blocks[idx] |= bit
                yield from walk(node + 1, blocks)
                blocks[idx] &= ~bit
        blocks.append(bit)
        yield from walk(node + 1, blocks)
        blocks.pop()

    return walk(1, [1])


# ---------------------------------------------------------------------------
# text formats


def parse_graph(text: str) -> LabeledGraph:
    """Parse the line format: 'graph: k', then 'label i: p...' / 'edge i j'.

    '#' starts a comment. Nodes without a label line get the singleton
    label {i}.
    """
    k: int | None = None
    labels: dict[int, int] = {}
    edges: list[tuple[int, int]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.replace(":", " : ").split()
        if k is None:
            if len(fields) != 3 or fields[0] != "graph" or fields[1] != ":":
                raise ParseError(line_no, 1, "first statement must be 'graph: <k>'")
            try:
                k = int(fields[2])
            except ValueError:
                raise ParseError(line_no, 1, f"bad node count {fields[2]!r}") from None
            if k < 1:
                raise ParseError(line_no, 1, "need at least one node")
            continue
        if fields[0] == "label":
            if len(fields) < 4 or fields[2] != ":":
                raise ParseError(line_no, 1, "expected 'label <i>: <players>'")
            try:
                node = int(fields[1])
                players = [int(f) for f in fields[3:]]
            except ValueError:
                raise ParseError(line_no, 1, "label fields must be integers") from None
            if not 1 <= node <= k:
                raise ParseError(line_no, 1, f"node {node} outside 1..{k}")
            if node in labels:
                raise ParseError(line_no, 1, f"label for node {node} given twice")
            mask = 0
            for p in players:
                if p < 1:
                    raise ParseError(line_no, 1, f"player {p} must be positive")
                if mask >> (p - 1) & 1:
                    raise ParseError(line_no, 1, f"player {p} repeated in label")
                mask |= 1 << (p - 1)
            labels[node] = mask
        elif fields[0] == "edge":
            if len(fields) != 3:
                raise ParseError(line_no, 1, "expected 'edge <i> <j>'")
            try:
                i, j = int(fields[1]), int(fields[2])
            except ValueError:
                raise ParseError(line_no, 1, "edge endpoints must be integers") from None
            if not (1 <= i <= k and 1 <= j <= k):
                raise ParseError(line_no, 1, f"edge {i}-{j} outside 1..{k}")
            if i == j:
                raise ParseError(line_no, 1, f"node {i} cannot be adjacent to itself")
            edges.append((i, j))
        else:
            raise ParseError(line_no, 1, f"unknown statement {fields[0]!r}")
    if k is None:
        raise ParseError(1, 1, "missing 'graph:' header")
    label_row = tuple(labels.get(t + 1, 1 << t) for t in range(k))
    return make_graph(k, edges, label_row)


def render_graph(graph: LabeledGraph) -> str:
    lines = [f"graph: {graph.k}"]
    for t in range(graph.k):
        players = " ".join(str(p) for p in members(graph.labels[t]))
        lines.append(f"label {t + 1}: {players}")
    for i, j in graph.edge_list():
        lines.append(f"edge {i} {j}")
    return "\n".join(lines) + "\n"


def to_dot(graph: LabeledGraph) -> str:
    lines = ["graph G {"]
    for t in range(graph.k):
        players = ", ".join(str(p) for p in members(graph.labels[t]))
        lines.append(f'  v{t + 1} [label="v{t + 1}: {{{players}}}"];')
    for i, j in graph.edge_list():
        lines.append(f"  v{i} -- v{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
