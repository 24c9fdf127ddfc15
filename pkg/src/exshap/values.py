"""Value algorithms on top of the incompatibility graph.

``esv_colorings`` evaluates any of the five schemes for a hybrid rule by
summing scheme weights over the graph's independent-set partitions, one
term per partition. The remaining routes are scheme-specific shortcuts:
a two-sided size convolution for marginality (mq), a closed form for the
externality-free scheme on embedded rules (ef), a clique-cover sum for the
stochastic scheme (ss), and a pairwise difference for the parity scheme
(my). Each agrees exactly with the brute-force evaluator on its domain.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .core import EmbeddedCoalition, ValueKind, canon_partition, esv_weight, members
from .graphs import (
    LabeledGraph,
    bipartition,
    build_graph,
    clique_covers,
    complement,
    components,
    enumerate_colorings,
)
from .rules import EmbeddedRule, HybridRule, McRule
from .transforms import embedded_to_hybrid

__all__ = [
    "esv_colorings",
    "mq_size_table",
    "mq_poly",
    "ef_poly",
    "ss_cliquecover",
    "my_delta",
]


def _check_player(i: int, n: int) -> int:
    if not 1 <= i <= n:
        raise ValueError(f"player {i} outside 1..{n}")
    return 1 << (i - 1)


def _label_size(graph: LabeledGraph, node_mask: int) -> int:
    return sum(graph.labels[t - 1].bit_count() for t in members(node_mask))


def _owner_node(graph: LabeledGraph, player_bit: int) -> int:
    for t, lab in enumerate(graph.labels):
        if lab & player_bit:
            return t + 1
    raise ValueError("player not covered by any expression")


def esv_colorings(
    rule: HybridRule, kind: ValueKind, i: int, cap: int | None = None
) -> Fraction:
    """Scheme value of one hybrid rule by summing over graph colorings.

    Each independent-set partition of the rule's graph is one satisfying
    embedded coalition; its scheme weight enters the sum once. A zero rule
    weight short-circuits to 0.
    """
    _check_player(i, rule.n)
    if rule.weight == 0:
        return Fraction(0)
    graph = build_graph(rule)
    total = Fraction(0)
    for node_partition, _ in enumerate_colorings(graph, cap):
        coalition = 0
        player_blocks = []
        for block in node_partition:
            mask = 0
            for t in members(block):
                mask |= graph.labels[t - 1]
            player_blocks.append(mask)
            if block & 1:
                coalition = mask
        ec = EmbeddedCoalition(coalition, canon_partition(player_blocks))
        total += esv_weight(kind, ec, i, rule.n)
    return rule.weight * total


def _bipartite_parts(graph: LabeledGraph) -> list[tuple[int, int]] | None:
    parts = []
    for comp in components(graph):
        sides = bipartition(graph, comp)
        if sides is None:
            return None
        parts.append(sides)
    return parts


def _convolve(table: dict[int, int], add_a: int, add_b: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for s, cnt in table.items():
        out[s + add_a] = out.get(s + add_a, 0) + cnt
        out[s + add_b] = out.get(s + add_b, 0) + cnt
    return out


def mq_size_table(rule: HybridRule) -> dict[int, int]:
    """Size distribution of node 1's side over the graph's 2-colorings.

    Key s counts, twice, the ways to split every component across the two
    sides with node 1's side collecting s players in total. Raises
    ValueError when some component is not 2-colorable.
    """
    graph = build_graph(rule)
    parts = _bipartite_parts(graph)
    if parts is None:
        raise ValueError("the rule's graph is not 2-colorable")
    table = {_label_size(graph, parts[0][0]): 2}
    for b, c in parts[1:]:
        table = _convolve(table, _label_size(graph, b), _label_size(graph, c))
    return dict(sorted(table.items()))


def mq_poly(rule: HybridRule, i: int) -> Fraction:
    """Marginality-scheme value of a hybrid rule without enumeration.

    Only partitions into at most two blocks carry weight, and those are the
    2-colorings of the rule's graph, so a per-component size convolution
    suffices. A graph with an odd cycle has no 2-colorings: value 0.
    """
    bit = _check_player(i, rule.n)
    if rule.weight == 0:
        return Fraction(0)
    graph = build_graph(rule)
    parts = _bipartite_parts(graph)
    if parts is None:
        return Fraction(0)
    n = rule.n
    denom = 2 * factorial(n)
    owner = _owner_node(graph, bit)
    comps = components(graph)
    home = next(idx for idx, comp in enumerate(comps) if comp >> (owner - 1) & 1)
    base = _label_size(graph, parts[0][0])

    if home == 0:
        table = {base: 2}
        for idx in range(1, len(parts)):
            b, c = parts[idx]
            table = _convolve(table, _label_size(graph, b), _label_size(graph, c))
        if parts[0][0] >> (owner - 1) & 1:
            total = sum(
                cnt * factorial(s - 1) * factorial(n - s) for s, cnt in table.items()
            )
            return rule.weight * Fraction(total, denom)
        total = sum(
            cnt * factorial(s) * factorial(n - s - 1) for s, cnt in table.items()
        )
        return -rule.weight * Fraction(total, denom)

    b, c = parts[home]
    if b >> (owner - 1) & 1:
        with_i, without_i = b, c
    else:
        with_i, without_i = c, b
    table_eq = {base + _label_size(graph, with_i): 2}
    table_ne = {base + _label_size(graph, without_i): 2}
    for idx in range(1, len(parts)):
        if idx == home:
            continue
        add_a, add_b = _label_size(graph, parts[idx][0]), _label_size(graph, parts[idx][1])
        table_eq = _convolve(table_eq, add_a, add_b)
        table_ne = _convolve(table_ne, add_a, add_b)
    gain = sum(
        cnt * factorial(s - 1) * factorial(n - s) for s, cnt in table_eq.items()
    )
    loss = sum(
        cnt * factorial(s) * factorial(n - s - 1) for s, cnt in table_ne.items()
    )
    return rule.weight * Fraction(gain - loss, denom)


def ef_poly(rule: EmbeddedRule | McRule, i: int, n: int) -> Fraction:
    """Externality-free-scheme value of an embedded rule in closed form.

    In the surviving partitions every coalition outside the head's is one
    leftover player, so only the count of head-joining singletons varies;
    the sum telescopes to a binomial formula.
    """
    if isinstance(rule, McRule):
        rule = EmbeddedRule(rule.expr, (), rule.weight)
    bit = _check_player(i, n)
    hyb = embedded_to_hybrid(rule, n)
    if hyb.weight == 0:
        return Fraction(0)
    graph = build_graph(hyb)
    k = graph.k
    for t in members(graph.adj[0]):
        if graph.labels[t - 1].bit_count() > 1:
            return Fraction(0)
    loose = [t for t in range(2, k + 1) if not graph.adj[0] >> (t - 1) & 1]
    u = len(loose)
    nf = factorial(n)
    if graph.labels[0] & bit:
        total = sum(
            comb(u, s) * factorial(s + n - k) * factorial(k - s - 1)
            for s in range(u + 1)
        )
        return hyb.weight * Fraction(total, nf)
    loose_players = 0
    for t in loose:
        loose_players |= graph.labels[t - 1]
    if loose_players & bit:
        return Fraction(0)
    total = sum(
        comb(u, s) * factorial(s + n - k + 1) * factorial(k - s - 2)
        for s in range(u + 1)
    )
    return -hyb.weight * Fraction(total, nf)


def ss_cliquecover(rule: HybridRule, i: int, cap: int | None = None) -> Fraction:
    """Stochastic-scheme value via clique covers of the complement graph.

    Applies when every expression pins exactly one player and i is the
    first expression's player; other cases go through esv_colorings.
    """
    bit = _check_player(i, rule.n)
    for idx, expr in enumerate(rule.exprs):
        if expr.positives.bit_count() != 1:
            raise ValueError(
                f"expression {idx + 1} pins {expr.positives.bit_count()} players; "
                "this route needs singletons, use esv_colorings instead"
            )
    if not rule.exprs[0].positives & bit:
        raise ValueError(
            f"player {i} is not the first expression's player; use esv_colorings instead"
        )
    if rule.weight == 0:
        return Fraction(0)
    co = complement(build_graph(rule))
    total = 0
    for cover in clique_covers(co, cap):
        product = 1
        for block in cover:
            product *= factorial(block.bit_count() - 1)
        total += product
    return rule.weight * Fraction(total, factorial(rule.n))


def my_delta(rule: HybridRule, i: int, j: int, cap: int | None = None) -> Fraction:
    """Parity-scheme value difference my_i - my_j for a hybrid rule.

    Needs i in the first expression and j's expression incompatible with
    the first; then j's coalition never contains i and the two weight
    formulas cancel except for one term per partition.
    """
    bit_i = _check_player(i, rule.n)
    _check_player(j, rule.n)
    if not rule.exprs[0].positives & bit_i:
        raise ValueError(f"player {i} is not a player of the first expression")
    graph = build_graph(rule)
    owner = _owner_node(graph, 1 << (j - 1))
    if not graph.adj[0] >> (owner - 1) & 1:
        raise ValueError(
            f"player {j}'s expression is compatible with the first; no shortcut applies"
        )
    if rule.weight == 0:
        return Fraction(0)
    n = rule.n
    owner_bit = 1 << (owner - 1)
    tally: dict[tuple[int, int], int] = {}
    for node_partition, _ in enumerate_colorings(graph, cap):
        p = len(node_partition)
        for block in node_partition:
            if block & owner_bit:
                key = (p, _label_size(graph, block))
                tally[key] = tally.get(key, 0) + 1
                break
    total = Fraction(0)
    for (p, size), cnt in tally.items():
        term = Fraction(factorial(p - 2), n - size)
        if p % 2:
            term = -term
        total += cnt * term
    return rule.weight * total
