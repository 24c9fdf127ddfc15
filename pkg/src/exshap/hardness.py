"""Counting pipelines built on the value schemes.

Each pipeline turns an input graph into a family of rules, evaluates one
scheme on the family, and solves an integer linear system whose solution
is a combinatorial count vector for the input graph: independent sets per
size (ef), colorings per number of colors used (hy), matchings (ss), and
matchings per size (my). The recovered counts are checked against direct
enumeration; the system determinants are checked against closed forms
before solving. Everything is exact and deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, perm

from .combinatorics import (
    DEFAULT_PARTITION_CAP,
    CapExceededError,
    RationalMatrix,
    bell,
    determinant,
    r_bell,
    solve_linear,
)
from .core import ValueKind, members
from .graphs import (
    LabeledGraph,
    NonBipartiteError,
    bipartition,
    complement,
    components,
    graph_to_hybrid,
    hosoya,
    independent_sets,
    make_graph,
    matchings_by_size,
)
from .values import esv_colorings, my_delta, ss_cliquecover

__all__ = [
    "CrossCheckError",
    "ReductionReport",
    "independent_sets_reduction",
    "chromatic_reduction",
    "hosoya_reduction",
    "matchings_reduction",
    "REDUCTIONS",
]


class CrossCheckError(RuntimeError):
    """An internal consistency check of a pipeline failed."""


@dataclass(frozen=True)
class ReductionReport:
    """Outcome of one pipeline run.

    ``recovered`` comes out of the linear system fed by scheme values;
    ``direct`` from plain enumeration on the input graph. ``values`` keeps
    the scheme numbers themselves, ``matrix`` the solved system.
    """

    target: str
    recovered: tuple[Fraction, ...]
    direct: tuple[int, ...]
    matrix: RationalMatrix
    values: tuple[Fraction, ...]

    @property
    def ok(self) -> bool:
        return len(self.recovered) == len(self.direct) and all(
            r == d for r, d in zip(self.recovered, self.direct)
        )


def _require_cap(k: int, cap: int | None) -> None:
    limit = DEFAULT_PARTITION_CAP if cap is None else cap
    if k > limit:
        raise CapExceededError(f"input graph has {k} nodes, above the cap of {limit}")


def _require_bipartite(graph: LabeledGraph, target: str) -> None:
    for comp in components(graph):
        if bipartition(graph, comp) is None:
            raise NonBipartiteError(
                f"the {target} pipeline needs a bipartite input graph"
            )


def _players(*groups: range | tuple[int, ...]) -> int:
    mask = 0
    for group in groups:
        for p in group:
            mask |= 1 << (p - 1)
    return mask


def _shift_edges(
    graph: LabeledGraph, offset: int
) -> list[tuple[int, int]]:
    return [(a + offset, b + offset) for a, b in graph.edge_list()]


def _bell_det_closed_form(k: int) -> Fraction:
    product = 1
    for i in range(k + 1):
        product *= factorial(i)
    return product * sum(Fraction(1, factorial(i)) for i in range(k + 1))


def independent_sets_reduction(
    graph: LabeledGraph, cap: int | None = None
) -> ReductionReport:
    """Recover the input graph's independent-set counts by size.

    System j (j = 0..k) plants the graph beside an isolated first node
    whose label absorbs j extra players; the ef value of player 1 is then
    a fixed combination of the counts, one binomial-free row per j.
    """
    k = graph.k
    _require_cap(k, cap)
    values = []
    for j in range(k + 1):
        labels = (_players((1,), range(k + 2, k + j + 2)),) + tuple(
            1 << (t + 1) for t in range(k)
        )
        family = make_graph(k + 1, _shift_edges(graph, 1), labels)
        rule = graph_to_hybrid(family)
        values.append(esv_colorings(rule, ValueKind.EF, 1, cap=k + 1))

    int_rows = [
        [factorial(m + j) * factorial(k - m) for m in range(k + 1)]
        for j in range(k + 1)
    ]
    expected = 1
    for i in range(k + 1):
        expected *= factorial(i) ** 3
    if determinant(int_rows) != expected:
        raise CrossCheckError("independent-sets system determinant is off")
    matrix = RationalMatrix.from_rows(
        [
            [Fraction(entry, factorial(k + j + 1)) for entry in row]
            for j, row in enumerate(int_rows)
        ]
    )
    recovered = solve_linear(matrix, values)

    direct = [0] * (k + 1)
    for subset in independent_sets(graph):
        direct[subset.bit_count()] += 1
    return ReductionReport(
        "independent-sets", recovered, tuple(direct), matrix, tuple(values)
    )


def _palette_counts(graph: LabeledGraph, palette: int) -> tuple[int, ...]:
    """Proper colorings from 1..palette, tallied by colors actually used."""
    k = graph.k
    adj = graph.adj
    counts = [0] * palette
    colors = [0] * k

    def walk(node: int, used: int) -> None:
        if node == k:
            counts[used.bit_count() - 1] += 1
            return
        earlier = adj[node] & ((1 << node) - 1)
        for c in range(palette):
            if any(colors[u - 1] == c for u in members(earlier)):
                continue
            colors[node] = c
            walk(node + 1, used | 1 << c)

    walk(0, 0)
    return tuple(counts)


def chromatic_reduction(
    graph: LabeledGraph, cap: int | None = None
) -> ReductionReport:
    """Recover, per m, the input graph's proper colorings using exactly m
    of k colors.

    System j (j = 1..k) attaches a universal first node whose label absorbs
    j - 1 extra players; the hy value of player 1 weighs each partition
    into m independent sets by a fixed combination of Bell-family numbers.
    """
    k = graph.k
    _require_cap(k, cap)
    values = []
    rhs = []
    for j in range(1, k + 1):
        labels = (_players((1,), range(k + 2, k + j + 1)),) + tuple(
            1 << (t + 1) for t in range(k)
        )
        edges = _shift_edges(graph, 1) + [(1, t + 2) for t in range(k)]
        family = make_graph(k + 1, edges, labels)
        rule = graph_to_hybrid(family)
        value = esv_colorings(rule, ValueKind.HY, 1, cap=k + 1)
        values.append(value)
        rhs.append(
            Fraction(factorial(k + j), factorial(j - 1)) * bell(k + j) * value
        )

    int_rows = [
        [factorial(k - m) * r_bell(j, m) for m in range(1, k + 1)]
        for j in range(1, k + 1)
    ]
    factor = 1
    for m in range(1, k + 1):
        factor *= factorial(k - m)
    if determinant(int_rows) != factor * _bell_det_closed_form(k):
        raise CrossCheckError("chromatic system determinant is off")
    matrix = RationalMatrix.from_rows(
        [[Fraction(entry) for entry in row] for row in int_rows]
    )
    recovered = solve_linear(matrix, rhs)

    direct = _palette_counts(graph, k)
    for m in range(1, k + 1):
        palette_total = sum(_palette_counts(graph, m))
        from_counts = sum(
            recovered[i - 1] * Fraction(perm(m, i), perm(k, i))
            for i in range(1, k + 1)
        )
        if palette_total != from_counts:
            raise CrossCheckError(
                f"palette-{m} coloring total disagrees with the recovered counts"
            )
    return ReductionReport("chromatic", recovered, direct, matrix, tuple(values))


def hosoya_reduction(graph: LabeledGraph, cap: int | None = None) -> ReductionReport:
    """Recover the input graph's matching count from one ss value.

    The rule family's graph is the complement of the input placed beside an
    isolated first node; clique covers of that complement are exactly the
    matchings, each contributing 1/n!.
    """
    k = graph.k
    _require_cap(k, cap)
    _require_bipartite(graph, "hosoya")
    bar = make_graph(k + 1, _shift_edges(graph, 1))
    rule = graph_to_hybrid(complement(bar))
    value = ss_cliquecover(rule, 1, cap=k + 1)
    recovered = (factorial(k + 1) * value,)
    direct = (hosoya(graph),)
    matrix = RationalMatrix.from_rows([[Fraction(1)]])
    return ReductionReport("hosoya", recovered, direct, matrix, (value,))


def matchings_reduction(
    graph: LabeledGraph, cap: int | None = None
) -> ReductionReport:
    """Recover the input graph's matching counts by size from my values.

    System j (j = 1..k) embeds the input's complement structure beside two
    designated nodes and j spare singletons over 3k + 1 players; the my
    difference between players 1 and 2 weighs matchings with k - m edges
    by an alternating factorial, giving an invertible alternating system.
    """
    k = graph.k
    _require_cap(k, cap)
    _require_bipartite(graph, "matchings")
    deltas = []
    for j in range(1, k + 1):
        nodes = k + j + 2
        labels = (
            (_players((1,), range(k + j + 3, 3 * k + 2)),)
            + (1 << 1,)
            + tuple(1 << (t + 2) for t in range(k))
            + tuple(1 << (k + 2 + extra) for extra in range(j))
        )
        bar = make_graph(nodes, _shift_edges(graph, 2), labels)
        rule = graph_to_hybrid(complement(bar))
        deltas.append(my_delta(rule, 1, 2, cap=nodes))

    int_rows = [
        [(-1) ** (m + j) * factorial(m + j) for m in range(1, k + 1)]
        for j in range(1, k + 1)
    ]
    expected = 1
    for i in range(k):
        expected *= factorial(i) * factorial(i + 2)
    if determinant(int_rows) != expected:
        raise CrossCheckError("matchings system determinant is off")
    matrix = RationalMatrix.from_rows(
        [[Fraction(entry) for entry in row] for row in int_rows]
    )
    rhs = [3 * k * d for d in deltas]
    recovered = solve_linear(matrix, rhs)

    sizes = matchings_by_size(graph)
    direct = tuple(sizes[k - m] for m in range(1, k + 1))
    return ReductionReport("matchings", recovered, direct, matrix, tuple(deltas))


REDUCTIONS = {
    "independent-sets": independent_sets_reduction,
    "chromatic": chromatic_reduction,
    "hosoya": hosoya_reduction,
    "matchings": matchings_reduction,
}
