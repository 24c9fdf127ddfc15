"""Shared test machinery: random rule generators and slow independent oracles.

The oracles here deliberately use different algorithms from the package
(set recursion instead of growth strings, permutation expansion instead of
elimination, direct formula transcription instead of shared kernels) so the
two sides can check each other.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, factorial
from random import Random

from exshap import (
    BoolExpr,
    EmbeddedRule,
    HybridRule,
    LabeledGraph,
    McRule,
    PartitionGame,
    ValueKind,
    WeightedRule,
    make_graph,
)


def mask(players) -> int:
    out = 0
    for p in players:
        out |= 1 << (p - 1)
    return out


def unmask(m: int) -> tuple[int, ...]:
    return tuple(p + 1 for p in range(m.bit_length()) if m >> p & 1)


# ---------------------------------------------------------------------------
# independent partition / counting oracles


def set_partitions_by_recursion(items: tuple[int, ...]):
    """All partitions of the given items, as tuples of sorted tuples.

    Recursion on the first item: it joins each block of a partition of the
    rest, or opens its own block. A different scheme from growth strings.
    """
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for part in set_partitions_by_recursion(rest):
        for idx in range(len(part)):
            yield part[:idx] + (tuple(sorted((first,) + part[idx])),) + part[idx + 1 :]
        yield ((first,),) + part


def naive_bell(n: int) -> int:
    return sum(1 for _ in set_partitions_by_recursion(tuple(range(1, n + 1))))


def naive_stirling2(n: int, k: int) -> int:
    return sum(
        1
        for part in set_partitions_by_recursion(tuple(range(1, n + 1)))
        if len(part) == k
    )


def naive_r_bell(n: int, r: int) -> int:
    """Partitions of n+r items where the first r items are pairwise split."""
    count = 0
    firsts = set(range(1, r + 1))
    for part in set_partitions_by_recursion(tuple(range(1, n + r + 1))):
        if all(len(firsts.intersection(block)) <= 1 for block in part):
            count += 1
    return count


def perm_det(rows) -> Fraction:
    """Determinant by signed permutation expansion."""
    n = len(rows)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = Fraction(sign)
        for i in range(n):
            term *= Fraction(rows[i][perm[i]])
        total += term
    return total


def naive_weight(kind: ValueKind, n: int, s: int, in_s: bool, others, t_i: int = 0) -> Fraction:
    """Direct transcription of the five weighting formulas."""
    p = len(others) + 1
    if in_s:
        z = Fraction(factorial(s - 1) * factorial(n - s), factorial(n))
    else:
        z = -Fraction(factorial(s) * factorial(n - s - 1), factorial(n))
    if kind is ValueKind.MQ:
        return z if p <= 2 else Fraction(0)
    if kind is ValueKind.EF:
        return z if p - 1 == n - s else Fraction(0)
    if kind is ValueKind.HY:
        rb = sum(
            comb(s, j) * naive_bell(j) * (p - 1) ** (s - j) for j in range(s + 1)
        )
        return z * Fraction(rb, naive_bell(n))
    if kind is ValueKind.SS:
        prod = 1
        for t in others:
            prod *= factorial(t - 1)
        return z * Fraction(prod, factorial(n - s))
    assert kind is ValueKind.MY
    sizes = list(others)
    if not in_s:
        # drop exactly one block of the size holding the target player
        sizes.remove(t_i)
    acc = Fraction(0)
    for t in sizes:
        acc += Fraction(factorial(p - 2), n - t)
    acc -= Fraction(factorial(p - 1), n)
    return acc * (-1) ** p


def palette_colorings(graph: LabeledGraph, palette: int) -> int:
    """Count proper node colorings with the given number of colors."""
    k = graph.k
    count = 0
    for assignment in itertools.product(range(palette), repeat=k):
        ok = True
        for i, j in graph.edge_list():
            if assignment[i - 1] == assignment[j - 1]:
                ok = False
                break
        if ok:
            count += 1
    return count


def all_graphs(k: int):
    """Every graph on nodes 1..k with singleton labels."""
    pairs = [(i, j) for i in range(1, k + 1) for j in range(i + 1, k + 1)]
    for mask_bits in range(1 << len(pairs)):
        edges = [pairs[b] for b in range(len(pairs)) if mask_bits >> b & 1]
        yield make_graph(k, edges=edges)


def is_bipartite_edges(k: int, edges) -> bool:
    color = [0] * (k + 1)
    adj = {i: [] for i in range(1, k + 1)}
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    for start in range(1, k + 1):
        if color[start]:
            continue
        color[start] = 1
        queue = [start]
        while queue:
            node = queue.pop()
            for other in adj[node]:
                if color[other] == 0:
                    color[other] = -color[node]
                    queue.append(other)
                elif color[other] == color[node]:
                    return False
    return True


def naive_matchings(k: int, edges) -> list[tuple[tuple[int, int], ...]]:
    out = []
    for r in range(len(edges) + 1):
        for combo in itertools.combinations(edges, r):
            used = set()
            ok = True
            for i, j in combo:
                if i in used or j in used:
                    ok = False
                    break
                used.add(i)
                used.add(j)
            if ok:
                out.append(combo)
    return out


def naive_independent_sets(k: int, edges) -> list[frozenset[int]]:
    out = []
    for r in range(k + 1):
        for combo in itertools.combinations(range(1, k + 1), r):
            chosen = set(combo)
            if all(not (i in chosen and j in chosen) for i, j in edges):
                out.append(frozenset(combo))
    return out


# ---------------------------------------------------------------------------
# random structure generators


def random_expr(rng: Random, n: int, forced=None) -> BoolExpr:
    players = list(range(1, n + 1))
    if forced is None:
        size = rng.randrange(1, n + 1)
        pos = rng.sample(players, size)
    else:
        pos = list(forced)
    rest = [p for p in players if p not in pos]
    neg = [p for p in rest if rng.random() < 0.45]
    return BoolExpr(positives=mask(pos), negatives=mask(neg))


def random_weight(rng: Random, zero_ok: bool = False) -> Fraction:
    num = rng.randrange(-6, 7)
    if not zero_ok:
        while num == 0:
            num = rng.randrange(-6, 7)
    return Fraction(num, rng.randrange(1, 5))


def random_mc(rng: Random, n: int) -> McRule:
    return McRule(expr=random_expr(rng, n), weight=random_weight(rng))


def random_embedded(rng: Random, n: int) -> EmbeddedRule:
    head = random_expr(rng, n)
    others = tuple(random_expr(rng, n) for _ in range(rng.randrange(0, 3)))
    return EmbeddedRule(head=head, others=others, weight=random_weight(rng))


def random_weighted(rng: Random, n: int) -> WeightedRule:
    blocks = []
    for _ in range(rng.randrange(1, 3)):
        block = tuple(
            McRule(expr=random_expr(rng, n), weight=random_weight(rng, zero_ok=True))
            for _ in range(rng.randrange(1, 3))
        )
        blocks.append(block)
    return WeightedRule(blocks=tuple(blocks))


def random_blocks(rng: Random, n: int) -> list[list[int]]:
    blocks: list[list[int]] = []
    for p in rng.sample(range(1, n + 1), n):
        if blocks and rng.random() < 0.55:
            rng.choice(blocks).append(p)
        else:
            blocks.append([p])
    return blocks


def random_hybrid(rng: Random, n: int, zero_ok: bool = False) -> HybridRule:
    blocks = random_blocks(rng, n)
    exprs = []
    for idx, block in enumerate(blocks):
        neg = []
        for other in range(len(blocks)):
            if other != idx and rng.random() < 0.55:
                neg.extend(blocks[other])
        exprs.append(BoolExpr(positives=mask(block), negatives=mask(neg)))
    return HybridRule(
        n=n, exprs=tuple(exprs), weight=random_weight(rng, zero_ok=zero_ok)
    )


def random_star_hybrid(rng: Random, n: int) -> HybridRule:
    """Hybrid rule that satisfies the embedded-convertibility condition.

    Built from a graph: the lead node takes an arbitrary label block and may
    touch any other node; the remaining nodes split into neighbors of the
    lead (freely adjacent among themselves) and loose singleton nodes that
    are only ever adjacent to those neighbors.
    """
    blocks = random_blocks(rng, n)
    rng.shuffle(blocks)
    k = len(blocks)
    adjacent_to_lead = [t for t in range(1, k) if rng.random() < 0.6]
    loose = [t for t in range(1, k) if t not in adjacent_to_lead]
    for t in loose:
        if len(blocks[t]) > 1:
            adjacent_to_lead.append(t)
    loose = [t for t in loose if t not in adjacent_to_lead]
    edges: set[tuple[int, int]] = set()
    for t in adjacent_to_lead:
        edges.add((0, t))
    for a, b in itertools.combinations(adjacent_to_lead, 2):
        if rng.random() < 0.4:
            edges.add((min(a, b), max(a, b)))
    for t in loose:
        for a in adjacent_to_lead:
            if rng.random() < 0.3:
                edges.add((min(a, t), max(a, t)))
    neighbor_sets: list[set[int]] = [set() for _ in range(k)]
    for a, b in edges:
        neighbor_sets[a].add(b)
        neighbor_sets[b].add(a)
    exprs = []
    for t in range(k):
        neg: list[int] = []
        for other in neighbor_sets[t]:
            neg.extend(blocks[other])
        exprs.append(BoolExpr(positives=mask(blocks[t]), negatives=mask(neg)))
    return HybridRule(n=n, exprs=tuple(exprs), weight=random_weight(rng))


def random_game(rng: Random, n: int, entries: int = 6) -> PartitionGame:
    partitions = []
    for part in set_partitions_by_recursion(tuple(range(1, n + 1))):
        partitions.append(tuple(mask(block) for block in part))
    store = {}
    for _ in range(entries):
        part = rng.choice(partitions)
        block = rng.choice(part)
        store[(block, part)] = random_weight(rng, zero_ok=True)
    return PartitionGame(n, store)


def naive_esv(game: PartitionGame, kind: ValueKind, i: int) -> Fraction:
    """Value by the recursion-based partition enumerator and naive weights."""
    total = Fraction(0)
    n = game.n
    for part in set_partitions_by_recursion(tuple(range(1, n + 1))):
        part_masks = tuple(mask(block) for block in part)
        for block, block_mask in zip(part, part_masks):
            v = game.value(block_mask, part_masks)
            if not v:
                continue
            s = len(block)
            in_s = i in block
            others = tuple(
                sorted(len(b) for b, bm in zip(part, part_masks) if bm != block_mask)
            )
            t_i = 0
            if not in_s:
                for b in part:
                    if i in b:
                        t_i = len(b)
            total += naive_weight(kind, n, s, in_s, others, t_i) * v
    return total


def shapley_by_permutations(n: int, char_fn) -> tuple[Fraction, ...]:
    acc = [Fraction(0)] * n
    orders = list(itertools.permutations(range(1, n + 1)))
    for order in orders:
        seen = 0
        prev = Fraction(0)
        for p in order:
            seen |= 1 << (p - 1)
            cur = Fraction(char_fn.get(seen, 0))
            acc[p - 1] += cur - prev
            prev = cur
    return tuple(a / len(orders) for a in acc)
