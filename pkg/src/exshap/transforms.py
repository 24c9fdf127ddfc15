"""Conversions between the rule kinds.

Every rule kind normalizes to hybrid rules; hybrid rules satisfying the
separation condition checked by ``check_star`` convert back to embedded
rules. All conversions preserve the induced partition game exactly.
"""

from __future__ import annotations

from fractions import Fraction

from .core import full_coalition, members
from .rules import (
    BoolExpr,
    EmbeddedRule,
    HybridRule,
    McRule,
    Rule,
    WeightedRule,
    compatible,
    mc_to_weighted,
)

__all__ = [
    "StarViolationError",
    "check_star",
    "weighted_to_hybrid",
    "embedded_to_hybrid",
    "hybrid_to_embedded",
    "to_hybrid",
    "to_embedded",
]


class StarViolationError(ValueError):
    """A hybrid rule has no embedded counterpart; names the offending pair."""

    def __init__(self, first: int, second: int, reason: str) -> None:
        super().__init__(f"expressions {first} and {second} {reason}")
        self.pair = (first, second)


def _star_violation(rule: HybridRule) -> tuple[int, int, str] | None:
    """First violation of the separation condition, as 1-based indices.

    The condition: every expression after the first that is compatible with
    the first must have a single positive player, and all such expressions
    must be pairwise compatible.
    """
    first = rule.exprs[0]
    friendly = [
        idx for idx in range(1, len(rule.exprs)) if compatible(first, rule.exprs[idx])
    ]
    for idx in friendly:
        if rule.exprs[idx].positives.bit_count() != 1:
            return (1, idx + 1, "are compatible but the latter is not singleton-positive")
    for a in range(len(friendly)):
        for b in range(a + 1, len(friendly)):
            i, j = friendly[a], friendly[b]
            if not compatible(rule.exprs[i], rule.exprs[j]):
                return (i + 1, j + 1, "are both compatible with expression 1 yet incompatible")
    return None


def check_star(rule: HybridRule) -> bool:
    return _star_violation(rule) is None


def _padding(n: int, covered: int) -> list[BoolExpr]:
    return [
        BoolExpr(1 << (p - 1), 0) for p in members(full_coalition(n) & ~covered)
    ]


def weighted_to_hybrid(rule: WeightedRule | McRule, n: int) -> tuple[HybridRule, ...]:
    """Split a weighted rule into hybrid rules with the same game sum.

    Inner expressions with overlapping positive sets must share a coalition,
    so across separate rule groups they make the rule unsatisfiable, and
    within a group they either merge (weights added) or clash. The group
    separation itself is then encoded by negating, in each expression, the
    positive players owned by other groups. One hybrid rule is emitted per
    surviving nonzero weight; an unsatisfiable or all-zero rule gives ().
    """
    if isinstance(rule, McRule):
        rule = mc_to_weighted(rule)
    entries: list[tuple[int, int, int, Fraction]] = [
        (b, mc.expr.positives, mc.expr.negatives, mc.weight) for b, mc in rule.inner()
    ]
    merged = True
    while merged:
        merged = False
        for a in range(len(entries)):
            ba, pa, na, wa = entries[a]
            for b in range(a + 1, len(entries)):
                bb, pb, nb, wb = entries[b]
                if not pa & pb:
                    continue
                if ba != bb:
                    return ()
                if (pa | pb) & (na | nb):
                    return ()
                entries[a] = (ba, pa | pb, na | nb, wa + wb)
                del entries[b]
                merged = True
                break
            if merged:
                break

    all_pos = 0
    block_pos: dict[int, int] = {}
    for b, pos, _, _ in entries:
        all_pos |= pos
        block_pos[b] = block_pos.get(b, 0) | pos
    betas = [
        (pos, neg | (all_pos & ~block_pos[b]), w) for b, pos, neg, w in entries
    ]
    pads = _padding(n, all_pos)

    out: list[HybridRule] = []
    for lead in range(len(betas)):
        pos, neg, w = betas[lead]
        if w == 0:
            continue
        exprs = [BoolExpr(pos, neg)]
        exprs += [
            BoolExpr(p2, n2) for idx, (p2, n2, _) in enumerate(betas) if idx != lead
        ]
        exprs += pads
        out.append(HybridRule(n, tuple(exprs), w))
    return tuple(out)


def _zero_hybrid(n: int) -> HybridRule:
    return HybridRule(
        n, tuple(BoolExpr(1 << p, 0) for p in range(n)), Fraction(0)
    )


def embedded_to_hybrid(rule: EmbeddedRule, n: int) -> HybridRule:
    """Rewrite an embedded rule as one hybrid rule with the same game.

    Tail expressions sharing positive players must be met by one coalition,
    so they merge when compatible; a clash there, or a positive shared with
    the head, makes the rule unsatisfiable and yields the all-singleton
    zero-weight hybrid. The head then takes every tail positive as a
    negative, and uncovered players are padded as zero-weight singletons.
    The result always passes ``check_star``.
    """
    tails: list[tuple[int, int]] = [(t.positives, t.negatives) for t in rule.others]
    merged = True
    while merged:
        merged = False
        for a in range(len(tails)):
            pa, na = tails[a]
            if pa & rule.head.positives:
                return _zero_hybrid(n)
            for b in range(a + 1, len(tails)):
                pb, nb = tails[b]
                if not pa & pb:
                    continue
                if (pa | pb) & (na | nb):
                    return _zero_hybrid(n)
                tails[a] = (pa | pb, na | nb)
                del tails[b]
                merged = True
                break
            if merged:
                break

    tail_pos = 0
    for pos, _ in tails:
        tail_pos |= pos
    head = BoolExpr(rule.head.positives, rule.head.negatives | tail_pos)
    exprs = [head] + [BoolExpr(pos, neg) for pos, neg in tails]
    exprs += _padding(n, rule.head.positives | tail_pos)
    return HybridRule(n, tuple(exprs), rule.weight)


def hybrid_to_embedded(rule: HybridRule) -> EmbeddedRule:
    """Rewrite a hybrid rule passing ``check_star`` as one embedded rule.

    Expressions compatible with the first dissolve: such an expression pins
    a single player q, and each of its negated players p is owned by an
    expression that stays a tail, where the same separation reads as "q is
    not with p"; that tail gains the negative literal for q. A final pass
    drops negatives that restate the head/tail positive split.
    """
    violation = _star_violation(rule)
    if violation is not None:
        raise StarViolationError(*violation)
    first = rule.exprs[0]
    keep: list[int] = []
    dissolve: list[int] = []
    for idx in range(1, len(rule.exprs)):
        (dissolve if compatible(first, rule.exprs[idx]) else keep).append(idx)

    owner: dict[int, int] = {}
    for idx in keep:
        for p in members(rule.exprs[idx].positives):
            owner[p] = idx
    extra_neg: dict[int, int] = {idx: 0 for idx in keep}
    for idx in dissolve:
        expr = rule.exprs[idx]
        for p in members(expr.negatives):
            target = owner.get(p)
            if target is None:
                raise AssertionError(
                    f"player {p} negated by a dissolving expression has no owning tail"
                )
            extra_neg[target] |= expr.positives

    kept_pos = 0
    for idx in keep:
        kept_pos |= rule.exprs[idx].positives
    head = BoolExpr(first.positives, first.negatives & ~kept_pos)
    tails = tuple(
        BoolExpr(
            rule.exprs[idx].positives,
            (rule.exprs[idx].negatives | extra_neg[idx]) & ~first.positives,
        )
        for idx in keep
    )
    return EmbeddedRule(head, tails, rule.weight)


def to_hybrid(rule: Rule, n: int) -> tuple[HybridRule, ...]:
    """Normalize any rule to an equivalent tuple of hybrid rules."""
    if isinstance(rule, HybridRule):
        if rule.n != n:
            raise ValueError(f"rule is over {rule.n} players, expected {n}")
        return (rule,)
    if isinstance(rule, (McRule, WeightedRule)):
        return weighted_to_hybrid(rule, n)
    if isinstance(rule, EmbeddedRule):
        return (embedded_to_hybrid(rule, n),)
    raise TypeError(f"not a rule: {rule!r}")


def to_embedded(rule: Rule, n: int) -> tuple[EmbeddedRule, ...]:
    """Normalize any rule to equivalent embedded rules where possible.

    Raises StarViolationError when a hybrid form fails the separation
    condition.
    """
    if isinstance(rule, EmbeddedRule):
        return (rule,)
    if isinstance(rule, McRule):
        return (EmbeddedRule(rule.expr, (), rule.weight),)
    return tuple(hybrid_to_embedded(h) for h in to_hybrid(rule, n))
