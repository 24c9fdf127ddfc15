"""Rule representations for games with externalities.

Plain MC-nets rules, embedded rules, weighted (bar-separated) rules, and
hybrid rules, together with a line-oriented text grammar and the
satisfaction semantics that turn rule sets into partition games.

Grammar (UTF-8, '#' starts a comment, one statement per line):

    players: <n>
    mc: LIT+ -> W
    embedded: LIT+ ( '|' LIT+ (',' LIT+)* )? -> W
    weighted: BLOCK ('|' BLOCK)*          BLOCK = "(LIT+ -> W)"+
    hybrid: (LIT+ -> W) (LIT+ -> 0)*

    LIT = INT | '!' INT        W = INT | INT '/' INT   (INT may be signed)
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .combinatorics import Partition, Rational, enumerate_set_partitions
from .core import (
    PartitionGame,
    canon_partition,
    coalition,
    full_coalition,
    members,
)

__all__ = [
    "BoolExpr",
    "McRule",
    "EmbeddedRule",
    "WeightedRule",
    "HybridRule",
    "RuleFile",
    "Rule",
    "ParseError",
    "WeightedSatisfaction",
    "parse_rules",
    "parse_rule_file",
    "render_rule",
    "render_rules",
    "render_rule_file",
    "satisfies_expr",
    "compatible",
    "satisfies_weighted",
    "satisfies_embedded",
    "satisfies_hybrid_simple",
    "game_of_rules",
    "mc_to_weighted",
]


class ParseError(ValueError):
    """Syntax or validity error in a rule or graph text, with position."""

    def __init__(self, line: int, col: int, message: str) -> None:
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col
        self.message = message


@dataclass(frozen=True)
class BoolExpr:
    """Conjunction of literals: all positives present, all negatives absent."""

    positives: int
    negatives: int

    def __post_init__(self) -> None:
        if self.positives == 0:
            raise ValueError("an expression needs at least one positive literal")
        if self.positives & self.negatives:
            raise ValueError("a player cannot be both positive and negative")


@dataclass(frozen=True)
class McRule:
    expr: BoolExpr
    weight: Fraction


@dataclass(frozen=True)
class EmbeddedRule:
    """Head expression for S itself, further expressions for other coalitions."""

    head: BoolExpr
    others: tuple[BoolExpr, ...]
    weight: Fraction


@dataclass(frozen=True)
class WeightedRule:
    """Bar-separated blocks of weighted expressions, satisfied by sub-partitions."""

    blocks: tuple[tuple[McRule, ...], ...]

    def __post_init__(self) -> None:
        if not self.blocks or any(not b for b in self.blocks):
            raise ValueError("a weighted rule needs at least one rule per block")

    def inner(self) -> Iterator[tuple[int, McRule]]:
        for b, block in enumerate(self.blocks):
            for rule in block:
                yield b, rule


@dataclass(frozen=True)
class HybridRule:
    """Single-block weighted rule whose positive sets partition 1..n.

    Only the first expression carries the (possibly zero) weight.
    """

    n: int
    exprs: tuple[BoolExpr, ...]
    weight: Fraction

    def __post_init__(self) -> None:
        union = 0
        for e in self.exprs:
            if e.positives & union:
                raise ValueError("positive sets of a hybrid rule must be disjoint")
            union |= e.positives
        if union != full_coalition(self.n):
            raise ValueError(f"positive sets of a hybrid rule must cover 1..{self.n}")

    def as_weighted(self) -> WeightedRule:
        zero = Fraction(0)
        inner = tuple(
            McRule(e, self.weight if idx == 0 else zero)
            for idx, e in enumerate(self.exprs)
        )
        return WeightedRule((inner,))


Rule = McRule | EmbeddedRule | WeightedRule | HybridRule


@dataclass(frozen=True)
class RuleFile:
    n: int
    rules: tuple[Rule, ...]


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<arrow>->)|(?P<bang>!)|(?P<lp>\()|(?P<rp>\))"
    r"|(?P<bar>\|)|(?P<comma>,)|(?P<slash>/)|(?P<minus>-)|(?P<bad>\S))"
)

_HEADER_RE = re.compile(r"players\s*:\s*(\d+)\s*$")
_TAG_RE = re.compile(r"(mc|embedded|weighted|hybrid)\s*:")


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    col: int


class _Scanner:
    def __init__(self, line_no: int, text: str, start: int) -> None:
        self.line_no = line_no
        self.tokens: list[_Token] = []
        pos = start
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                break
            kind = m.lastgroup or "bad"
            tok = _Token(kind, m.group(kind), m.start(kind) + 1)
            if kind == "bad":
                raise ParseError(line_no, tok.col, f"unexpected character {tok.text!r}")
            self.tokens.append(tok)
            pos = m.end()
        self.idx = 0
        self.end_col = len(text.rstrip()) + 1

    def peek(self) -> _Token | None:
        return self.tokens[self.idx] if self.idx < len(self.tokens) else None

    def next(self) -> _Token | None:
        tok = self.peek()
        if tok is not None:
            self.idx += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.next()
        if tok is None:
            raise ParseError(self.line_no, self.end_col, f"expected {what}")
        if tok.kind != kind:
            raise ParseError(self.line_no, tok.col, f"expected {what}, got {tok.text!r}")
        return tok

    def at_end(self) -> bool:
        return self.idx >= len(self.tokens)


def _parse_literals(sc: _Scanner, n: int) -> BoolExpr:
    pos = 0
    neg = 0
    first = True
    while True:
        tok = sc.peek()
        if tok is None or tok.kind not in ("int", "bang"):
            if first:
                col = tok.col if tok is not None else sc.end_col
                raise ParseError(sc.line_no, col, "expected a literal")
            break
        first = False
        negated = False
        if tok.kind == "bang":
            sc.next()
            negated = True
        num = sc.expect("int", "a player index")
        player = int(num.text)
        if not 1 <= player <= n:
            raise ParseError(sc.line_no, num.col, f"player {player} outside 1..{n}")
        bit = 1 << (player - 1)
        if (pos | neg) & bit:
            raise ParseError(sc.line_no, num.col, f"player {player} appears twice")
        if negated:
            neg |= bit
        else:
            pos |= bit
    if pos == 0:
        tok = sc.peek()
        col = tok.col if tok is not None else sc.end_col
        raise ParseError(sc.line_no, col, "an expression needs at least one positive literal")
    return BoolExpr(pos, neg)


def _parse_weight(sc: _Scanner) -> tuple[Fraction, int]:
    sign = 1
    tok = sc.peek()
    col = tok.col if tok is not None else sc.end_col
    if tok is not None and tok.kind == "minus":
        sc.next()
        sign = -1
    num = sc.expect("int", "a weight")
    value = Fraction(sign * int(num.text))
    tok = sc.peek()
    if tok is not None and tok.kind == "slash":
        sc.next()
        den = sc.expect("int", "a denominator")
        if int(den.text) == 0:
            raise ParseError(sc.line_no, den.col, "denominator cannot be 0")
        value = value / int(den.text)
    return value, col


def _parse_mc(sc: _Scanner, n: int) -> McRule:
    expr = _parse_literals(sc, n)
    sc.expect("arrow", "'->'")
    weight, _ = _parse_weight(sc)
    return McRule(expr, weight)


def _parse_embedded(sc: _Scanner, n: int) -> EmbeddedRule:
    head = _parse_literals(sc, n)
    others: list[BoolExpr] = []
    tok = sc.peek()
    if tok is not None and tok.kind == "bar":
        sc.next()
        others.append(_parse_literals(sc, n))
        while (tok := sc.peek()) is not None and tok.kind == "comma":
            sc.next()
            others.append(_parse_literals(sc, n))
    sc.expect("arrow", "'->'")
    weight, _ = _parse_weight(sc)
    return EmbeddedRule(head, tuple(others), weight)


def _parse_group(sc: _Scanner, n: int) -> tuple[BoolExpr, Fraction, int]:
    """One parenthesized '(literals -> weight)' group."""
    sc.expect("lp", "'('")
    expr = _parse_literals(sc, n)
    sc.expect("arrow", "'->'")
    weight, wcol = _parse_weight(sc)
    sc.expect("rp", "')'")
    return expr, weight, wcol


def _parse_weighted(sc: _Scanner, n: int) -> WeightedRule:
    blocks: list[tuple[McRule, ...]] = []
    while True:
        block: list[McRule] = []
        while (tok := sc.peek()) is not None and tok.kind == "lp":
            expr, weight, _ = _parse_group(sc, n)
            block.append(McRule(expr, weight))
        if not block:
            tok = sc.peek()
            col = tok.col if tok is not None else sc.end_col
            raise ParseError(sc.line_no, col, "expected '(' to open a rule group")
        blocks.append(tuple(block))
        tok = sc.peek()
        if tok is None:
            break
        if tok.kind != "bar":
            raise ParseError(sc.line_no, tok.col, f"expected '|' or end of line, got {tok.text!r}")
        sc.next()
    return WeightedRule(tuple(blocks))


def _parse_hybrid(sc: _Scanner, n: int) -> HybridRule:
    exprs: list[BoolExpr] = []
    weight = Fraction(0)
    first = True
    while not sc.at_end():
        expr, w, wcol = _parse_group(sc, n)
        if first:
            weight = w
            first = False
        elif w != 0:
            raise ParseError(sc.line_no, wcol, "only the first expression may carry a nonzero weight")
        exprs.append(expr)
    if first:
        raise ParseError(sc.line_no, sc.end_col, "expected '(' to open a rule group")
    union = 0
    for expr in exprs:
        if expr.positives & union:
            raise ParseError(
                sc.line_no, 1, "positive sets of a hybrid rule must be disjoint"
            )
        union |= expr.positives
    missing = full_coalition(n) & ~union
    if missing:
        raise ParseError(
            sc.line_no,
            1,
            f"positive sets must cover every player; missing {', '.join(map(str, members(missing)))}",
        )
    return HybridRule(n, tuple(exprs), weight)


def _iter_statements(text: str) -> Iterator[tuple[int, str]]:
    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0]
        if stripped.strip():
            yield line_no, stripped


def _parse_rule_line(line_no: int, line: str, n: int) -> Rule:
    m = _TAG_RE.match(line.lstrip())
    if m is None:
        indent = len(line) - len(line.lstrip())
        raise ParseError(line_no, indent + 1, "expected a rule tag (mc:, embedded:, weighted:, hybrid:)")
    tag = m.group(1)
    offset = (len(line) - len(line.lstrip())) + m.end()
    sc = _Scanner(line_no, line, offset)
    if tag == "mc":
        rule: Rule = _parse_mc(sc, n)
    elif tag == "embedded":
        rule = _parse_embedded(sc, n)
    elif tag == "weighted":
        rule = _parse_weighted(sc, n)
    else:
        rule = _parse_hybrid(sc, n)
    if not sc.at_end():
        tok = sc.peek()
        assert tok is not None
        raise ParseError(line_no, tok.col, f"unexpected trailing input {tok.text!r}")
    return rule


def parse_rules(text: str, n: int) -> tuple[Rule, ...]:
    """Parse rule lines (no header) against a known player count."""
    return tuple(_parse_rule_line(line_no, line, n) for line_no, line in _iter_statements(text))


def parse_rule_file(text: str) -> RuleFile:
    """Parse a full rule file: a 'players: n' header followed by rule lines."""
    statements = list(_iter_statements(text))
    if not statements:
        raise ParseError(1, 1, "missing 'players:' header")
    line_no, header = statements[0]
    m = _HEADER_RE.match(header.strip())
    if m is None:
        raise ParseError(line_no, 1, "first statement must be 'players: <n>'")
    n = int(m.group(1))
    if n < 1:
        raise ParseError(line_no, 1, "need at least one player")
    rules = tuple(_parse_rule_line(ln, line, n) for ln, line in statements[1:])
    return RuleFile(n, rules)


# ---------------------------------------------------------------------------
# rendering (canonical form; parse of render is identity)


def _render_expr(expr: BoolExpr) -> str:
    parts = [str(p) for p in members(expr.positives)]
    parts += [f"!{p}" for p in members(expr.negatives)]
    return " ".join(parts)


def _render_weight(w: Fraction) -> str:
    return str(w)


def _render_group(expr: BoolExpr, w: Fraction) -> str:
    return f"({_render_expr(expr)} -> {_render_weight(w)})"


def render_rule(rule: Rule) -> str:
    if isinstance(rule, McRule):
        return f"mc: {_render_expr(rule.expr)} -> {_render_weight(rule.weight)}"
    if isinstance(rule, EmbeddedRule):
        head = _render_expr(rule.head)
        if rule.others:
            tails = " , ".join(_render_expr(e) for e in rule.others)
            return f"embedded: {head} | {tails} -> {_render_weight(rule.weight)}"
        return f"embedded: {head} -> {_render_weight(rule.weight)}"
    if isinstance(rule, WeightedRule):
        blocks = " | ".join(
            "".join(_render_group(r.expr, r.weight) for r in block) for block in rule.blocks
        )
        return f"weighted: {blocks}"
    if isinstance(rule, HybridRule):
        groups = [_render_group(rule.exprs[0], rule.weight)]
        groups += [_render_group(e, Fraction(0)) for e in rule.exprs[1:]]
        return f"hybrid: {' '.join(groups)}"
    raise TypeError(f"not a rule: {rule!r}")


def render_rules(rules: Iterable[Rule]) -> str:
    return "\n".join(render_rule(r) for r in rules)


def render_rule_file(rf: RuleFile) -> str:
    body = render_rules(rf.rules)
    return f"players: {rf.n}\n{body}\n" if body else f"players: {rf.n}\n"


# ---------------------------------------------------------------------------
# satisfaction semantics


def satisfies_expr(s: int, expr: BoolExpr) -> bool:
    """Does coalition S contain all positives and avoid all negatives?"""
    return (expr.positives & ~s) == 0 and (expr.negatives & s) == 0


def compatible(a: BoolExpr, b: BoolExpr) -> bool:
    """Can one coalition satisfy both expressions?"""
    return ((a.positives | b.positives) & (a.negatives | b.negatives)) == 0


@dataclass(frozen=True)
class WeightedSatisfaction:
    """Outcome of matching a partition against a weighted rule.

    ``assignment`` lists, per rule block, the coalitions of the witnessing
    sub-partition; None when unsatisfied.
    """

    satisfied: bool
    assignment: tuple[tuple[int, ...], ...] | None


def satisfies_weighted(partition: Iterable[int], rule: WeightedRule) -> WeightedSatisfaction:
    """Match a partition against a weighted rule.

    Satisfied when the partition splits into one sub-partition per rule block
    such that every expression of a block is satisfied by some coalition of
    its own sub-partition. Found by exhaustive assignment with pruning on
    which expressions the remaining coalitions could still satisfy.
    """
    blocks = canon_partition(partition)
    m = len(rule.blocks)
    flat: list[tuple[int, BoolExpr]] = [(b, r.expr) for b, r in rule.inner()]
    need = [0] * m
    for rid, (b, _) in enumerate(flat):
        need[b] |= 1 << rid
    sat_masks = []
    for s in blocks:
        mask = 0
        for rid, (_, expr) in enumerate(flat):
            if satisfies_expr(s, expr):
                mask |= 1 << rid
        sat_masks.append(mask)
    # suffix[t]: union of what coalitions t.. could still satisfy
    suffix = [0] * (len(blocks) + 1)
    for t in range(len(blocks) - 1, -1, -1):
        suffix[t] = suffix[t + 1] | sat_masks[t]

    assign = [0] * len(blocks)
    covered = [0] * m

    def search(t: int) -> bool:
        if t == len(blocks):
            return all((covered[b] & need[b]) == need[b] for b in range(m))
        remaining = suffix[t]
        for b in range(m):
            if need[b] & ~covered[b] & ~remaining:
                return False
        for b in range(m):
            assign[t] = b
            before = covered[b]
            covered[b] = before | sat_masks[t]
            if search(t + 1):
                return True
            covered[b] = before
        return False

    if m > len(blocks) or not search(0):
        return WeightedSatisfaction(False, None)
    groups: list[list[int]] = [[] for _ in range(m)]
    for t, b in enumerate(assign):
        groups[b].append(blocks[t])
    return WeightedSatisfaction(True, tuple(tuple(g) for g in groups))


def satisfies_embedded(s: int, partition: Iterable[int], rule: EmbeddedRule) -> bool:
    """Does (S, P) satisfy the rule: S matches the head, each further
    expression is matched by some other coalition of P?"""
    blocks = canon_partition(partition)
    if s not in blocks:
        raise ValueError("S must be a block of the partition")
    if not satisfies_expr(s, rule.head):
        return False
    for expr in rule.others:
        if not any(t != s and satisfies_expr(t, expr) for t in blocks):
            return False
    return True


def satisfies_hybrid_simple(s: int, partition: Iterable[int], rule: HybridRule) -> bool:
    """Direct reading for hybrid rules: S matches the first expression and
    every later expression is matched by some coalition of P."""
    blocks = canon_partition(partition)
    if s not in blocks:
        raise ValueError("S must be a block of the partition")
    if not satisfies_expr(s, rule.exprs[0]):
        return False
    for expr in rule.exprs[1:]:
        if not any(satisfies_expr(t, expr) for t in blocks):
            return False
    return True


def mc_to_weighted(rule: McRule) -> WeightedRule:
    return WeightedRule(((rule,),))


def game_of_rules(rules: Iterable[Rule], n: int, cap: int | None = None) -> PartitionGame:
    """Explicit partition game induced by a rule multiset, additively."""
    rule_list = list(rules)
    store: dict[tuple[int, Partition], Fraction] = {}

    def add(s: int, partition: Partition, v: Fraction) -> None:
        if v:
            key = (s, partition)
            store[key] = store.get(key, Fraction(0)) + v

    for partition in enumerate_set_partitions(n, cap):
        for rule in rule_list:
            if isinstance(rule, McRule):
                for s in partition:
                    if satisfies_expr(s, rule.expr):
                        add(s, partition, rule.weight)
            elif isinstance(rule, EmbeddedRule):
                for s in partition:
                    if satisfies_embedded(s, partition, rule):
                        add(s, partition, rule.weight)
            else:
                weighted = rule.as_weighted() if isinstance(rule, HybridRule) else rule
                if satisfies_weighted(partition, weighted).satisfied:
                    for s in partition:
                        gain = Fraction(0)
                        for _, mc in weighted.inner():
                            if mc.weight and satisfies_expr(s, mc.expr):
                                gain += mc.weight
                        add(s, partition, gain)
    return PartitionGame(n, store)
