"""Conversions between rule representations preserve the game."""

from fractions import Fraction
from random import Random

import pytest

from exshap import (
    EmbeddedRule,
    HybridRule,
    McRule,
    StarViolationError,
    check_star,
    embedded_to_hybrid,
    game_of_rules,
    hybrid_to_embedded,
    parse_rule_file,
    parse_rules,
    render_rule,
    to_embedded,
    to_hybrid,
    weighted_to_hybrid,
)

from .helpers import (
    random_embedded,
    random_hybrid,
    random_mc,
    random_star_hybrid,
    random_weighted,
)

EXAMPLE_HYBRID_TEXT = (
    "hybrid: (1 2 !3 !4 !5 -> 1) (3 5 !6 -> 0) (4 !3 !6 -> 0) (6 -> 0)"
)
EXAMPLE_EMBEDDED_TEXT = "embedded: 1 2 | 3 5 !6 , 4 !3 !6 -> 1"


def test_example_hybrid_to_embedded_exact():
    (rule,) = parse_rules(EXAMPLE_HYBRID_TEXT + "\n", 6)
    emb = hybrid_to_embedded(rule)
    assert render_rule(emb) == EXAMPLE_EMBEDDED_TEXT


def test_example_embedded_to_hybrid_exact():
    (rule,) = parse_rules(EXAMPLE_EMBEDDED_TEXT + "\n", 6)
    hyb = embedded_to_hybrid(rule, 6)
    assert render_rule(hyb) == EXAMPLE_HYBRID_TEXT


def test_weighted_to_hybrid_preserves_game():
    rng = Random(83)
    for _ in range(60):
        n = rng.randrange(1, 6)
        rule = random_weighted(rng, n)
        hybrids = weighted_to_hybrid(rule, n)
        assert game_of_rules((rule,), n) == game_of_rules(hybrids, n)


def test_weighted_to_hybrid_one_rule_per_nonzero_weight():
    rng = Random(89)
    for _ in range(40):
        n = rng.randrange(1, 6)
        rule = random_weighted(rng, n)
        hybrids = weighted_to_hybrid(rule, n)
        nonzero = sum(
            1 for _, inner in rule.inner() if inner.weight != 0
        )
        assert len(hybrids) <= nonzero
        for h in hybrids:
            assert h.weight != 0
            assert h.n == n


def test_weighted_to_hybrid_size_bound():
    rng = Random(97)
    for _ in range(40):
        n = rng.randrange(1, 7)
        rule = random_weighted(rng, n)
        total_inner = sum(1 for _ in rule.inner())
        for h in weighted_to_hybrid(rule, n):
            assert len(h.exprs) <= total_inner**3 + n * total_inner


def test_mc_to_hybrid_preserves_game():
    rng = Random(101)
    for _ in range(40):
        n = rng.randrange(1, 6)
        rule = random_mc(rng, n)
        hybrids = to_hybrid(rule, n)
        assert game_of_rules((rule,), n) == game_of_rules(hybrids, n)


def test_embedded_to_hybrid_preserves_game_and_star():
    rng = Random(103)
    for _ in range(60):
        n = rng.randrange(1, 6)
        rule = random_embedded(rng, n)
        hyb = embedded_to_hybrid(rule, n)
        assert check_star(hyb)
        assert game_of_rules((rule,), n) == game_of_rules((hyb,), n)


def test_unsatisfiable_embedded_collapses_to_zero_weight():
    # head and tail demand player 1 in different coalitions
    (rule,) = parse_rules("embedded: 1 | 1 2 -> 3\n", 3)
    hyb = embedded_to_hybrid(rule, 3)
    assert hyb.weight == 0
    assert game_of_rules((rule,), 3).support_size() == 0


def test_star_violation_compatible_non_singleton():
    text = (
        "players: 6\n"
        "hybrid: (1 !2 -> 1) (2 !1 !3 -> 0) (3 !2 -> 0) "
        "(4 6 !5 -> 0) (5 !4 !6 -> 0)\n"
    )
    rf = parse_rule_file(text)
    with pytest.raises(StarViolationError) as err:
        hybrid_to_embedded(rf.rules[0])
    assert err.value.pair == (1, 4)
    assert "singleton" in str(err.value)


def test_star_violation_incompatible_pair_of_compatible_tails():
    (rule,) = parse_rules("hybrid: (1 -> 1) (2 !3 -> 0) (3 !2 -> 0)\n", 3)
    with pytest.raises(StarViolationError) as err:
        hybrid_to_embedded(rule)
    assert err.value.pair == (2, 3)


def test_star_hybrid_roundtrip_preserves_game():
    rng = Random(107)
    for _ in range(60):
        n = rng.randrange(1, 7)
        rule = random_star_hybrid(rng, n)
        check_star(rule)
        emb = hybrid_to_embedded(rule)
        assert game_of_rules((rule,), n) == game_of_rules((emb,), n)
        back = embedded_to_hybrid(emb, n)
        assert game_of_rules((back,), n) == game_of_rules((rule,), n)


def test_to_hybrid_dispatch():
    rng = Random(109)
    n = 4
    hyb = random_hybrid(rng, n)
    assert to_hybrid(hyb, n) == (hyb,)
    with pytest.raises(ValueError):
        to_hybrid(hyb, n + 1)
    emb = random_embedded(rng, n)
    (converted,) = to_hybrid(emb, n)
    assert isinstance(converted, HybridRule)


def test_to_embedded_dispatch():
    rng = Random(113)
    n = 4
    emb = random_embedded(rng, n)
    assert to_embedded(emb, n) == (emb,)
    mc = random_mc(rng, n)
    out = to_embedded(mc, n)
    assert len(out) == 1 and isinstance(out[0], EmbeddedRule)
    assert game_of_rules((mc,), n) == game_of_rules(out, n)


def test_mc_and_weighted_to_embedded_preserve_game():
    rng = Random(127)
    makers = [random_mc, random_star_hybrid]
    for _ in range(40):
        n = rng.randrange(1, 6)
        rule = rng.choice(makers)(rng, n)
        embs = to_embedded(rule, n)
        assert all(isinstance(e, EmbeddedRule) for e in embs)
        assert game_of_rules((rule,), n) == game_of_rules(embs, n)
