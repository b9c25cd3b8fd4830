import pytest

from nnp.ast import (BOT, TOP, And, Default, Lit, Or, Over, Rule, from_json, lit, parse,
                     parse_expr, parse_program, render, simplify_constants, to_json)
from nnp.errors import ParseError, PositionError
from nnp.testkit import CLASS_TARGETS, GenConfig, gen, gen_program

from corpus import INTRO_RULE, P, RUNNING


def test_parse_rule_structure():
    r = P(INTRO_RULE).rules[0]
    assert isinstance(r.head, And) and len(r.head.children) == 3
    assert isinstance(r.body, Or)
    assert r.body.children[1] == Default(lit("e"))
    assert r.head.children[0].children[0] == Over(Lit(lit("b")))
    assert r.head.children[0].children[1] == Lit(lit("-c"))


def test_fact_has_top_body():
    r = P(RUNNING).rules[0]
    assert r.body == TOP


@pytest.mark.parametrize("text", [INTRO_RULE, RUNNING, "bot <- and[b, not c].",
                                  "a.\n-b <- not a.\nor(bot, ~b, ~not c)."])
def test_text_round_trip(text):
    p = parse_program(text)
    assert parse_program(render(p)) == p


def test_json_round_trip():
    p = P(INTRO_RULE)
    assert from_json(to_json(p)) == p
    assert from_json(to_json(p.rules[0])) == p.rules[0]


def test_parse_dispatch():
    assert isinstance(parse("a."), type(P("a.")))
    assert parse("or(a, b)") == Or((Lit(lit("a")), Lit(lit("b"))))


def test_comments_and_whitespace():
    p = parse_program("# facts\na.  # trailing\n\n b <- a .")
    assert len(p.rules) == 2


@pytest.mark.parametrize("text", ["a <- ~b.", "not a.", "a <- .", "and[a, b", "a <- b",
                                  "or(a,, b).", "a <- not not b.", "and.", "a b."])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_program(text)


def test_position_errors():
    with pytest.raises(PositionError):
        parse_program("a <- ~b.")
    with pytest.raises(PositionError):
        parse_expr("not a", "head")
    assert parse_expr("~not a", "head") == Over(Default(lit("a")))


def test_parse_error_location():
    with pytest.raises(ParseError) as info:
        parse_program("a.\nb <- and[c, ].")
    assert info.value.line == 2


def test_simplify_constants():
    assert simplify_constants(parse_expr("and[a, top]")) == Lit(lit("a"))
    assert simplify_constants(parse_expr("or(a, top)")) == TOP
    assert simplify_constants(parse_expr("and[a, bot]")) == BOT
    assert simplify_constants(parse_expr("or(a, bot)")) == Lit(lit("a"))
    # positive ⊥ in a head encodes a constraint and is kept
    assert simplify_constants(parse_expr("or(bot, ~b)"), head=True) == \
        Or((BOT, Over(Lit(lit("b")))))
    assert simplify_constants(parse_expr("or(~bot, a)"), head=True) == Lit(lit("a"))


@pytest.mark.parametrize("target", CLASS_TARGETS)
def test_generated_round_trip(target):
    for seed in range(200):
        cfg = GenConfig(class_target=target, seed=seed)
        x = gen(cfg)
        if isinstance(x, Rule):
            x = gen_program(cfg)
            assert parse_program(render(x)) == x
        else:
            assert parse_expr(render(x)) == x
        assert from_json(to_json(x)) == x
