import pytest

from nnp.ast import Rule, lit
from nnp.classify import (Kind, classify_rule, is_horn, is_negative, is_np_rule,
                          is_not_free_expr, is_positive_horn, is_positive_non_horn)
from nnp.errors import NotCNF, UniverseTooLarge
from nnp.semantics import answer_sets, least_model_fixpoint
from nnp.testkit import (CLASS_TARGETS, GenConfig, brute_least_model, brute_models,
                         classical_unit_propagation, cnf_clauses, gen, gen_program,
                         gl_reference_answer_sets)
from nnp.translate import nn_of

from corpus import INTRO_NP, MM_R1, H, I, P

CHECKS = {
    "negative": is_negative,
    "horn": is_horn,
    "positive_horn": is_positive_horn,
    "positive_non_horn": is_positive_non_horn,
    "nnp_rule": lambda r: classify_rule(r).kind is Kind.NNP,
    "dnp_rule": lambda r: classify_rule(r).kind is Kind.DNP,
    "np_rule": is_np_rule,
    "not_free": lambda r: (classify_rule(r).kind is Kind.NNP
                           and is_not_free_expr(r.head) and is_not_free_expr(r.body)),
}


@pytest.mark.parametrize("target", CLASS_TARGETS)
def test_generators_hit_their_class(target):
    for seed in range(1000):
        x = gen(GenConfig(class_target=target, seed=seed))
        assert CHECKS[target](x), (target, seed, x)


def test_determinism():
    for target in CLASS_TARGETS:
        cfg = GenConfig(class_target=target, seed=7)
        assert gen(cfg) == gen(cfg)
        assert gen_program(cfg) == gen_program(cfg)


def test_np_rule_shape():
    r = gen(GenConfig(class_target="np_rule", seed=3))
    assert isinstance(r, Rule) and is_np_rule(r)


def test_bad_config():
    with pytest.raises(ValueError):
        GenConfig(class_target="nope")


def test_brute_models():
    assert brute_models(H("a")) == {frozenset({lit("a")})}
    assert brute_models(H("bot")) == set()
    assert I("e,m,b,c,g") in brute_models(P(MM_R1))
    with pytest.raises(UniverseTooLarge):
        brute_models(P(" ".join(f"p{k}." for k in range(6))), bound=5)


def test_brute_least_model():
    assert brute_least_model(P("a.\nb <- a.")) == I("a,b")
    assert brute_least_model(P("a.\nbot <- a.")) is None


def test_unit_propagation():
    a, b = lit("a"), lit("b")
    res = classical_unit_propagation([[(a, True)], [(a, False), (b, True)]])
    assert res.true_literals == {a, b} and not res.conflict
    assert classical_unit_propagation([[(a, True)], [(a, False)]]).conflict
    assert classical_unit_propagation([[(a, True)], [(lit("-a"), True)]]).conflict
    with pytest.raises(NotCNF):
        cnf_clauses(H("or(a, and[b, c])"))


def test_unit_propagation_matches_np_fixpoint():
    # the reference rules with every body literal asserted as a fact
    facts = ["a", "-e", "m", "d", "-f"]
    text = "\n".join(f"{h} <- and[{', '.join(sorted(body))}]." if len(body) > 1 else
                     f"{h} <- {next(iter(body))}." for h, body in INTRO_NP)
    text = text.replace("not e", "-e").replace("not f", "-f")
    p = P(text + "\n" + "\n".join(f"{f}." for f in facts))
    from nnp.calculus import to_horn_expression
    clauses = cnf_clauses(to_horn_expression(p).expr)
    assert classical_unit_propagation(clauses).true_literals == least_model_fixpoint(p)


def test_gl_reference():
    assert gl_reference_answer_sets(P("a <- not b.")) == {I("a")}
    assert gl_reference_answer_sets(P("a <- not a.")) == set()
    p = P("a.\nb <- a.\nc <- and[b, a].")
    assert gl_reference_answer_sets(p) == {least_model_fixpoint(p)}


def test_oracle_matches_engine_on_a_fixture():
    p = P(MM_R1 + "\nm.")
    assert answer_sets(p) == gl_reference_answer_sets(nn_of(p))
