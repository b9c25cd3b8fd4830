"""Seeded invariant suites beyond the acceptance gate."""

import random

import pytest

from nnp.ast import BOT, TOP, And, Atom, Lit, Literal, Or, Over, Rule
from nnp.calculus import to_horn_expression, ur_least_model
from nnp.classify import Kind, classify_rule, is_normal_program
from nnp.delta import positive_occurrences
from nnp.errors import InconsistentResult, NotSplittable
from nnp.semantics import (_generic_sat, answer_sets, consistent_subsets, nt_step,
                           reduct_generic, strongly_equivalent)
from nnp.testkit import GenConfig, gen_program, universe_of
from nnp.translate import cnf_head_of, fn_of, nn_of, split_dnp

from checks import SEEDS, nnp_program, not_free_program


def test_fn_output_is_normal():
    for s in SEEDS:
        p = nnp_program(s)
        assert is_normal_program(fn_of(cnf_head_of(p))), s
        assert is_normal_program(nn_of(p)), s


def test_engines_agree_on_answer_sets():
    for s in range(300):
        p = nnp_program(s)
        assert answer_sets(p, engine="ur") == answer_sets(p, engine="fixpoint"), s


def test_hyper_and_single_resolution_agree():
    for s in SEEDS:
        p = not_free_program(s)
        a = ur_least_model(to_horn_expression(p))
        b = ur_least_model(to_horn_expression(p), hyper=True)
        assert type(a) is type(b), s
        assert getattr(a, "model", None) == getattr(b, "model", None), s


def test_trace_bounds():
    for s in SEEDS:
        res = ur_least_model(to_horn_expression(not_free_program(s)))
        assert res.trace.within_bounds(), s


def test_fixpoint_iteration_count():
    for s in SEEDS:
        p = not_free_program(s, head_consistent=True)
        bound = sum(len(positive_occurrences(r.head)) for r in p.rules)
        current, steps = frozenset(), 0
        try:
            while True:
                nxt = nt_step(p, current)
                if nxt == current or BOT in nxt:
                    break
                current, steps = nxt, steps + 1
        except InconsistentResult:
            continue
        assert steps <= bound, s


def _generic_answer_sets(p):
    subs = list(consistent_subsets(universe_of(p)))
    out = set()
    for i in subs:
        red = reduct_generic(p, i).rules
        if not all(_generic_sat(i, r) for r in red):
            continue
        if any(j < i and all(_generic_sat(j, r) for r in red) for j in subs):
            continue
        out.add(frozenset(i))
    return out


def test_split_union_property():
    checked = 0
    for s in SEEDS:
        p = gen_program(GenConfig(class_target="dnp_rule", seed=s, atom_count=4, rule_count=2,
                                  max_depth=2, fact_rate=0.4))
        try:
            parts = split_dnp(p)
        except NotSplittable:
            continue
        for q in parts:
            assert all(classify_rule(r).kind is Kind.NNP for r in q.rules), s
        found = set()
        for q in parts:
            found |= {frozenset(x) for x in answer_sets(q)}
        assert _generic_answer_sets(p) <= found, s
        checked += 1
    assert checked >= 300


def test_generic_semantics_matches_on_nnp():
    for s in range(300):
        p = nnp_program(s, atoms=3)
        assert _generic_answer_sets(p) == {frozenset(x) for x in answer_sets(p)}, s


def _dnf_head(rng, n_terms, positive_terms):
    atoms = [Atom(f"q{k}") for k in range(5)]
    terms = []
    for k in range(n_terms):
        width = rng.randint(1, 3)
        lits = [Lit(Literal(rng.choice(atoms), rng.random() < 0.3)) for _ in range(width)]
        if k < positive_terms:
            if rng.random() < 0.2:
                lits.append(BOT)
            items = lits
        else:
            items = [Over(x) for x in lits]
        terms.append(items[0] if len(items) == 1 else And(tuple(items)))
    rng.shuffle(terms)
    return Or(tuple(terms))


def test_dnf_head_shape_rule():
    for s in SEEDS:
        rng = random.Random(s)
        n = rng.randint(2, 4)
        good = Rule(_dnf_head(rng, n, 1), TOP)
        bad = Rule(_dnf_head(rng, n, rng.randint(2, n)), TOP)
        assert classify_rule(good).kind is Kind.NNP, s
        assert classify_rule(bad).kind is not Kind.NNP, s


def test_strong_equivalence_witnesses_are_real():
    for s in range(300):
        p, q = nnp_program(s, atoms=3), nnp_program(s + 1, atoms=3)
        res = strongly_equivalent(p, q)
        assert strongly_equivalent(p, p)
        if not res:
            i, j = res.witness
            sat = [all(_generic_sat(j, r) for r in reduct_generic(x, i).rules) for x in (p, q)]
            assert sat[0] != sat[1], s


@pytest.mark.parametrize("target", ["nnp_rule", "not_free", "np_rule"])
def test_cli_text_and_json_agree(tmp_path, target):
    import json
    from nnp.ast import render
    from nnp.cli import run
    for s in range(40):
        p = gen_program(GenConfig(class_target=target, seed=s, atom_count=4, rule_count=3,
                                  fact_rate=0.3))
        path = tmp_path / f"{s}.nnp"
        path.write_text(render(p))
        for cmd in (["as", "--all"], ["classify"], ["translate"]):
            text = run([cmd[0], str(path), *cmd[1:]])
            body = json.loads(run(["--json", cmd[0], str(path), *cmd[1:]]).payload)
            assert text.exit_code == body["exit_code"]
            if cmd[0] == "as":
                lines = [] if text.exit_code else text.payload.splitlines()
                got = [sorted(x.strip() for x in line.strip("{}").split(",") if x.strip())
                       for line in lines]
                assert sorted(got) == sorted(sorted(a) for a in body["answer_sets"])
            if cmd[0] == "translate":
                from nnp.ast import from_json
                assert render(from_json(body["program"])).rstrip("\n") == text.payload
