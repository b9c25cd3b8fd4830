"""Property checks shared by the property suites and the acceptance gate.

Each check runs over a seed range and returns the list of counterexamples."""

from __future__ import annotations

import random

from nnp.ast import TOP, Program, Rule, parse_program
from nnp.calculus import (NO_CHANGE, HornWork, Inconsistent, LeastModel, simplify_step,
                          to_horn_expression, ur_least_model)
from nnp.classify import is_head_consistent
from nnp.delta import h_delta
from nnp.errors import ConstraintFired, InconsistentResult
from nnp.semantics import (answer_sets, consistent_subsets, is_closed, is_supported,
                           least_model_fixpoint, minimal_models, nt_step, reduct,
                           satisfies, strongly_equivalent)
from nnp.testkit import (GenConfig, brute_least_model, brute_models,
                         classical_tp, classical_unit_propagation, cnf_clauses, gen,
                         gen_program, gl_reference_answer_sets, universe_of)
from nnp.translate import nn1_of, nn_of

SEEDS = range(1000)


def nnp_program(seed, atoms=4, rules=4, depth=2, **kw) -> Program:
    """Odd seeds get an extra even loop through `not`, so several answer sets occur."""
    p = gen_program(GenConfig(class_target="nnp_rule", seed=seed, atom_count=atoms,
                              rule_count=rules, max_depth=depth, fact_rate=0.3, **kw))
    if seed % 2:
        rng = random.Random(seed)
        x, y = rng.sample([f"p{k}" for k in range(atoms)], 2)
        p = Program(p.rules + parse_program(f"{x} <- not {y}.\n{y} <- not {x}.").rules)
    return p


def not_free_program(seed, atoms=4, rules=5, depth=2, **kw) -> Program:
    return gen_program(GenConfig(class_target="not_free", seed=seed, atom_count=atoms,
                                 rule_count=rules, max_depth=depth, fact_rate=0.3, **kw))


def np_program(seed, atoms=4, rules=5, defaults=True) -> Program:
    return gen_program(GenConfig(class_target="np_rule", seed=seed, atom_count=atoms,
                                 rule_count=rules, defaults=defaults))


def _outcome(fn):
    try:
        return fn()
    except InconsistentResult:
        return None


# ------------------------------------------------------------ oracle suites

def answer_sets_vs_reference(seeds=SEEDS):
    bad = []
    for s in seeds:
        p = nnp_program(s)
        if answer_sets(p) != gl_reference_answer_sets(nn_of(p), universe_of(p)):
            bad.append(s)
    return bad


def least_model_engines(seeds=SEEDS):
    bad = []
    for s in seeds:
        p = not_free_program(s, head_consistent=True)
        ur = _outcome(lambda: least_model_fixpoint(p, "ur"))
        fx = _outcome(lambda: least_model_fixpoint(p, "fixpoint"))
        brute = brute_least_model(p)
        if not (ur == fx == brute):
            bad.append(s)
    return bad


def _steps(w: HornWork):
    """Drive single NUR and simplification steps, yielding after each."""
    while True:
        while simplify_step(w) is not NO_CHANGE:
            yield
        for lit, positive in w.units():
            occs = w.occurrences(lit, positive=not positive)
            if occs:
                from nnp.calculus import apply_nur
                apply_nur(w, lit, occs[0], positive)
                yield
                break
        else:
            return


def ur_steps_preserve_models(seeds=SEEDS):
    bad = []
    for s in seeds:
        p = not_free_program(s)
        w = to_horn_expression(p)
        universe = universe_of(w.expr)
        expected = brute_models(w.expr, universe)
        for _ in _steps(w):
            if brute_models(w.expr, universe) != expected:
                bad.append(s)
                break
    return bad


def translations_strongly_equivalent(seeds=SEEDS):
    bad = []
    for s in seeds:
        p = nnp_program(s, atoms=3)
        q = nn_of(p)
        if not strongly_equivalent(p, q) or not strongly_equivalent(q, nn1_of(p)):
            bad.append(s)
    return bad


def h_delta_strongly_equivalent(seeds=SEEDS):
    bad = []
    for s in seeds:
        h = gen(GenConfig(class_target="positive_horn", seed=s, atom_count=4))
        one = Program((Rule(h, TOP),))
        two = Program((Rule(h_delta(h).as_expr(), TOP),))
        if not strongly_equivalent(one, two) or brute_models(h) != brute_models(
                h_delta(h).as_expr(), universe_of(h)):
            bad.append(s)
    return bad


# ------------------------------------------------------- normal programs

def _random_interp(rng, universe):
    picks = set()
    for l in sorted(universe, key=lambda l: l.key):
        if l.complement() not in picks and rng.random() < 0.4:
            picks.add(l)
    return frozenset(picks)


def nt_matches_tp(seeds=SEEDS, samples=8):
    bad = []
    for s in seeds:
        p = np_program(s)
        rng = random.Random(s)
        for _ in range(samples):
            i = _random_interp(rng, universe_of(p))
            ref = classical_tp(p, i)
            lits = {l for l in ref if l is not None and hasattr(l, "atom")} | set(i)
            try:
                got = nt_step(p, i)
            except InconsistentResult:
                if any(l.complement() in lits for l in lits):
                    continue
                bad.append(s)
                break
            if got != ref:
                bad.append(s)
                break
    return bad


def ur_matches_unit_propagation(seeds=SEEDS):
    bad = []
    for s in seeds:
        for p in (np_program(s, defaults=False), nn_of(not_free_program(s))):
            w = to_horn_expression(p)
            up = classical_unit_propagation(cnf_clauses(w.expr))
            res = ur_least_model(w)
            if isinstance(res, Inconsistent) != up.conflict:
                bad.append(s)
                break
            if isinstance(res, LeastModel) and res.model != up.true_literals:
                bad.append(s)
                break
    return bad


# ------------------------------------------------------ semantic properties

def models_are_closed(seeds=SEEDS):
    bad = []
    for s in seeds:
        p = nnp_program(s)
        for i in consistent_subsets(p.literals()):
            if satisfies(i, p) and not is_closed(i, p):
                bad.append(s)
                break
    return bad


def minimal_models_supported(seeds=SEEDS):
    bad = []
    for s in seeds:
        p = not_free_program(s)
        if any(not is_supported(m, p) for m in minimal_models(p)):
            bad.append(s)
    return bad


def answer_sets_minimal_closed(seeds=SEEDS):
    bad = []
    for s in seeds:
        p = nnp_program(s)
        found = answer_sets(p)
        if not found:
            continue
        mins = minimal_models(p)
        if any(a not in mins or not is_closed(a, p) or not is_supported(a, p)
               for a in found):
            bad.append(s)
    return bad


def nt_monotone(seeds=SEEDS, samples=6):
    bad = []
    for s in seeds:
        p = not_free_program(s, head_consistent=True)
        rng = random.Random(s)
        universe = p.literals()
        for _ in range(samples):
            j = _random_interp(rng, universe)
            i = frozenset(l for l in j if rng.random() < 0.5)
            try:
                if not nt_step(p, i) <= nt_step(p, j):
                    bad.append(s)
                    break
            except InconsistentResult:
                continue
    return bad


def reduct_not_free_idempotent(seeds=SEEDS, samples=4):
    from nnp.classify import is_not_free_expr
    bad = []
    for s in seeds:
        p = nnp_program(s)
        rng = random.Random(s)
        for _ in range(samples):
            i = _random_interp(rng, p.literals())
            red = reduct(p, i)
            free = all(is_not_free_expr(r.head) and is_not_free_expr(r.body)
                       for r in red.rules)
            if not free or reduct(red, i) != red:
                bad.append(s)
                break
    return bad


def head_consistency_preserved(seeds=SEEDS):
    bad = []
    for s in seeds:
        p = nnp_program(s, head_consistent=s % 2 == 0)
        if is_head_consistent(p) != is_head_consistent(nn_of(p)):
            bad.append(s)
    return bad


__all__ = [
    "answer_sets_vs_reference", "least_model_engines", "ur_steps_preserve_models",
    "translations_strongly_equivalent", "h_delta_strongly_equivalent", "nt_matches_tp",
    "ur_matches_unit_propagation", "models_are_closed", "minimal_models_supported",
    "answer_sets_minimal_closed", "nt_monotone", "reduct_not_free_idempotent",
    "head_consistency_preserved", "ConstraintFired",
]


# ---------------------------------------------------------------- scaling

def _leaf_count(r: Rule) -> int:
    from nnp.ast import Top, leaves
    return sum(1 for e in (r.head, r.body) for _, x in leaves(e) if not isinstance(x, Top))


def scaled_program(target_leaves: int, seed: int = 0) -> Program:
    """A not-free, head-consistent program with about `target_leaves` leaves.
    Generation is prefix-stable, so rules are taken until the target is met."""
    cfg = GenConfig(class_target="not_free", seed=seed, atom_count=max(8, target_leaves // 6),
                    rule_count=target_leaves // 2, max_depth=3, fact_rate=0.3,
                    head_consistent=True, constraints=False)
    rules, total = [], 0
    for r in gen_program(cfg).rules:
        rules.append(r)
        total += _leaf_count(r)
        if total >= target_leaves:
            break
    return Program(tuple(rules))
