"""Seeded generators for each expression/rule class and independent brute-force oracles.

The oracles below deliberately re-implement evaluation from the definitions and
share no evaluator code with `nnp.semantics` or `nnp.calculus`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import AbstractSet, Iterable

from nnp.ast import (BOT, TOP, And, Atom, Bot, Default, Expr, Lit, Literal, Or, Over,
                     Program, Rule, Top)
from nnp.errors import NotCNF, UniverseTooLarge

__all__ = [
    "CLASS_TARGETS", "GenConfig", "gen", "gen_program", "brute_models", "brute_satisfies",
    "brute_least_model", "classical_unit_propagation", "UPResult", "cnf_clauses",
    "gl_reference_answer_sets", "classical_tp", "universe_of", "DEFAULT_BOUND",
]

DEFAULT_BOUND = 14

CLASS_TARGETS = ("negative", "horn", "positive_horn", "positive_non_horn", "nnp_rule",
                 "dnp_rule", "np_rule", "not_free")


@dataclass(frozen=True)
class GenConfig:
    atom_count: int = 4
    max_depth: int = 3
    max_width: int = 3
    class_target: str = "positive_horn"
    seed: int = 0
    extended: bool = True
    defaults: bool = True
    rule_count: int = 3
    constraints: bool = True
    head_consistent: bool = False
    fact_rate: float = 0.15

    def __post_init__(self):
        if self.class_target not in CLASS_TARGETS:
            raise ValueError(f"unknown class target {self.class_target!r}")
        if self.atom_count < 2 or self.max_width < 2 or self.max_depth < 1:
            raise ValueError("need atom_count >= 2, max_width >= 2, max_depth >= 1")


class _Gen:
    def __init__(self, cfg: GenConfig):
        self.cfg = cfg
        self.rng = random.Random(cfg.seed)
        self.atoms = [Atom(f"p{i}") for i in range(cfg.atom_count)]
        # fixed head polarity per atom keeps generated programs head-consistent
        self.sign = {a: cfg.extended and self.rng.random() < 0.5 for a in self.atoms}

    def literal(self) -> Literal:
        a = self.rng.choice(self.atoms)
        return Literal(a, self.cfg.extended and self.rng.random() < 0.3)

    def head_literal(self) -> Literal:
        a = self.rng.choice(self.atoms)
        if self.cfg.head_consistent:
            return Literal(a, self.sign[a])
        return Literal(a, self.cfg.extended and self.rng.random() < 0.3)

    def width(self) -> int:
        return self.rng.randint(2, self.cfg.max_width)

    def elem(self, defaults: bool) -> Expr:
        if defaults and self.rng.random() < 0.35:
            return Default(self.literal())
        return Lit(self.literal())

    # ---------------------------------------------------------- expressions

    def negative(self, depth: int, defaults: bool) -> Expr:
        if depth <= 0 or self.rng.random() < 0.4:
            return Over(self.elem(defaults))
        kind = self.rng.choice((And, Or))
        return kind(tuple(self.negative(depth - 1, defaults) for _ in range(self.width())))

    def positive(self) -> Expr:
        if self.cfg.constraints and self.rng.random() < 0.08:
            return BOT
        return Lit(self.head_literal())

    def positive_horn(self, depth: int, defaults: bool) -> Expr:
        r = self.rng.random()
        if depth <= 0 or r < 0.3:
            return self.positive()
        if r < 0.6:
            return And(tuple(self.positive_horn(depth - 1, defaults) for _ in range(self.width())))
        negs = [self.negative(depth - 1, defaults) for _ in range(self.width() - 1)]
        negs.insert(self.rng.randrange(len(negs) + 1), self.positive_horn(depth - 1, defaults))
        return Or(tuple(negs))

    def horn(self, depth: int, defaults: bool) -> Expr:
        r = self.rng.random()
        if depth <= 0 or r < 0.25:
            return self.negative(0, defaults) if self.rng.random() < 0.4 else self.positive()
        if r < 0.6:
            return And(tuple(self.horn(depth - 1, defaults) for _ in range(self.width())))
        kids = [self.negative(depth - 1, defaults) for _ in range(self.width() - 1)]
        kids.insert(self.rng.randrange(len(kids) + 1), self.horn(depth - 1, defaults))
        return Or(tuple(kids))

    def non_horn_clause(self, defaults: bool) -> Expr:
        n = self.rng.randint(2, self.cfg.max_width)
        pos = self.rng.sample(self.atoms, min(n, len(self.atoms)))
        kids: list[Expr] = [Lit(Literal(a, self.cfg.extended and self.rng.random() < 0.3))
                            for a in pos]
        for _ in range(self.rng.randint(0, 2)):
            kids.insert(self.rng.randrange(len(kids) + 1), Over(self.elem(defaults)))
        return Or(tuple(kids))

    def positive_non_horn(self, depth: int, defaults: bool) -> Expr:
        r = self.rng.random()
        if depth <= 1 or r < 0.4:
            return self.non_horn_clause(defaults)
        conj = r < 0.7
        kids = [self.positive_non_horn(depth - 1, defaults)]
        for _ in range(self.width() - 1):
            s = self.rng.random()
            if s < 0.4:
                kids.append(self.positive_horn(depth - 1, defaults))
            elif s < 0.7 or conj:
                kids.append(self.positive_non_horn(depth - 1, defaults))
            else:
                kids.append(self.negative(depth - 1, defaults))
        self.rng.shuffle(kids)
        return And(tuple(kids)) if conj else Or(tuple(kids))

    def body(self, depth: int, defaults: bool) -> Expr:
        if self.rng.random() < self.cfg.fact_rate:
            return TOP
        return self._body(depth, defaults)

    def _body(self, depth: int, defaults: bool) -> Expr:
        if depth <= 0 or self.rng.random() < 0.35:
            return self.elem(defaults)
        kind = self.rng.choice((And, Or))
        return kind(tuple(self._body(depth - 1, defaults) for _ in range(self.width())))

    def np_body(self, defaults: bool) -> Expr:
        n = self.rng.randint(0, self.cfg.max_width)
        items = tuple(self.elem(defaults) for _ in range(n))
        if not items:
            return TOP
        return items[0] if len(items) == 1 else And(items)

    # --------------------------------------------------------------- rules

    def rule(self, target: str) -> Rule:
        d, dflt = self.cfg.max_depth, self.cfg.defaults
        if target == "np_rule":
            head = BOT if self.cfg.constraints and self.rng.random() < 0.1 else Lit(self.head_literal())
            return Rule(head, self.np_body(dflt))
        if target == "dnp_rule":
            return Rule(self.positive_non_horn(d, dflt), self.body(d, dflt))
        if target == "not_free":
            return Rule(self.positive_horn(d, False), self.body(d, False))
        return Rule(self.positive_horn(d, dflt), self.body(d, dflt))


def gen(cfg: GenConfig) -> Expr | Rule:
    g = _Gen(cfg)
    t, d = cfg.class_target, cfg.max_depth
    if t == "negative":
        return g.negative(d, cfg.defaults)
    if t == "horn":
        return g.horn(d, cfg.defaults)
    if t == "positive_horn":
        return g.positive_horn(d, cfg.defaults)
    if t == "positive_non_horn":
        return g.positive_non_horn(d, cfg.defaults)
    return g.rule(t)


def gen_program(cfg: GenConfig) -> Program:
    """`rule_count` rules of the rule-level target (nnp_rule when an expression target)."""
    g = _Gen(cfg)
    target = cfg.class_target if cfg.class_target.endswith("rule") or cfg.class_target == "not_free" \
        else "nnp_rule"
    return Program(tuple(g.rule(target) for _ in range(cfg.rule_count)))


# ------------------------------------------------------------------ oracles

def universe_of(x: Expr | Rule | Program) -> frozenset[Literal]:
    out: set[Literal] = set()

    def walk(e: Expr) -> None:
        if isinstance(e, (Lit, Default)):
            out.add(e.literal)
        elif isinstance(e, Over):
            walk(e.elem)
        elif isinstance(e, (And, Or)):
            for c in e.children:
                walk(c)

    rules = x.rules if isinstance(x, Program) else (x,) if isinstance(x, Rule) else ()
    if isinstance(x, Expr):
        walk(x)
    for r in rules:
        walk(r.head)
        walk(r.body)
    return frozenset(out)


def _eval(i: AbstractSet[Literal], e: Expr) -> bool:
    """Satisfaction with overlined elements read as 'not falsified'."""
    if isinstance(e, Top):
        return True
    if isinstance(e, Bot):
        return False
    if isinstance(e, Lit):
        return e.literal in i
    if isinstance(e, Default):
        return e.literal not in i
    if isinstance(e, Over):
        return not _eval(i, e.elem)
    if isinstance(e, And):
        return all(_eval(i, c) for c in e.children)
    return any(_eval(i, c) for c in e.children)


def brute_satisfies(i: AbstractSet[Literal], x: Expr | Rule | Program) -> bool:
    if isinstance(x, Program):
        return all(brute_satisfies(i, r) for r in x.rules)
    if isinstance(x, Rule):
        return not _eval(i, x.body) or _eval(i, x.head)
    return _eval(i, x)


def _subsets(universe: Iterable[Literal], bound: int):
    lits = sorted(set(universe), key=lambda l: (l.atom.name, l.negative))
    if len(lits) > bound:
        raise UniverseTooLarge(f"{len(lits)} literals exceed the bound {bound}")
    for k in range(len(lits) + 1):
        for combo in combinations(lits, k):
            s = frozenset(combo)
            if not any(Literal(l.atom, not l.negative) in s for l in s):
                yield s


def brute_models(x: Expr | Rule | Program, universe: Iterable[Literal] | None = None,
                 bound: int = DEFAULT_BOUND) -> set[frozenset[Literal]]:
    universe = universe_of(x) if universe is None else universe
    return {s for s in _subsets(universe, bound) if brute_satisfies(s, x)}


def brute_least_model(p: Program, universe: Iterable[Literal] | None = None,
                      bound: int = DEFAULT_BOUND) -> frozenset[Literal] | None:
    """The least consistent model, or None when there is none."""
    models = brute_models(p, universe, bound)
    least = [m for m in models if all(m <= n for n in models)]
    return least[0] if least else None


# ------------------------------------------------------- unit propagation

ClauseLit = tuple[Literal, bool]


@dataclass(frozen=True)
class UPResult:
    units: frozenset[ClauseLit]
    conflict: bool

    @property
    def true_literals(self) -> frozenset[Literal]:
        return frozenset(l for l, pol in self.units if pol)


def cnf_clauses(e: Expr) -> list[list[ClauseLit]]:
    """Flat CNF over extended literals: each literal is a propositional variable;
    `~l` is its negation and a positive ⊥ contributes nothing."""
    def item(x: Expr) -> list[ClauseLit]:
        if isinstance(x, Lit):
            return [(x.literal, True)]
        if isinstance(x, Over) and isinstance(x.elem, Lit):
            return [(x.elem.literal, False)]
        if isinstance(x, Bot):
            return []
        raise NotCNF(f"not a clause literal: {x}")

    def clause(x: Expr) -> list[ClauseLit]:
        if isinstance(x, Or):
            return [y for c in x.children for y in item(c)]
        return item(x)

    if isinstance(e, Top):
        return []
    parts = e.children if isinstance(e, And) else (e,)
    return [clause(c) for c in parts]


def classical_unit_propagation(clauses: Iterable[Iterable[ClauseLit]]) -> UPResult:
    """Textbook unit propagation; complementary true extended literals also conflict."""
    cls = [list(c) for c in clauses]
    value: dict[Literal, bool] = {}
    changed = True
    while changed:
        changed = False
        for c in cls:
            open_lits = []
            satisfied = False
            for l, pol in c:
                v = value.get(l)
                if v is None:
                    open_lits.append((l, pol))
                elif v == pol:
                    satisfied = True
                    break
            if satisfied:
                continue
            if not open_lits:
                return UPResult(frozenset(value.items()), True)
            if len(open_lits) == 1:
                l, pol = open_lits[0]
                value[l] = pol
                changed = True
    true = {l for l, v in value.items() if v}
    conflict = any(Literal(l.atom, not l.negative) in true for l in true)
    return UPResult(frozenset(value.items()), conflict)


# ------------------------------------------------------------ NP reference

def _np_parts(r: Rule) -> tuple[Literal | None, list[Literal], list[Literal]]:
    head = None if isinstance(r.head, Bot) else r.head.literal
    items = () if isinstance(r.body, Top) else r.body.children if isinstance(r.body, And) \
        else (r.body,)
    pos = [x.literal for x in items if isinstance(x, Lit)]
    neg = [x.literal for x in items if isinstance(x, Default)]
    if len(pos) + len(neg) != len(items) or not (head is not None or isinstance(r.head, Bot)):
        raise ValueError(f"not a normal rule: {r}")
    return head, pos, neg


def classical_tp(p: Program, i: AbstractSet[Literal]) -> frozenset:
    """Textbook immediate consequence of an NP program; ⊥ marks a fired constraint."""
    out = set()
    for r in p.rules:
        head, pos, neg = _np_parts(r)
        if all(l in i for l in pos) and not any(l in i for l in neg):
            out.add(BOT if head is None else head)
    return frozenset(out)


def _classical_lm(rules) -> frozenset[Literal] | None:
    m: set[Literal] = set()
    changed = True
    while changed:
        changed = False
        for head, pos in rules:
            if all(l in m for l in pos):
                if head is None:
                    return None
                if head not in m:
                    m.add(head)
                    changed = True
    if any(Literal(l.atom, not l.negative) in m for l in m):
        return None
    return frozenset(m)


def gl_reference_answer_sets(p: Program, universe: Iterable[Literal] | None = None,
                             bound: int = DEFAULT_BOUND) -> set[frozenset[Literal]]:
    """S is an answer set iff S is the least model of the Gelfond–Lifschitz reduct P^S."""
    parts = [_np_parts(r) for r in p.rules]
    universe = universe_of(p) if universe is None else universe
    found = set()
    for s in _subsets(universe, bound):
        reduced = [(h, pos) for h, pos, neg in parts if not any(l in s for l in neg)]
        if _classical_lm(reduced) == s:
            found.add(s)
    return found
