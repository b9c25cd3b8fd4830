"""Model theory of nested programs: reducts, least models, answer sets."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import AbstractSet, Iterable

from nnp.ast import (BOT, TOP, And, Bot, Default, Expr, Lit, Literal, Or, Over, Program,
                     Rule, Top, parse_literal, postorder, simplify_constants)
from nnp.classify import is_not_free_expr, is_positive_horn
from nnp.delta import DeltaPair, h_delta, pair_expr, shift_to_head
from nnp.errors import (ConstraintFired, InconsistentResult, NotNNP, NotNotFree,
                        PositionError, UniverseTooLarge)

__all__ = [
    "Interpretation", "satisfies", "holds_head", "falsifies", "falsifies_direct",
    "satisfies_rule", "reduct", "is_closed", "is_supported", "nt_step",
    "least_model_fixpoint", "minimal_models", "answer_sets", "strongly_equivalent",
    "SEResult", "consistent_subsets", "reduct_generic", "is_model",
]


class Interpretation(frozenset):
    """A consistent set of classical literals."""

    def __new__(cls, lits: Iterable[Literal | str] = ()):
        items = frozenset(parse_literal(l) if isinstance(l, str) else l for l in lits)
        for l in items:
            if l.complement() in items:
                raise ValueError(f"inconsistent interpretation: contains {l} and its complement")
        return super().__new__(cls, items)

    @classmethod
    def of(cls, *lits: str) -> "Interpretation":
        return cls(lits)

    @classmethod
    def parse(cls, text: str) -> "Interpretation":
        text = text.strip().strip("{}")
        return cls(t for t in (s.strip() for s in text.split(",")) if t)

    def sorted(self) -> list[Literal]:
        return sorted(self, key=lambda l: l.key)

    def __str__(self) -> str:
        return "{" + ", ".join(str(l) for l in self.sorted()) + "}"

    def __repr__(self) -> str:
        return f"Interpretation({self})"


def _consistent(lits: AbstractSet[Literal]) -> bool:
    return not any(l.complement() in lits for l in lits)


# --------------------------------------------------------------- evaluation

def _holds(i: AbstractSet[Literal], e: Expr) -> bool:
    if isinstance(e, Lit):
        return e.literal in i
    if isinstance(e, Default):
        return e.literal not in i
    if isinstance(e, And):
        return all(_holds(i, c) for c in e.children)
    if isinstance(e, Or):
        return any(_holds(i, c) for c in e.children)
    if isinstance(e, Top):
        return True
    if isinstance(e, Bot):
        return False
    raise PositionError(f"overlined element outside a head: {e}")


def holds_head(i: AbstractSet[Literal], e: Expr) -> bool:
    """Direct reading of a head: an overlined element holds when it is not falsified."""
    if isinstance(e, Lit):
        return e.literal in i
    if isinstance(e, Over):
        x = e.elem
        if isinstance(x, Lit):
            return x.literal not in i
        if isinstance(x, Default):
            return x.literal in i
        return isinstance(x, Top)
    if isinstance(e, And):
        return all(holds_head(i, c) for c in e.children)
    if isinstance(e, Or):
        return any(holds_head(i, c) for c in e.children)
    if isinstance(e, Top):
        return True
    if isinstance(e, Bot):
        return False
    raise PositionError(f"default literal in a head must be overlined: {e}")


def falsifies_direct(i: AbstractSet[Literal], e: Expr) -> bool:
    """The falsification relation evaluated leaf by leaf."""
    if isinstance(e, Over):
        x = e.elem
        if isinstance(x, Lit):
            return x.literal in i
        if isinstance(x, Default):
            return x.literal not in i
        return isinstance(x, Bot)
    if isinstance(e, And):
        return any(falsifies_direct(i, c) for c in e.children)
    if isinstance(e, Or):
        return all(falsifies_direct(i, c) for c in e.children)
    if isinstance(e, Bot):
        return True
    if isinstance(e, Top):
        return False
    raise PositionError(f"falsification needs overlined leaves: {e}")


def _body_image(e: Expr) -> Expr:
    from nnp.delta import shift_to_body
    try:
        return shift_to_body(e)
    except ValueError as exc:
        raise PositionError(str(exc)) from None


def falsifies(i: AbstractSet[Literal], e: Expr) -> bool:
    return _holds(i, _body_image(e))


@dataclass(frozen=True)
class _Compiled:
    body: Expr
    pairs: tuple[DeltaPair, ...]


@lru_cache(maxsize=8192)
def _compile(r: Rule) -> _Compiled:
    if not is_positive_horn(r.head):
        raise NotNNP(f"head is not positive-Horn: {r.head}")
    return _Compiled(r.body, h_delta(r.head).pairs)


def _fires(i, pair: DeltaPair) -> bool:
    return _holds(i, pair.body_image)


def satisfies_rule(i: AbstractSet[Literal], r: Rule) -> bool:
    c = _compile(r)
    if not _holds(i, c.body):
        return True
    return all(not _fires(i, p) or p.h in i for p in c.pairs)


def satisfies(i: AbstractSet[Literal], x: Expr | Rule | Program) -> bool:
    if isinstance(x, Program):
        return all(satisfies(i, r) for r in x.rules)
    if isinstance(x, Rule):
        if is_positive_horn(x.head):
            return satisfies_rule(i, x)
        return not _holds(i, x.body) or holds_head(i, x.head)
    if any(isinstance(n, Over) for n in postorder(x)):
        return satisfies(i, Rule(x, TOP))
    return _holds(i, x)


is_model = satisfies


# ----------------------------------------------------------------- reducts

def _reduce_body(e: Expr, i: AbstractSet[Literal]) -> Expr:
    if isinstance(e, Default):
        return BOT if e.literal in i else TOP
    if isinstance(e, And):
        return And(tuple(_reduce_body(c, i) for c in e.children))
    if isinstance(e, Or):
        return Or(tuple(_reduce_body(c, i) for c in e.children))
    return e


def _reduct_rule(r: Rule, i: AbstractSet[Literal]) -> Rule | None:
    return _reduct_compiled(_compile(r), i)


def _reduct_compiled(c: _Compiled, i: AbstractSet[Literal]) -> Rule | None:
    body = simplify_constants(_reduce_body(c.body, i))
    if isinstance(body, Bot):
        return None
    seen: list[tuple] = []
    parts: list[Expr] = []
    for p in c.pairs:
        img = simplify_constants(_reduce_body(p.body_image, i))
        if isinstance(img, Bot):
            continue
        delta = BOT if isinstance(img, Top) else shift_to_head(img)
        key = (p.h, delta)
        if key in seen:
            continue
        seen.append(key)
        parts.append(pair_expr(p.h, delta))
    if not parts:
        return None
    head = parts[0] if len(parts) == 1 else And(tuple(parts))
    return Rule(head, body)


def reduct(p: Program, i: AbstractSet[Literal]) -> Program:
    """P^I: defaults evaluated against I, each head kept as its (h ∨ Δ) pairs."""
    out = []
    for r in p.rules:
        red = _reduct_rule(r, i)
        if red is not None:
            out.append(red)
    return Program(tuple(out))


def reduct_generic(x: Expr | Rule | Program, i: AbstractSet[Literal]):
    """Leafwise reduct for any rule shape: `not l` becomes ⊤/⊥ and an
    overlined `not l` becomes an always/never falsified constant."""
    if isinstance(x, Program):
        return Program(tuple(reduct_generic(r, i) for r in x.rules))
    if isinstance(x, Rule):
        return Rule(reduct_generic(x.head, i), reduct_generic(x.body, i))
    if isinstance(x, Over) and isinstance(x.elem, Default):
        return Over(TOP) if x.elem.literal in i else Over(BOT)
    if isinstance(x, (And, Or)):
        return type(x)(tuple(reduct_generic(c, i) for c in x.children))
    return _reduce_body(x, i)


def _generic_sat(j: AbstractSet[Literal], r: Rule) -> bool:
    return not _holds(j, r.body) or holds_head(j, r.head)


# ------------------------------------------------------- closure / support

def is_closed(i: AbstractSet[Literal], p: Program) -> bool:
    for r in p.rules:
        c = _compile(r)
        if _holds(i, c.body):
            for pair in c.pairs:
                if _fires(i, pair) and pair.h not in i:
                    return False
    return True


def is_supported(i: AbstractSet[Literal], p: Program) -> bool:
    support: set = set()
    for r in p.rules:
        c = _compile(r)
        if _holds(i, c.body):
            support.update(pair.h for pair in c.pairs if _fires(i, pair))
    return all(l in support for l in i)


def nt_step(p: Program, i: AbstractSet[Literal]) -> frozenset:
    """NT_P(I): heads h of pairs whose rule body holds and whose Δ is falsified."""
    out = set()
    for r in p.rules:
        c = _compile(r)
        if _holds(i, c.body):
            out.update(pair.h for pair in c.pairs if _fires(i, pair))
    lits = {l for l in out if isinstance(l, Literal)} | set(i)
    if not _consistent(lits):
        raise InconsistentResult("complementary literals derived")
    return frozenset(out)


def _require_not_free(p: Program) -> None:
    for r in p.rules:
        _compile(r)
        if not is_not_free_expr(r.head) or not is_not_free_expr(r.body):
            raise NotNotFree(str(r))


def least_model_fixpoint(p: Program, engine: str = "ur") -> Interpretation:
    """LM(P) of a not-free NNP program, by 𝒰ℛ saturation or NT_P iteration."""
    _require_not_free(p)
    return _reduct_least_model(p, engine)


def _reduct_least_model(p: Program, engine: str) -> Interpretation:
    if engine == "ur":
        from nnp.calculus import Inconsistent, to_horn_expression, ur_least_model
        result = ur_least_model(to_horn_expression(p, check=False, trace_paths=False))
        if isinstance(result, Inconsistent):
            raise InconsistentResult("no consistent least model")
        return result.model
    if engine != "fixpoint":
        raise ValueError(f"unknown engine {engine!r}")
    current: frozenset = frozenset()
    while True:
        nxt = nt_step(p, current)
        if BOT in nxt:
            raise ConstraintFired("a constraint fired")
        if nxt == current:
            return Interpretation(current)
        current = nxt


# --------------------------------------------------------- model enumeration

def consistent_subsets(universe: Iterable[Literal]) -> Iterable[frozenset[Literal]]:
    """All consistent subsets, in cardinality order."""
    atoms: dict = {}
    for l in sorted(set(universe), key=lambda l: l.key):
        atoms.setdefault(l.atom, []).append(l)
    groups = list(atoms.values())
    n = len(groups)
    for size in range(n + 1):
        for chosen in combinations(range(n), size):
            for picks in product(*(groups[k] for k in chosen)):
                yield frozenset(picks)


DEFAULT_BOUND = 14


def _check_universe(universe, bound: int) -> None:
    if len(universe) > bound:
        raise UniverseTooLarge(f"{len(universe)} literals exceed the bound {bound}")


def minimal_models(p: Program, universe: Iterable[Literal] | None = None,
                   bound: int = DEFAULT_BOUND) -> set[Interpretation]:
    universe = set(p.literals() if universe is None else universe)
    _check_universe(universe, bound)
    models: list[frozenset] = []
    for s in consistent_subsets(universe):
        if satisfies(s, p) and not any(m < s for m in models):
            models.append(s)
    return {Interpretation(m) for m in models}


def _split_constraints(p: Program) -> tuple[Program, Program]:
    core, sigma = [], []
    for r in p.rules:
        c = _compile(r)
        keep = [pr for pr in c.pairs if not isinstance(pr.h, Bot)]
        cons = [pr for pr in c.pairs if isinstance(pr.h, Bot)]
        for group, dest in ((keep, core), (cons, sigma)):
            if group:
                parts = tuple(pr.as_expr() for pr in group)
                dest.append(Rule(parts[0] if len(parts) == 1 else And(parts), r.body))
    return Program(tuple(core)), Program(tuple(sigma))


def _default_literals(p: Program) -> frozenset[Literal]:
    from nnp.ast import postorder
    out = set()
    for r in p.rules:
        for e in (r.head, r.body):
            for node in postorder(e):
                x = node.elem if isinstance(node, Over) else node
                if isinstance(x, Default):
                    out.add(x.literal)
    return frozenset(out)


def answer_sets(p: Program, max_universe: int = 20, engine: str = "ur",
                limit: int | None = None) -> set[Interpretation]:
    """I is an answer set iff I = LM(core^I) and I satisfies the constraints.

    The reduct only depends on I restricted to literals under `not`, and a
    literal that heads no rule is never in an answer set; candidates are the
    consistent subsets of the remaining relevant literals."""
    from nnp.classify import head_literals

    for r in p.rules:
        _compile(r)
    core, sigma = _split_constraints(p)
    defaults = _default_literals(p)
    relevant = defaults & head_literals(core)
    if len(relevant) > max_universe:
        raise UniverseTooLarge(f"{len(relevant)} relevant literals exceed {max_universe}")
    # a rule's reduct depends on the guess only through the rule's own defaults
    compiled = [(_compile(r), _default_literals(Program((r,))), {}) for r in core.rules]

    def reduced(c, own, cache, guess):
        key = guess & own
        if key not in cache:
            cache[key] = _reduct_compiled(c, key)
        return cache[key]

    found: set[Interpretation] = set()
    for guess in consistent_subsets(relevant):
        red = Program(tuple(x for x in (reduced(*entry, guess) for entry in compiled)
                            if x is not None))
        try:
            m = _reduct_least_model(red, engine)
        except InconsistentResult:
            continue
        if m & defaults != guess or not satisfies(m, sigma):
            continue
        found.add(m)
        if limit is not None and len(found) >= limit:
            break
    return found


# ------------------------------------------------------ strong equivalence

@dataclass(frozen=True)
class SEResult:
    equivalent: bool
    witness: tuple[Interpretation, Interpretation] | None = None

    def __bool__(self) -> bool:
        return self.equivalent


def strongly_equivalent(p1: Program, p2: Program, universe: Iterable[Literal] | None = None,
                        bound: int = DEFAULT_BOUND) -> SEResult:
    """Brute force over pairs (I, J): J ⊨ P1^I iff J ⊨ P2^I.

    Both reducts depend on I only through the literals under `not`, so I
    ranges over consistent subsets of those literals."""
    lits = set(p1.literals() | p2.literals()) if universe is None else set(universe)
    _check_universe(lits, bound)
    defaults = (_default_literals(p1) | _default_literals(p2)) & lits
    js = list(consistent_subsets(lits))
    for i in consistent_subsets(defaults):
        r1 = reduct_generic(p1, i).rules
        r2 = reduct_generic(p2, i).rules
        for j in js:
            if all(_generic_sat(j, r) for r in r1) != all(_generic_sat(j, r) for r in r2):
                return SEResult(False, (Interpretation(i), Interpretation(j)))
    return SEResult(True)
