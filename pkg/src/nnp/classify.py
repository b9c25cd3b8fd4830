"""Membership in the head-expression classes and rule/program classification."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from nnp.ast import (And, Bot, Default, Expr, Lit, Literal, Or, Over, Program, Rule, Top,
                     postorder)
from nnp.errors import PositionError

__all__ = [
    "ExprClass", "RuleClass", "Kind", "classify_expr", "is_negative", "is_horn",
    "is_positive_horn", "is_positive_non_horn", "classify_rule", "head_literals",
    "is_head_consistent", "is_np_rule", "is_normal_program", "is_not_free_expr",
    "is_flat_cnf", "is_flat_dnf",
]


@dataclass(frozen=True)
class ExprClass:
    negative: bool
    horn: bool
    positive_horn: bool
    positive_non_horn: bool
    flat_cnf: bool
    flat_dnf: bool
    atom_only: bool
    visits: int = field(default=0, compare=False)


# per-node flags: (negative, horn, positive_horn, positive_non_horn)
_POS = (False, True, True, False)
_NEG = (True, True, False, False)
_NONE = (False, False, False, False)


def _leaf_flags(e: Expr) -> tuple[bool, bool, bool, bool]:
    if isinstance(e, (Lit, Bot)):
        return _POS
    if isinstance(e, Over):
        return _NEG
    return _NONE


def _is_clause_leaf(e: Expr) -> bool:
    return isinstance(e, (Lit, Bot, Over))


def _or_flags(e: Or, kids: list[tuple[bool, bool, bool, bool]]):
    neg = all(k[0] for k in kids)
    nonneg = [k for k in kids if not k[0]]
    horn = len(nonneg) <= 1 and all(k[1] for k in kids)
    ph = len(nonneg) == 1 and nonneg[0][2]
    pnh = False
    if all(_is_clause_leaf(c) for c in e.children):
        positives = {c for c in e.children if isinstance(c, (Lit, Bot))}
        pnh = len(positives) >= 2
    if not pnh and any(k[3] for k in kids):
        pnh = all(k[0] or k[2] or k[3] for k in kids)
    return (neg, horn, ph, pnh)


def _flags(e: Expr) -> tuple[tuple[bool, bool, bool, bool], int]:
    memo: dict[int, tuple[bool, bool, bool, bool]] = {}
    visits = 0
    for node in postorder(e):
        visits += 1
        if isinstance(node, And):
            if not node.children:
                f = _NONE
            else:
                kids = [memo[id(c)] for c in node.children]
                ph = all(k[2] for k in kids)
                f = (all(k[0] for k in kids), all(k[1] for k in kids), ph,
                     not ph and all(k[2] or k[3] for k in kids) and any(k[3] for k in kids))
        elif isinstance(node, Or):
            if not node.children:
                f = _NONE
            else:
                f = _or_flags(node, [memo[id(c)] for c in node.children])
        else:
            f = _leaf_flags(node)
        memo[id(node)] = f
    return memo[id(e)], visits


def _is_flat(e: Expr, outer: type, inner: type) -> bool:
    def leafish(x):
        return not isinstance(x, (And, Or))

    def clause(x):
        return leafish(x) or (isinstance(x, inner) and all(leafish(c) for c in x.children))

    if clause(e):
        return True
    return isinstance(e, outer) and all(clause(c) for c in e.children)


def is_flat_cnf(e: Expr) -> bool:
    return _is_flat(e, And, Or)


def is_flat_dnf(e: Expr) -> bool:
    return _is_flat(e, Or, And)


def classify_expr(e: Expr) -> ExprClass:
    (neg, horn, ph, pnh), visits = _flags(e)
    atom_only = True
    for node in postorder(e):
        x = node.elem if isinstance(node, Over) else node
        if isinstance(x, (Lit, Default)) and x.literal.negative:
            atom_only = False
            break
    return ExprClass(neg, horn, ph, pnh, is_flat_cnf(e), is_flat_dnf(e), atom_only, visits)


def is_negative(e: Expr) -> bool:
    return _flags(e)[0][0]


def is_horn(e: Expr) -> bool:
    return _flags(e)[0][1]


def is_positive_horn(e: Expr) -> bool:
    return _flags(e)[0][2]


def is_positive_non_horn(e: Expr) -> bool:
    return _flags(e)[0][3]


def is_not_free_expr(e: Expr) -> bool:
    for node in postorder(e):
        if isinstance(node, Default) or (isinstance(node, Over) and isinstance(node.elem, Default)):
            return False
    return True


# -------------------------------------------------------------------- rules

class Kind(str, Enum):
    NNP = "NNP"
    DNP = "DNP"
    OTHER = "other-head"


@dataclass(frozen=True)
class RuleClass:
    kind: Kind
    extended: bool
    flat: bool
    is_fact: bool
    contains_fact: bool
    is_constraint: bool
    contains_constraint: bool
    is_not_free: bool
    partially_not_free: bool


def _check_head(head: Expr) -> None:
    for node in postorder(head):
        if isinstance(node, Top) or (isinstance(node, And) and not node.children):
            raise PositionError("top in a head; simplify constants first")
        if isinstance(node, Default):
            raise PositionError("default literal in a head must be overlined")


def classify_rule(r: Rule) -> RuleClass:
    from nnp.delta import h_delta, positive_occurrences

    _check_head(r.head)
    f, _ = _flags(r.head)
    kind = Kind.NNP if f[2] else Kind.DNP if f[3] else Kind.OTHER
    extended = not (classify_expr(r.head).atom_only and classify_expr(r.body).atom_only)
    flat = is_flat_cnf(r.head) and (is_flat_cnf(r.body) or is_flat_dnf(r.body))
    body_free = is_not_free_expr(r.body)
    body_top = isinstance(r.body, Top) or (isinstance(r.body, And) and not r.body.children)
    if kind is Kind.NNP:
        pairs = h_delta(r.head).pairs
        heads = [p.h for p in pairs]
        fact_pairs = [isinstance(p.delta, Bot) and not isinstance(p.h, Bot) for p in pairs]
        free = [is_not_free_expr(p.delta) for p in pairs]
        not_free = body_free and all(free)
        return RuleClass(
            kind, extended, flat,
            is_fact=body_top and bool(pairs) and all(fact_pairs),
            contains_fact=body_top and any(fact_pairs),
            is_constraint=bool(heads) and all(isinstance(h, Bot) for h in heads),
            contains_constraint=any(isinstance(h, Bot) for h in heads),
            is_not_free=not_free,
            partially_not_free=not not_free and any(free),
        )
    heads = [h for _, h in positive_occurrences(r.head)]
    not_free = body_free and is_not_free_expr(r.head)
    return RuleClass(
        kind, extended, flat,
        is_fact=False, contains_fact=False,
        is_constraint=bool(heads) and all(isinstance(h, Bot) for h in heads),
        contains_constraint=any(isinstance(h, Bot) for h in heads),
        is_not_free=not_free, partially_not_free=False,
    )


def head_literals(p: Program) -> frozenset[Literal]:
    from nnp.delta import positive_occurrences

    out = set()
    for r in p.rules:
        for _, h in positive_occurrences(r.head):
            if isinstance(h, Literal):
                out.add(h)
    return frozenset(out)


def is_head_consistent(p: Program) -> bool:
    lits = head_literals(p)
    return not any(l.complement() in lits for l in lits)


def _np_body(body: Expr) -> bool:
    if isinstance(body, (Top, Lit, Default)):
        return True
    return isinstance(body, And) and all(isinstance(c, (Lit, Default)) for c in body.children)


def is_np_rule(r: Rule) -> bool:
    return isinstance(r.head, (Lit, Bot)) and _np_body(r.body)


def is_normal_program(p: Program) -> bool:
    return all(is_np_rule(r) for r in p.rules)
