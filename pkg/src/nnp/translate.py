"""Translations from nested rules to normal programs, plus DNP splitting."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import prod

from nnp.ast import (BOT, TOP, And, Bot, Default, Expr, Lit, Or, Over, Path, Program,
                     Rule, Top, get, replace_at, simplify_constants, subexpressions)
from nnp.classify import is_flat_cnf, is_flat_dnf, is_negative, is_positive_horn
from nnp.delta import h_delta, head_expr, shift_to_body, shift_to_head
from nnp.errors import (NotApplicable, NotNFNP, NotNNP, NotSN, NotSplittable,
                        SizeBudgetExceeded)

__all__ = [
    "DEFAULT_BUDGET", "dnf", "cnf", "dnf_terms", "cnf_clauses", "sn_of", "fn_of",
    "nn_of", "nn1_of", "cnf_head_of", "split_dnp", "rewrite_rule",
    "succinctness_report", "SuccinctnessReport", "np_body", "count_dnf",
]

DEFAULT_BUDGET = 10**6

Term = tuple[Expr, ...]


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def charge(self, n: int) -> None:
        self.used += n
        if self.used > self.limit:
            raise SizeBudgetExceeded(f"distributivity exceeded {self.limit} nodes")


def _distribute(e: Expr, budget: _Budget, conj: type) -> list[Term]:
    """Terms of the normal form whose outer connective is the dual of `conj`.

    For DNF `conj` is And: terms are conjuncts. For CNF it is Or."""
    if isinstance(e, conj):
        acc: list[Term] = [()]
        for c in e.children:
            part = _distribute(c, budget, conj)
            budget.charge(len(acc) * len(part))
            acc = [a + b for a in acc for b in part]
        budget.charge(sum(len(t) for t in acc))
        return acc
    if isinstance(e, (And, Or)):
        out: list[Term] = []
        for c in e.children:
            out.extend(_distribute(c, budget, conj))
        return out
    return [(e,)]


def dnf_terms(e: Expr, budget: int = DEFAULT_BUDGET) -> list[Term]:
    return _distribute(e, _Budget(budget), And)


def cnf_clauses(e: Expr, budget: int = DEFAULT_BUDGET) -> list[Term]:
    return _distribute(e, _Budget(budget), Or)


def _join(terms: list[Term], inner: type, outer: type, empty_inner: Expr,
          empty_outer: Expr) -> Expr:
    def term(t: Term) -> Expr:
        if not t:
            return empty_inner
        return t[0] if len(t) == 1 else inner(t)
    parts = [term(t) for t in terms]
    if not parts:
        return empty_outer
    return parts[0] if len(parts) == 1 else outer(tuple(parts))


def dnf(e: Expr, budget: int = DEFAULT_BUDGET) -> Expr:
    return _join(dnf_terms(e, budget), And, Or, TOP, BOT)


def cnf(e: Expr, budget: int = DEFAULT_BUDGET) -> Expr:
    return _join(cnf_clauses(e, budget), Or, And, BOT, TOP)


def count_dnf(e: Expr) -> int:
    """Number of DNF conjuncts, without building them."""
    if isinstance(e, And):
        return prod(count_dnf(c) for c in e.children)
    if isinstance(e, Or):
        return sum(count_dnf(c) for c in e.children)
    return 0 if isinstance(e, Bot) else 1


def np_body(term: Term) -> Expr:
    if not term:
        return TOP
    return term[0] if len(term) == 1 else And(term)


def _body_terms(body: Expr, budget: int) -> list[Term]:
    body = simplify_constants(body)
    if isinstance(body, Bot):
        return []
    if isinstance(body, Top):
        return [()]
    return dnf_terms(body, budget)


# ------------------------------------------------------------ SN / FN / NN

def _np_body_items(body: Expr) -> list[Expr] | None:
    if isinstance(body, Top):
        return []
    if isinstance(body, (Lit, Default)):
        return [body]
    if isinstance(body, And) and all(isinstance(c, (Lit, Default)) for c in body.children):
        return list(body.children)
    return None


def _clause_split(head: Expr) -> tuple[Expr, list[Expr]] | None:
    """A positive-Horn clause as (h, overlined rest)."""
    items = list(head.children) if isinstance(head, Or) else [head]
    pos = [x for x in items if isinstance(x, (Lit, Bot))]
    neg = [x for x in items if isinstance(x, Over)]
    if len(pos) != 1 or len(pos) + len(neg) != len(items):
        return None
    return pos[0], neg


def _sn_rule(r: Rule) -> Rule | None:
    split = _clause_split(r.head)
    body = _np_body_items(r.body)
    if split is None or body is None:
        raise NotSN(f"not a clause-head normal body rule: {r}")
    h, rest = split
    items = list(body)
    for d in rest:
        img = shift_to_body(d)
        if isinstance(img, Bot):
            return None
        if not isinstance(img, Top):
            items.append(img)
    return Rule(h, np_body(tuple(items)))


def sn_of(p: Program) -> Program:
    """h ∨ D ← B becomes h ← B ∧ D_B."""
    return Program(tuple(r for r in map(_sn_rule, p.rules) if r is not None))


def fn_of(p: Program, budget: int = DEFAULT_BUDGET) -> Program:
    out: list[Rule] = []
    for r in p.rules:
        if not (is_flat_cnf(r.head) and is_positive_horn(r.head)):
            raise NotNFNP(f"head is not a positive-Horn CNF: {r.head}")
        if not (is_flat_cnf(r.body) or is_flat_dnf(r.body)):
            raise NotNFNP(f"body is not flat: {r.body}")
        clauses = cnf_clauses(r.head, budget)
        terms = _body_terms(r.body, budget)
        if len(clauses) * len(terms) > budget:
            raise SizeBudgetExceeded(f"more than {budget} rules")
        for cl in clauses:
            head = cl[0] if len(cl) == 1 else Or(cl)
            for t in terms:
                sn = _sn_rule(Rule(head, np_body(t)))
                if sn is not None:
                    out.append(sn)
    return Program(tuple(out))


def nn_of(p: Program, budget: int = DEFAULT_BUDGET) -> Program:
    """One rule h ← C per (h ∨ Δ) ∈ H_Δ and conjunct C of dnf(B ∧ Δ_B)."""
    out: list[Rule] = []
    total = _Budget(budget)
    for r in p.rules:
        if not is_positive_horn(r.head):
            raise NotNNP(f"head is not positive-Horn: {r.head}")
        for pair in h_delta(r.head).pairs:
            terms = _body_terms(And((r.body, pair.body_image)), budget)
            total.charge(len(terms))
            h = head_expr(pair.h)
            out.extend(Rule(h, np_body(t)) for t in terms)
    return Program(tuple(out))


def cnf_head_of(p: Program, budget: int = DEFAULT_BUDGET) -> Program:
    """N₁: cnf(H) ← dnf(B) per rule."""
    out = []
    for r in p.rules:
        if not is_positive_horn(r.head):
            raise NotNNP(f"head is not positive-Horn: {r.head}")
        body = simplify_constants(r.body)
        if isinstance(body, Bot):
            continue
        out.append(Rule(cnf(r.head, budget), body if isinstance(body, Top) else dnf(body, budget)))
    return Program(tuple(out))


def nn1_of(p: Program, budget: int = DEFAULT_BUDGET) -> Program:
    return fn_of(cnf_head_of(p, budget), budget)


# ---------------------------------------------------------------- splitting

def _non_horn_disjunctions(head: Expr) -> list[Path]:
    """Outermost ∨ nodes with at least two non-negative disjuncts."""
    found: list[Path] = []
    for path, node in subexpressions(head):
        if any(path[:len(f)] == f for f in found):
            continue
        if isinstance(node, Or) and sum(not is_negative(c) for c in node.children) >= 2:
            found.append(path)
    return found


def _split_options(node: Or) -> list[Expr]:
    negs = tuple(c for c in node.children if is_negative(c))
    phs = [c for c in node.children if not is_negative(c)]
    if not all(is_positive_horn(c) for c in phs):
        raise NotSplittable(f"disjunct neither positive-Horn nor negative in {node}")
    return [Or((c,) + negs) if negs else c for c in phs]


def split_dnp(p: Program) -> list[Program]:
    """One NNP program per choice of a positive-Horn disjunct in every
    outermost non-Horn disjunction. Structurally equal disjunctions share one
    choice across the program; choices vary leftmost-first."""
    sites: list[tuple[int, list[Path]]] = []
    keys: list[Or] = []
    for n, r in enumerate(p.rules):
        if is_positive_horn(r.head):
            continue
        paths = _non_horn_disjunctions(r.head)
        if not paths:
            raise NotSplittable(f"head is neither positive-Horn nor splittable: {r.head}")
        sites.append((n, paths))
        for path in paths:
            node = get(r.head, path)
            if node not in keys:
                keys.append(node)
    options = [_split_options(k) for k in keys]
    seen: set[Program] = set()
    out: list[Program] = []
    for combo in product(*options):
        chosen = dict(zip(keys, combo))
        rules = list(p.rules)
        for n, paths in sites:
            head = rules[n].head
            for path in paths:
                head = replace_at(head, path, chosen[get(rules[n].head, path)])
            if not is_positive_horn(head):
                raise NotSplittable(f"head stays non-positive-Horn after splitting: {head}")
            rules[n] = Rule(head, rules[n].body)
        prog = Program(tuple(rules))
        if prog not in seen:
            seen.add(prog)
            out.append(prog)
    return out


# ------------------------------------------------------------------ rewrites

def rewrite_rule(r: Rule, law: str, others: list[Rule] | None = None,
                 indices: list[int] | None = None) -> list[Rule]:
    """Equivalence-preserving rewrites.

    split_conj_head: H1 ∧ … ∧ Hn ← B  to  {Hi ← B}
    split_disj_body: H ← B1 ∨ … ∨ Bn  to  {H ← Bi}
    merge:           the inverse of either split, over `r` and `others`
    shift:           H ← B ∧ F_B  to  H ∨ F ← B, F_B the body conjuncts at `indices`
    """
    if law == "split_conj_head":
        if not isinstance(r.head, And) or not r.head.children:
            raise NotApplicable("head is not a conjunction")
        return [Rule(c, r.body) for c in r.head.children]
    if law == "split_disj_body":
        if not isinstance(r.body, Or) or not r.body.children:
            raise NotApplicable("body is not a disjunction")
        return [Rule(r.head, c) for c in r.body.children]
    if law == "merge":
        group = [r] + list(others or [])
        if len(group) < 2:
            raise NotApplicable("merge needs at least two rules")
        if all(g.body == r.body for g in group):
            return [Rule(And(tuple(g.head for g in group)), r.body)]
        if all(g.head == r.head for g in group):
            return [Rule(r.head, Or(tuple(g.body for g in group)))]
        raise NotApplicable("rules share neither body nor head")
    if law == "shift":
        conj = list(r.body.children) if isinstance(r.body, And) else [r.body]
        if isinstance(r.body, Top) or not conj:
            raise NotApplicable("empty body")
        idx = list(range(len(conj))) if indices is None else sorted(set(indices))
        if not idx or any(not 0 <= i < len(conj) for i in idx):
            raise NotApplicable(f"bad conjunct indices {indices}")
        moved = [conj[i] for i in idx]
        kept = tuple(c for i, c in enumerate(conj) if i not in idx)
        f = shift_to_head(moved[0] if len(moved) == 1 else And(tuple(moved)))
        extra = f.children if isinstance(f, Or) else (f,)
        head_items = r.head.children if isinstance(r.head, Or) else (r.head,)
        return [Rule(Or(head_items + extra), np_body(kept))]
    raise NotApplicable(f"unknown law {law!r}")


# --------------------------------------------------------------- succinctness

@dataclass(frozen=True)
class SuccinctnessReport:
    literal_occurrences: int
    connectives: int
    np_rules: int
    np_literal_occurrences: int | None
    np_connectives: int | None

    @property
    def ratio(self) -> float | None:
        if self.np_literal_occurrences is None or not self.literal_occurrences:
            return None
        return self.np_literal_occurrences / self.literal_occurrences


def _counts(p: Program) -> tuple[int, int]:
    lits = conns = 0
    for r in p.rules:
        if not isinstance(r.body, Top):
            conns += 1
        for e in (r.head, r.body):
            for _, node in subexpressions(e):
                x = node.elem if isinstance(node, Over) else node
                if isinstance(node, (And, Or)):
                    conns += 1
                elif isinstance(x, (Lit, Default)):
                    lits += 1
                    if isinstance(x, Default):
                        conns += 1
    return lits, conns


def succinctness_report(p: Program, budget: int = DEFAULT_BUDGET) -> SuccinctnessReport:
    lits, conns = _counts(p)
    n_rules = 0
    for r in p.rules:
        for pair in h_delta(r.head).pairs:
            n_rules += count_dnf(simplify_constants(And((r.body, pair.body_image))))
    np_lits = np_conns = None
    if n_rules <= budget:
        try:
            np_lits, np_conns = _counts(nn_of(p, budget))
        except SizeBudgetExceeded:
            pass
    return SuccinctnessReport(lits, conns, n_rules, np_lits, np_conns)
