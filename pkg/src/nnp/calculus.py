"""Nested unit resolution on the Horn working form H ∨ NNF(¬B).

The working form is a mutable tree with parent pointers. A negated
occurrence of a literal l is kept as an overlined leaf `~l`, which keeps
the classical literal `-l` distinct from "l is false".
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Union

from nnp.ast import (BOT, And, Bot, Expr, Lit, Literal, Or, Over, Path, Program, Top,
                     simplify_constants)
from nnp.classify import is_not_free_expr, is_positive_horn
from nnp.errors import BadHandle, NoUnit, NotNNP, NotNotFree

__all__ = [
    "HornWork", "Step", "StepRule", "DerivationTrace", "LeastModel", "Inconsistent",
    "NegScope", "TOP_LEVEL", "NO_CHANGE", "to_horn_expression", "neg_scope",
    "apply_nur", "apply_nhur", "simplify_step", "ur_least_model",
]

AND, OR, POS, NEG, FALSE = range(5)


class StepRule(str, Enum):
    NUR = "NUR"
    NHUR = "NHUR"
    OR_BOT = "or-bot"
    AND_BOT = "and-bot"
    UNWRAP = "k+1"
    FLATTEN = "k+n"


SIMPLIFICATIONS = frozenset({StepRule.OR_BOT, StepRule.AND_BOT, StepRule.UNWRAP,
                             StepRule.FLATTEN})


@dataclass(frozen=True)
class Step:
    rule: StepRule
    literal: str | None
    path: Path | None
    size_after: int

    def as_dict(self) -> dict:
        return {"rule": self.rule.value, "literal": self.literal,
                "path": None if self.path is None else list(self.path),
                "size_after": self.size_after}


@dataclass
class DerivationTrace:
    steps: list[Step] = field(default_factory=list)
    leaves: int = 0
    connectives: int = 0
    bottoms: int = 0

    def count(self, *rules: StepRule) -> int:
        return sum(1 for s in self.steps if s.rule in rules)

    @property
    def nur_steps(self) -> int:
        return self.count(StepRule.NUR)

    @property
    def simplification_steps(self) -> int:
        return sum(1 for s in self.steps if s.rule in SIMPLIFICATIONS)

    def within_bounds(self) -> bool:
        """Resolution steps ≤ leaves; simplification steps ≤ connectives plus
        the ⊥ leaves present at the start (each ∨⊥ deletes one of those or a
        ⊥ produced from a connective)."""
        return (self.nur_steps <= self.leaves
                and self.simplification_steps <= self.connectives + self.bottoms)


class _Node:
    __slots__ = ("kind", "lit", "children", "parent", "alive", "order")

    def __init__(self, kind: int, lit: Literal | None = None, order: int = 0):
        self.kind = kind
        self.lit = lit
        self.children: list[_Node] = []
        self.parent: _Node | None = None
        self.alive = True
        self.order = order

    @property
    def is_leaf(self) -> bool:
        return self.kind >= POS


Key = tuple[tuple[int, bool], bool]


def _key(node: _Node) -> Key:
    return (node.lit.key, node.kind == NEG)


def _complement_key(key: Key) -> Key:
    return (key[0], not key[1])


class _TopLevel:
    def __repr__(self) -> str:
        return "TopLevel"


TOP_LEVEL = _TopLevel()


class _NoChange:
    def __repr__(self) -> str:
        return "NoChange"

    def __bool__(self) -> bool:
        return False


NO_CHANGE = _NoChange()


@dataclass(frozen=True)
class NegScope:
    delta: Path
    sigma: tuple[Path, ...]


class HornWork:
    """Single-owner mutable working form with incremental indices."""

    def __init__(self, expr: Expr, trace_paths: bool = True):
        self.trace = DerivationTrace()
        self.trace_paths = trace_paths
        self.occ_index: dict[Key, list[_Node]] = {}
        self._occ_ptr: dict[Key, int] = {}
        self.unit_index: dict[Key, list[_Node]] = {}
        self._heap: list[Key] = []
        self.n_leaves = 0
        self.n_connectives = 0
        self.n_bottoms = 0
        self._literals: dict[tuple[int, bool], Literal] = {}
        self.root = self._build(expr)
        self.trace.leaves = self.n_leaves
        self.trace.connectives = self.n_connectives
        self.trace.bottoms = self.n_bottoms
        self._collect_units()

    # ------------------------------------------------------------ building

    def _build(self, expr: Expr) -> _Node:
        order = 0
        root_holder = _Node(AND)
        stack: list[tuple[Expr, _Node]] = [(expr, root_holder)]
        while stack:
            e, parent = stack.pop()
            if isinstance(e, (And, Or)):
                node = _Node(AND if isinstance(e, And) else OR, order=order)
                self.n_connectives += 1
                for c in reversed(e.children):
                    stack.append((c, node))
            elif isinstance(e, Lit):
                node = _Node(POS, e.literal, order)
            elif isinstance(e, Over) and isinstance(e.elem, Lit):
                node = _Node(NEG, e.elem.literal, order)
            elif isinstance(e, Bot):
                node = _Node(FALSE, order=order)
            elif isinstance(e, Top):
                node = _Node(AND, order=order)
                self.n_connectives += 1
            else:
                raise NotNotFree(f"unsupported leaf in a Horn working form: {e}")
            order += 1
            node.parent = parent
            parent.children.append(node)
            if node.kind in (POS, NEG):
                self.n_leaves += 1
                self._literals[node.lit.key] = node.lit
                self.occ_index.setdefault(_key(node), []).append(node)
            elif node.kind == FALSE:
                self.n_leaves += 1
                self.n_bottoms += 1
        root = root_holder.children[0]
        root.parent = None
        return root

    def copy(self) -> "HornWork":
        return HornWork(self.expr, self.trace_paths)

    def _collect_units(self) -> None:
        if self.root.is_leaf:
            self._add_unit(self.root)
        elif self.root.kind == AND:
            for c in self.root.children:
                if c.kind in (POS, NEG):
                    self._add_unit(c)

    def _add_unit(self, node: _Node) -> None:
        if node.kind not in (POS, NEG):
            return
        k = _key(node)
        bucket = self.unit_index.setdefault(k, [])
        if not bucket:
            heapq.heappush(self._heap, k)
        bucket.append(node)

    # ----------------------------------------------------------- read-off

    @property
    def expr(self) -> Expr:
        def conv(n: _Node) -> Expr:
            if n.kind == POS:
                return Lit(n.lit)
            if n.kind == NEG:
                return Over(Lit(n.lit))
            if n.kind == FALSE:
                return BOT
            kids = tuple(conv(c) for c in n.children)
            return And(kids) if n.kind == AND else Or(kids)
        return conv(self.root)

    @property
    def is_bottom(self) -> bool:
        return self.root.kind == FALSE

    def units(self) -> list[tuple[Literal, bool]]:
        """Top-level unit conjuncts as (literal, positive)."""
        nodes = [self.root] if self.root.is_leaf else (
            self.root.children if self.root.kind == AND else [])
        return [(n.lit, n.kind == POS) for n in nodes if n.kind in (POS, NEG)]

    def size(self) -> int:
        return self.n_leaves

    def path_of(self, node: _Node) -> Path:
        path = []
        while node.parent is not None:
            path.append(node.parent.children.index(node))
            node = node.parent
        return tuple(reversed(path))

    def node_at(self, path: Iterable[int]) -> _Node:
        node = self.root
        for i in path:
            if node.is_leaf or not 0 <= i < len(node.children):
                raise BadHandle(f"path {tuple(path)} does not resolve")
            node = node.children[i]
        return node

    def occurrences(self, literal: Literal, positive: bool = False) -> list[Path]:
        """Live leaves `literal` (positive) or `~literal`, leftmost first."""
        return [self.path_of(n) for n in self.occ_index.get((literal.key, not positive), [])
                if n.alive]

    # ------------------------------------------------------------ tracing

    def _record(self, rule: StepRule, node: _Node | None, literal: str | None = None,
                path: Path | None = None) -> None:
        if path is None and self.trace_paths and node is not None and node.alive:
            path = self.path_of(node)
        self.trace.steps.append(Step(rule, literal, path, self.n_leaves))

    # ------------------------------------------------------- primitive edits

    def _kill(self, node: _Node) -> None:
        stack = [node]
        while stack:
            n = stack.pop()
            n.alive = False
            if n.kind in (POS, NEG, FALSE):
                self.n_leaves -= 1
                if n.kind == FALSE:
                    self.n_bottoms -= 1
            else:
                self.n_connectives -= 1
                stack.extend(n.children)

    def _top_level(self, node: _Node) -> None:
        if node.kind in (POS, NEG):
            self._add_unit(node)
        elif node.kind == AND:
            for c in node.children:
                if c.kind in (POS, NEG):
                    self._add_unit(c)

    def _replace(self, node: _Node, new: _Node) -> None:
        parent = node.parent
        new.parent = parent
        if parent is None:
            self.root = new
            self._top_level(new)
            return
        idx = parent.children.index(node)
        parent.children[idx] = new
        if parent is self.root and parent.kind == AND and new.kind in (POS, NEG):
            self._add_unit(new)

    def _new_false(self) -> _Node:
        self.n_leaves += 1
        self.n_bottoms += 1
        return _Node(FALSE)

    def _local(self, node: _Node, first_only: bool = False) -> bool:
        """Apply simplification rules at one connective; True if it changed."""
        changed = False
        if node.kind == OR:
            for b in [c for c in node.children if c.kind == FALSE]:
                node.children.remove(b)
                self._kill(b)
                self._record(StepRule.OR_BOT, node)
                changed = True
                if first_only:
                    break
            if not node.children:
                self.n_connectives -= 1
                node.alive = False
                new = self._new_false()
                self._replace(node, new)
                self._record(StepRule.OR_BOT, new)
                return True
            if changed and first_only:
                return True
        elif node.kind == AND and any(c.kind == FALSE for c in node.children):
            new = self._new_false()
            self._replace(node, new)
            self._kill(node)
            self._record(StepRule.AND_BOT, new)
            return True
        if any(c.kind == node.kind for c in node.children):
            kids: list[_Node] = []
            spliced = False
            for c in node.children:
                if c.kind == node.kind and not (spliced and first_only):
                    spliced = True
                    c.alive = False
                    self.n_connectives -= 1
                    for g in c.children:
                        g.parent = node
                    kids.extend(c.children)
                    if node is self.root and node.kind == AND:
                        for g in c.children:
                            if g.kind in (POS, NEG):
                                self._add_unit(g)
                    self._record(StepRule.FLATTEN, node)
                else:
                    kids.append(c)
            node.children = kids
            changed = True
            if first_only:
                return True
        if len(node.children) == 1:
            child = node.children[0]
            node.alive = False
            self.n_connectives -= 1
            self._replace(node, child)
            self._record(StepRule.UNWRAP, child)
            return True
        return changed

    def _settle(self, node: _Node | None) -> None:
        while node is not None and node.alive and not node.is_leaf:
            parent = node.parent
            if not self._local(node):
                return
            node = parent

    def normalize(self) -> None:
        """Exhaust the simplification rules over the whole tree."""
        order: list[_Node] = []
        stack = [self.root]
        while stack:
            n = stack.pop()
            order.append(n)
            if not n.is_leaf:
                stack.extend(n.children)
        for n in reversed(order):
            if n.alive and not n.is_leaf:
                self._settle(n)

    # -------------------------------------------------------- resolution

    def _scope(self, occ: _Node) -> _Node | None:
        """Δ(¬ℓ): climb through ∧ parents; None when the climb reaches the root."""
        node = occ
        while node.parent is not None and node.parent.kind == AND:
            node = node.parent
        return None if node.parent is None else node

    def _remove_scope(self, occ: _Node, delta: _Node | None) -> _Node | None:
        """Delete Δ from its ∨ parent (or turn a top-level occurrence into ⊥).
        Returns the node whose children changed."""
        if delta is None:
            parent = occ.parent
            new = self._new_false()
            self._replace(occ, new)
            self._kill(occ)
            return parent if parent is not None else None
        parent = delta.parent
        parent.children.remove(delta)
        self._kill(delta)
        return parent

    def _first_live(self, key: Key) -> _Node | None:
        lst = self.occ_index.get(key)
        if not lst:
            return None
        i = self._occ_ptr.get(key, 0)
        while i < len(lst) and not lst[i].alive:
            i += 1
        self._occ_ptr[key] = i
        return lst[i] if i < len(lst) else None

    def saturate(self, hyper: bool = False) -> None:
        self.normalize()
        heap = self._heap
        while heap and not self.is_bottom:
            key = heap[0]
            occ = self._first_live(_complement_key(key))
            if occ is None:
                heapq.heappop(heap)
                continue
            name = self._unit_name(key)
            if hyper:
                targets = [n for n in self.occ_index[_complement_key(key)] if n.alive]
                scopes = [(n, self._scope(n)) for n in targets]
                path = self.path_of(targets[0]) if self.trace_paths else None
                touched = []
                for n, delta in scopes:
                    if n.alive and (delta is None or delta.alive):
                        touched.append(self._remove_scope(n, delta))
                self._record(StepRule.NHUR, None, name, path)
                for t in touched:
                    self._settle(t)
            else:
                path = self.path_of(occ) if self.trace_paths else None
                touched = self._remove_scope(occ, self._scope(occ))
                self._record(StepRule.NUR, None, name, path)
                self._settle(touched)

    def _unit_name(self, key: Key) -> str:
        lit = self._literals[key[0]]
        return ("~" if key[1] else "") + str(lit)


def to_horn_expression(p: Program, check: bool = True, trace_paths: bool = True) -> HornWork:
    """Conjoin H ∨ NNF(¬B) over the rules of a not-free NNP program."""
    parts: list[Expr] = []
    for r in p.rules:
        if check:
            if not is_not_free_expr(r.head) or not is_not_free_expr(r.body):
                raise NotNotFree(str(r))
            if not is_positive_horn(r.head):
                raise NotNNP(str(r))
        body = simplify_constants(r.body)
        if isinstance(body, Bot):
            continue
        head = simplify_constants(r.head, head=True)
        if isinstance(head, Top):
            continue
        if isinstance(body, Top):
            parts.append(head)
            continue
        neg = _negate(body)
        kids = list(neg.children) if isinstance(neg, Or) else [neg]
        parts.append(Or(tuple([head] + kids)))
    flat: list[Expr] = []
    for e in parts:
        flat.extend(e.children if isinstance(e, And) else (e,))
    expr = flat[0] if len(flat) == 1 else And(tuple(flat))
    return HornWork(expr, trace_paths)


def _negate(e: Expr) -> Expr:
    if isinstance(e, Lit):
        return Over(e)
    if isinstance(e, And):
        return Or(tuple(_negate(c) for c in e.children))
    if isinstance(e, Or):
        return And(tuple(_negate(c) for c in e.children))
    raise NotNotFree(f"not a not-free body: {e}")


# ------------------------------------------------------------- public steps

def neg_scope(w: HornWork, occ: Path) -> NegScope | _TopLevel:
    node = w.node_at(occ)
    if node.kind != NEG:
        raise BadHandle(f"{occ} is not a negated occurrence")
    delta = w._scope(node)
    if delta is None:
        return TOP_LEVEL
    sibs = tuple(w.path_of(s) for s in delta.parent.children if s is not delta)
    return NegScope(w.path_of(delta), sibs)


def _unit_key(w: HornWork, unit: Literal, positive: bool) -> Key:
    key = (unit.key, not positive)
    if not any(n.alive for n in w.unit_index.get(key, [])):
        raise NoUnit(f"{unit} is not a top-level unit")
    return key


def apply_nur(w: HornWork, unit: Literal, occ: Path, positive: bool = True) -> HornWork:
    """One NUR step with unit `unit` (or `~unit` when positive=False) on the
    complement occurrence at `occ`. No simplification follows."""
    key = _unit_key(w, unit, positive)
    node = w.node_at(occ)
    if not node.is_leaf or node.kind == FALSE or _key(node) != _complement_key(key):
        raise BadHandle(f"{occ} is not a complement occurrence of the unit")
    w._remove_scope(node, w._scope(node))
    w._record(StepRule.NUR, None, w._unit_name(key), tuple(occ))
    return w


def apply_nhur(w: HornWork, units: Iterable[Literal], positive: bool = True) -> HornWork:
    """Remove Δ(¬ℓ) for every complement occurrence of every unit in one pass."""
    keys = [_unit_key(w, u, positive) for u in units]
    targets = []
    for k in keys:
        targets.extend(n for n in w.occ_index.get(_complement_key(k), []) if n.alive)
    targets.sort(key=lambda n: n.order)
    scopes = [(n, w._scope(n)) for n in targets]
    first = w.path_of(targets[0]) if targets and w.trace_paths else None
    for n, delta in scopes:
        if n.alive and (delta is None or delta.alive):
            w._remove_scope(n, delta)
    w._record(StepRule.NHUR, None, ",".join(w._unit_name(k) for k in keys), first)
    return w


def simplify_step(w: HornWork) -> HornWork | _NoChange:
    """Apply one rule at the leftmost-innermost applicable connective."""
    order: list[_Node] = []
    stack: list[tuple[_Node, bool]] = [(w.root, False)]
    while stack:
        n, done = stack.pop()
        if n.is_leaf:
            continue
        if done:
            order.append(n)
            continue
        stack.append((n, True))
        for c in reversed(n.children):
            stack.append((c, False))
    for n in order:
        applicable = (
            (n.kind == OR and (not n.children or any(c.kind == FALSE for c in n.children)))
            or (n.kind == AND and any(c.kind == FALSE for c in n.children))
            or len(n.children) == 1
            or any(c.kind == n.kind for c in n.children)
        )
        if applicable:
            w._local(n, first_only=True)
            return w
    return NO_CHANGE


# ------------------------------------------------------------------ results

@dataclass(frozen=True)
class LeastModel:
    model: frozenset
    trace: DerivationTrace
    final: Expr


@dataclass(frozen=True)
class Inconsistent:
    trace: DerivationTrace
    final: Expr


def ur_least_model(w: HornWork, hyper: bool = False) -> Union[LeastModel, Inconsistent]:
    from nnp.semantics import Interpretation

    w.saturate(hyper=hyper)
    final = w.expr
    if w.is_bottom:
        return Inconsistent(w.trace, final)
    lits = {l for l, positive in w.units() if positive}
    if any(l.complement() in lits for l in lits):
        return Inconsistent(w.trace, final)
    return LeastModel(Interpretation(lits), w.trace, final)
