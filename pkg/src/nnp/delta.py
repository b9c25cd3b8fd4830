"""Δ(H, h) per positive occurrence and the H_Δ decomposition built from it."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Union

from nnp.ast import (BOT, TOP, And, Bot, Default, Expr, Lit, Literal, Or, Over, Path, Top,
                     get, leaves)
from nnp.classify import is_positive_horn
from nnp.errors import BadHandle, NotPositiveHorn

__all__ = [
    "Head", "DeltaPair", "DeltaDecomposition", "positive_occurrences", "delta_of",
    "h_delta", "shift_to_body", "shift_to_head", "pair_expr", "head_expr",
]

# a positive occurrence is a literal or ⊥
Head = Union[Literal, Bot]


def positive_occurrences(h: Expr) -> list[tuple[Path, Head]]:
    out: list[tuple[Path, Head]] = []
    for path, leaf in leaves(h):
        if isinstance(leaf, Lit):
            out.append((path, leaf.literal))
        elif isinstance(leaf, Bot):
            out.append((path, BOT))
    return out


def _delta_unchecked(h: Expr, path: Path) -> Expr:
    ancestors = [h]
    node = h
    for i in path:
        if not isinstance(node, (And, Or)) or not 0 <= i < len(node.children):
            raise BadHandle(f"path {path} does not resolve")
        node = node.children[i]
        ancestors.append(node)
    if not isinstance(node, (Lit, Bot)):
        raise BadHandle(f"path {path} is not a positive occurrence")
    delta: Expr | None = None
    for depth in range(len(path) - 1, -1, -1):
        parent = ancestors[depth]
        if isinstance(parent, And):
            continue
        idx = path[depth]
        kids = list(parent.children[:idx])
        if isinstance(delta, Or):
            kids.extend(delta.children)
        elif delta is not None:
            kids.append(delta)
        kids.extend(parent.children[idx + 1:])
        delta = None if not kids else kids[0] if len(kids) == 1 else Or(tuple(kids))
    return BOT if delta is None else delta


def delta_of(h: Expr, occ: Path) -> Expr:
    """Δ(H, h) for the occurrence at `occ`; ⊥ when nothing is disjunctively linked."""
    if not is_positive_horn(h):
        raise NotPositiveHorn(str(h))
    return _delta_unchecked(h, tuple(occ))


def head_expr(h: Head) -> Expr:
    return h if isinstance(h, Bot) else Lit(h)


def pair_expr(h: Head, delta: Expr) -> Expr:
    """The conjunct h ∨ Δ, written without a redundant ⊥ disjunct."""
    if isinstance(delta, Bot):
        return head_expr(h)
    rest = delta.children if isinstance(delta, Or) else (delta,)
    return Or((head_expr(h),) + rest)


@dataclass(frozen=True)
class DeltaPair:
    occurrence: Path
    h: Head
    delta: Expr

    @cached_property
    def body_image(self) -> Expr:
        """Δ_B: satisfied exactly when Δ is falsified."""
        return shift_to_body(self.delta)

    def as_expr(self) -> Expr:
        return pair_expr(self.h, self.delta)


@dataclass(frozen=True)
class DeltaDecomposition:
    pairs: tuple[DeltaPair, ...]

    def as_expr(self) -> Expr:
        return And(tuple(p.as_expr() for p in self.pairs))

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)


def h_delta(h: Expr) -> DeltaDecomposition:
    if not is_positive_horn(h):
        raise NotPositiveHorn(str(h))
    return DeltaDecomposition(tuple(
        DeltaPair(path, occ, _delta_unchecked(h, path))
        for path, occ in positive_occurrences(h)
    ))


def shift_to_body(e: Expr) -> Expr:
    """F ↦ F_B: drop the overlines and swap ∧/∨. A bare ⊥ (always falsified)
    maps to ⊤ and a bare ⊤ (never falsified) to ⊥."""
    if isinstance(e, Over):
        x = e.elem
        if isinstance(x, Top):
            return BOT
        if isinstance(x, Bot):
            return TOP
        return x
    if isinstance(e, Bot):
        return TOP
    if isinstance(e, Top):
        return BOT
    if isinstance(e, And):
        return Or(tuple(shift_to_body(c) for c in e.children))
    if isinstance(e, Or):
        return And(tuple(shift_to_body(c) for c in e.children))
    raise ValueError(f"not a negative expression: {e}")


def shift_to_head(e: Expr) -> Expr:
    if isinstance(e, (Lit, Default)):
        return Over(e)
    if isinstance(e, Top):
        return Over(BOT)
    if isinstance(e, Bot):
        return Over(TOP)
    if isinstance(e, And):
        return Or(tuple(shift_to_head(c) for c in e.children))
    if isinstance(e, Or):
        return And(tuple(shift_to_head(c) for c in e.children))
    raise ValueError(f"not a body expression: {e}")


def occurrence_at(h: Expr, path: Path) -> Head:
    leaf = get(h, path)
    if isinstance(leaf, Lit):
        return leaf.literal
    if isinstance(leaf, Bot):
        return BOT
    raise BadHandle(f"path {path} is not a positive occurrence")
