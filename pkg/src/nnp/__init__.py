"""Nested normal programs over classical and default literals."""

from nnp.ast import (BOT, TOP, And, Atom, Bot, Default, Expr, Lit, Literal, Or, Over,
                     Program, Rule, Top, parse, parse_expr, parse_program, render)
from nnp.errors import NNPError

__version__ = "0.1.0"

__all__ = ["BOT", "TOP", "And", "Atom", "Bot", "Default", "Expr", "Lit", "Literal", "Or",
           "Over", "Program", "Rule", "Top", "parse", "parse_expr", "parse_program",
           "render", "NNPError", "__version__"]
