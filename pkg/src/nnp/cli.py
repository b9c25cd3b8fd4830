"""Command-line front end.

Exit codes: 0 success, 1 logical "no"/inconsistent, 2 usage or parse error,
3 size or universe budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Any, Sequence

from nnp.ast import Program, parse_program, render, to_json
from nnp.calculus import Inconsistent, to_horn_expression, ur_least_model
from nnp.classify import classify_rule, is_head_consistent
from nnp.delta import h_delta
from nnp.errors import (InconsistentResult, NNPError, ParseError, SizeBudgetExceeded,
                        UniverseTooLarge)
from nnp.semantics import (Interpretation, answer_sets, least_model_fixpoint, reduct,
                           strongly_equivalent)
from nnp.testkit import CLASS_TARGETS, GenConfig, gen, gen_program
from nnp.translate import DEFAULT_BUDGET, cnf_head_of, nn1_of, nn_of, split_dnp

__all__ = ["CliResult", "run", "main", "JSON_SCHEMA"]

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

JSON_SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["command", "exit_code"],
    "properties": {
        "command": {"enum": ["classify", "delta", "lm", "as", "reduct", "translate",
                             "split", "equiv", "trace", "gen", None]},
        "exit_code": {"enum": [0, 1, 2, 3]},
        "error": {
            "type": "object",
            "required": ["type", "message"],
            "properties": {"type": {"type": "string"}, "message": {"type": "string"}},
        },
        "model": {"type": ["array", "null"], "items": {"type": "string"}},
        "consistent": {"type": "boolean"},
        "answer_sets": {"type": "array",
                        "items": {"type": "array", "items": {"type": "string"}}},
        "program": {"type": "object", "required": ["rules"]},
        "programs": {"type": "array", "items": {"type": "object", "required": ["rules"]}},
        "rules": {"type": "array"},
        "head_consistent": {"type": "boolean"},
        "equivalent": {"type": "boolean"},
        "witness": {
            "type": ["object", "null"],
            "required": ["I", "J"],
            "properties": {"I": {"type": "array", "items": {"type": "string"}},
                           "J": {"type": "array", "items": {"type": "string"}}},
        },
        "steps": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["rule", "literal", "path", "size_after"],
                "properties": {
                    "rule": {"type": "string"},
                    "literal": {"type": ["string", "null"]},
                    "path": {"type": ["array", "null"], "items": {"type": "integer"}},
                    "size_after": {"type": "integer"},
                },
            },
        },
        "value": {},
    },
}


@dataclass(frozen=True)
class CliResult:
    exit_code: int
    payload: str


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise _Usage(message)


def _lits(i) -> list[str]:
    return [str(l) for l in Interpretation(i).sorted()]


def _load(path: str) -> Program:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_program(fh.read())
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None


def _parser() -> _Parser:
    ap = _Parser(prog="nnp", description="Nested normal programs toolkit.")
    ap.add_argument("--json", action="store_true", help="emit JSON")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    sub.add_parser("classify", help="classify each rule").add_argument("file")
    sub.add_parser("delta", help="print the H_Δ decomposition per rule").add_argument("file")

    p = sub.add_parser("lm", help="least model of a not-free program")
    p.add_argument("file")
    p.add_argument("--engine", choices=("ur", "fixpoint"), default="ur")

    p = sub.add_parser("as", help="answer sets")
    p.add_argument("file")
    p.add_argument("--all", action="store_true", help="enumerate every answer set")
    p.add_argument("--max-universe", type=int, default=20)

    p = sub.add_parser("reduct", help="reduct with respect to an interpretation")
    p.add_argument("file")
    p.add_argument("--interp", required=True, help='comma-separated literals, "" for none')

    p = sub.add_parser("translate", help="translate to a normal program")
    p.add_argument("file")
    p.add_argument("--to", choices=("np", "cnf-head"), default="np")
    p.add_argument("--route", choices=("nn", "nn1"), default="nn")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    sub.add_parser("split", help="split a disjunctive program").add_argument("file")

    p = sub.add_parser("equiv", help="strong equivalence by exhaustive check")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--max-atoms", type=int, default=14,
                   help="bound on the number of literals in the joint universe")

    sub.add_parser("trace", help="unit-resolution derivation").add_argument("file")

    p = sub.add_parser("gen", help="generate a seeded instance")
    p.add_argument("--class", dest="target", choices=CLASS_TARGETS, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--atoms", type=int, default=4)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--width", type=int, default=3)
    p.add_argument("--rules", type=int, default=1)
    return ap


# ---------------------------------------------------------------- commands

def _classify(args) -> tuple[int, dict, str]:
    p = _load(args.file)
    rows, lines = [], []
    for n, r in enumerate(p.rules, 1):
        c = classify_rule(r)
        flags = {k: getattr(c, k) for k in ("extended", "flat", "is_fact", "contains_fact",
                                            "is_constraint", "contains_constraint",
                                            "is_not_free", "partially_not_free")}
        rows.append({"kind": c.kind.value, **flags})
        on = [k for k, v in flags.items() if v]
        lines.append(f"rule {n}: {c.kind.value}" + (f" [{', '.join(on)}]" if on else ""))
    hc = is_head_consistent(p)
    lines.append(f"head-consistent: {'yes' if hc else 'no'}")
    return EXIT_OK, {"rules": rows, "head_consistent": hc}, "\n".join(lines)


def _delta(args) -> tuple[int, dict, str]:
    p = _load(args.file)
    rows, lines = [], []
    for n, r in enumerate(p.rules, 1):
        pairs = h_delta(r.head).pairs
        rows.append({"pairs": [{"occurrence": list(pr.occurrence),
                                "head": str(pr.h),
                                "delta": to_json(pr.delta),
                                "text": render(pr.as_expr())} for pr in pairs]})
        lines.append(f"rule {n}:")
        lines.extend(f"  {render(pr.as_expr())}" for pr in pairs)
    return EXIT_OK, {"rules": rows}, "\n".join(lines)


def _lm(args) -> tuple[int, dict, str]:
    p = _load(args.file)
    try:
        m = least_model_fixpoint(p, args.engine)
    except InconsistentResult:
        return EXIT_NO, {"model": None, "consistent": False}, "inconsistent"
    return EXIT_OK, {"model": _lits(m), "consistent": True}, str(m)


def _as(args) -> tuple[int, dict, str]:
    p = _load(args.file)
    found = answer_sets(p, max_universe=args.max_universe, limit=None if args.all else 1)
    ordered = sorted(found, key=lambda s: (len(s), _lits(s)))
    code = EXIT_OK if ordered else EXIT_NO
    text = "\n".join(str(s) for s in ordered) if ordered else "no answer set"
    return code, {"answer_sets": [_lits(s) for s in ordered]}, text


def _reduct(args) -> tuple[int, dict, str]:
    p = _load(args.file)
    try:
        i = Interpretation.parse(args.interp)
    except (ValueError, NNPError) as exc:
        raise _Usage(f"bad --interp: {exc}") from None
    red = reduct(p, i)
    return EXIT_OK, {"program": to_json(red)}, render(red).rstrip("\n")


def _translate(args) -> tuple[int, dict, str]:
    p = _load(args.file)
    if args.to == "cnf-head":
        out = cnf_head_of(p, args.budget)
    else:
        out = (nn_of if args.route == "nn" else nn1_of)(p, args.budget)
    return EXIT_OK, {"program": to_json(out)}, render(out).rstrip("\n")


def _split(args) -> tuple[int, dict, str]:
    progs = split_dnp(_load(args.file))
    text = "\n".join(f"% program {n}\n{render(q).rstrip()}" for n, q in enumerate(progs, 1))
    return EXIT_OK, {"programs": [to_json(q) for q in progs]}, text


def _equiv(args) -> tuple[int, dict, str]:
    res = strongly_equivalent(_load(args.a), _load(args.b), bound=args.max_atoms)
    if res.equivalent:
        return EXIT_OK, {"equivalent": True, "witness": None}, "equivalent"
    i, j = res.witness
    text = f"not equivalent: I = {i}, J = {j}"
    return EXIT_NO, {"equivalent": False, "witness": {"I": _lits(i), "J": _lits(j)}}, text


def _trace(args) -> tuple[int, dict, str]:
    p = _load(args.file)
    result = ur_least_model(to_horn_expression(p))
    steps = [s.as_dict() for s in result.trace.steps]
    lines = []
    for n, s in enumerate(steps, 1):
        lit = f" {s['literal']}" if s["literal"] else ""
        path = "" if s["path"] is None else " @" + (".".join(map(str, s["path"])) or "root")
        lines.append(f"{n}. {s['rule']}{lit}{path} size={s['size_after']}")
    if isinstance(result, Inconsistent):
        lines.append("inconsistent")
        return EXIT_NO, {"steps": steps, "model": None, "consistent": False}, "\n".join(lines)
    lines.append(f"least model: {result.model}")
    return EXIT_OK, {"steps": steps, "model": _lits(result.model), "consistent": True}, \
        "\n".join(lines)


def _gen(args) -> tuple[int, dict, str]:
    try:
        cfg = GenConfig(atom_count=args.atoms, max_depth=args.depth, max_width=args.width,
                        class_target=args.target, seed=args.seed, rule_count=args.rules)
    except ValueError as exc:
        raise _Usage(str(exc)) from None
    if args.target.endswith("rule") or args.target == "not_free":
        value = gen_program(cfg)
        return EXIT_OK, {"program": to_json(value)}, render(value).rstrip("\n")
    value = gen(cfg)
    return EXIT_OK, {"value": to_json(value)}, render(value)


_COMMANDS = {"classify": _classify, "delta": _delta, "lm": _lm, "as": _as, "reduct": _reduct,
             "translate": _translate, "split": _split, "equiv": _equiv, "trace": _trace,
             "gen": _gen}


def _error(command, code: int, exc: BaseException, as_json: bool) -> CliResult:
    kind = type(exc).__name__ if not isinstance(exc, _Usage) else "UsageError"
    msg = str(exc)
    if as_json:
        body = {"command": command, "exit_code": code, "error": {"type": kind, "message": msg}}
        return CliResult(code, json.dumps(body))
    return CliResult(code, f"error: {msg}")


def _glue_interp(argv: list[str]) -> list[str]:
    # `--interp -a` would otherwise read the literal ¬a as an option
    out = []
    it = iter(argv)
    for a in it:
        if a == "--interp":
            nxt = next(it, None)
            out.append(a if nxt is None else f"--interp={nxt}")
        else:
            out.append(a)
    return out


def run(argv: Sequence[str]) -> CliResult:
    argv = _glue_interp(list(argv))
    as_json = "--json" in argv
    command = None
    try:
        args = _parser().parse_args(argv)
        command = args.command
        if command is None:
            raise _Usage("missing subcommand")
        code, data, text = _COMMANDS[command](args)
    except SystemExit as exc:
        return CliResult(int(exc.code or 0), "")
    except (_Usage, ParseError) as exc:
        return _error(command, EXIT_USAGE, exc, as_json)
    except (SizeBudgetExceeded, UniverseTooLarge) as exc:
        return _error(command, EXIT_BUDGET, exc, as_json)
    except InconsistentResult as exc:
        return _error(command, EXIT_NO, exc, as_json)
    except NNPError as exc:
        return _error(command, EXIT_USAGE, exc, as_json)
    if as_json:
        body: dict[str, Any] = {"command": command, "exit_code": code, **data}
        return CliResult(code, json.dumps(body))
    return CliResult(code, text)


def main(argv: Sequence[str] | None = None) -> int:
    result = run(sys.argv[1:] if argv is None else argv)
    stream = sys.stderr if result.exit_code == EXIT_USAGE and not result.payload.startswith("{") \
        else sys.stdout
    print(result.payload, file=stream)
    return result.exit_code
