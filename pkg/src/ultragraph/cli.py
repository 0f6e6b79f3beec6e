"""Command line front end.

Exit codes: 0 property holds, 1 property fails, 2 inconclusive, 3 input error,
4 internal error (a cross-check or witness re-check disagreed).
"""
from __future__ import annotations

import argparse
import json
import math
import os
import shlex
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import classify as C
from .dsl import build, looks_like_matrix, parse, parse_matrix, render, render_matrix
from .errors import BudgetExceeded, InputError, InternalDisagreement, UltraError, Unsupported
from .ideals import enumerate_saturated_hereditary
from .ktheory import (
    EventuallyConstantVector, k_groups, symbolic_transpose_minus_identity, apply_symbolic,
    truncated_kernel_stabilization,
)
from .model import graph_from_matrix, ultragraph_from_matrix
from .symbolic import SymbolicMatrix

SCHEMA = 1
HOLDS, FAILS, INCONCLUSIVE, INPUT_ERROR, INTERNAL = 0, 1, 2, 3, 4

LATTICE = "simplicity via the saturated hereditary lattice"
REACH = "simplicity via Condition (L), cofinality and reachability conditions"
AF = "AF iff the ultragraph has no loops"
PI = "purely infinite iff Condition (L) and every vertex connects to a loop"
DICHOTOMY = "a simple ultragraph algebra is either AF or purely infinite"

PROPERTIES = {
    "simplicity": (C.is_simple, (LATTICE, REACH)),
    "simple-lattice": (C.is_simple_lattice, (LATTICE,)),
    "simple-reach": (C.is_simple_reach, (REACH,)),
    "condition-l": (C.condition_L, ("Condition (L) via first-return exitless loops",)),
    "cofinal": (C.is_cofinal, ("cofinality via paths avoiding a reach set",)),
    "af": (C.is_af, (AF,)),
    "purely-infinite": (C.is_purely_infinite, (PI,)),
    "dichotomy": (None, (LATTICE, REACH, AF, PI, DICHOTOMY)),
}
TAKES_BUDGET = {"simplicity", "simple-lattice", "simple-reach", "condition-l", "purely-infinite"}


@dataclass
class Report:
    command: str
    input: str
    exit_code: int
    lines: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"schema": SCHEMA, "command": self.command, "input": self.input,
                "exit_code": self.exit_code, **self.data}


def _budget(args) -> int | None:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("ULTRA_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"ULTRA_BUDGET must be an integer, got {env!r}")
    return None


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}")


def load(text: str):
    """Ultragraph from a DSL document or from a matrix file (via its edge matrix)."""
    if looks_like_matrix(text):
        return ultragraph_from_matrix(parse_matrix(text))
    return build(parse(text))


def _code(v: C.Verdict) -> int:
    if not v.is_decided:
        return INCONCLUSIVE
    return HOLDS if v.value else FAILS


def _verify(g, v: C.Verdict, h) -> bool | None:
    """Re-check every witness carried by a negative verdict (and its sub-verdicts)."""
    checks = []
    if v.is_decided and v.value is False and v.witness is not None:
        checks.append(C.verify_witness(g, v.witness, h))
    for sub in v.detail.values():
        if isinstance(sub, C.Verdict):
            r = _verify(g, sub, h)
            if r is not None:
                checks.append(r)
    return all(checks) if checks else None


def _verdict_dict(v: C.Verdict) -> dict:
    d = v.to_dict()
    subs = {k: s.to_dict() for k, s in v.detail.items() if isinstance(s, C.Verdict)}
    plain = {k: s for k, s in v.detail.items() if not isinstance(s, C.Verdict)}
    if subs:
        d["routes"] = subs
    if plain:
        d["detail"] = plain
    return d


def cmd_check(args) -> Report:
    g = load(_read(args.file))
    fn, cites = PROPERTIES[args.property]
    budget = _budget(args)
    kw = {"horizon": args.horizon}
    if args.property in TAKES_BUDGET:
        kw["budget"] = budget
    rep = Report("check", args.file, 0)
    if args.property == "dichotomy":
        try:
            d = C.dichotomy(g, **kw, budget=budget)
        except UltraError as exc:
            if isinstance(exc, InternalDisagreement):
                raise
            rep.exit_code = INCONCLUSIVE
            rep.lines.append(f"dichotomy: inconclusive ({exc})")
            rep.data = {"property": "dichotomy", "verdict": {"status": "inconclusive", "value": None},
                        "citations": list(cites), "flags": []}
            return rep
        rep.exit_code = FAILS if d is C.Dichotomy.NOT_SIMPLE else HOLDS
        rep.lines.append(f"dichotomy: {d.value}")
        rep.data = {"property": "dichotomy", "verdict": {"status": "decided", "value": d.value},
                    "citations": list(cites), "flags": []}
        return rep
    v = fn(g, **kw)
    rep.exit_code = _code(v)
    shown = "inconclusive" if not v.is_decided else ("holds" if v.value else "fails")
    rep.lines.append(f"{args.property}: {shown}")
    if v.witness is not None:
        rep.lines.append(f"witness: {json.dumps(v.witness.to_dict(), sort_keys=True)}")
    if v.horizon is not None:
        rep.lines.append(f"horizon: {v.horizon}")
    if v.flags:
        rep.lines.append("flags: " + ", ".join(v.flags))
    if not v.is_decided:
        rep.lines.append(f"reason: {v.detail.get('reason')}")
    rep.lines.append("citations: " + "; ".join(cites))
    rep.data = {"property": args.property, "verdict": _verdict_dict(v),
                "witness": v.witness.to_dict() if v.witness is not None else None,
                "horizon": v.horizon, "citations": list(cites), "flags": list(v.flags)}
    if args.verify_witness:
        ok = _verify(g, v, v.horizon)
        rep.data["witness_verified"] = ok
        rep.lines.append(f"witness re-check: {'not applicable' if ok is None else ('ok' if ok else 'FAILED')}")
        if ok is False:
            raise InternalDisagreement("witness re-check failed")
    return rep


def cmd_compare(args) -> Report:
    a = parse_matrix(_read(args.file))
    rep = Report("compare-matrix", args.file, HOLDS)
    out = {}
    for label, g in (("ultragraph", ultragraph_from_matrix(a)), ("graph", graph_from_matrix(a))):
        v = C.is_simple(g, horizon=args.horizon, budget=_budget(args))
        if args.verify_witness and _verify(g, v, v.horizon) is False:
            raise InternalDisagreement(f"witness re-check failed for the {label}")
        shown = "inconclusive" if not v.is_decided else ("simple" if v.value else "not simple")
        rep.lines.append(f"{label}: {shown}")
        if v.witness is not None:
            rep.lines.append(f"  witness: {json.dumps(v.witness.to_dict(), sort_keys=True)}")
        out[label] = _verdict_dict(v)
        if not v.is_decided:
            rep.exit_code = INCONCLUSIVE
    rep.data = {"property": "simplicity", "comparison": out, "citations": [LATTICE, REACH]}
    return rep


def _sizes(text: str) -> list[int]:
    try:
        sizes = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise InputError(f"bad size list {text!r}")
    if not sizes:
        raise InputError("empty size list")
    return sizes


def cmd_ktheory(args) -> Report:
    a = parse_matrix(_read(args.file))
    rep = Report("ktheory", args.file, HOLDS)
    if not isinstance(a, SymbolicMatrix):
        try:
            kg = k_groups(a)
        except ValueError as exc:
            raise InputError(str(exc))
        k0, k1 = kg.describe()
        rep.lines += [f"K0 = {k0}", f"K1 = {k1}"]
        rep.data = {"k_groups": kg.to_dict()}
        return rep
    r = truncated_kernel_stabilization(a, _sizes(args.sizes))
    rep.lines.append(f"kernel of A^t - I on truncations {[s.size for s in r.steps]}: {r.status}")
    if r.stabilized:
        rep.lines.append(f"rank {r.rank}, basis {[list(x) for x in r.basis]}")
    else:
        rep.exit_code = INCONCLUSIVE
    m = symbolic_transpose_minus_identity(a)
    images = []
    for i in range(a.index_start, a.index_start + 4):
        x = EventuallyConstantVector.delta(i, a.index_start)
        try:
            y = apply_symbolic(m, x)
            images.append({"delta": i, "prefix": list(y.prefix), "tail": y.tail_value})
        except UltraError as exc:
            images.append({"delta": i, "error": str(exc)})
    for im in images:
        rep.lines.append(f"(A^t - I) delta_{im['delta']} = "
                         + (f"{im['prefix']} then {im['tail']}" if "prefix" in im else im["error"]))
    rep.lines.append("note: for infinite matrices only the kernel side is computed")
    rep.data = {"stabilization": r.to_dict(), "images": images,
                "note": "for infinite matrices only the kernel side is computed"}
    return rep


def cmd_ideals(args) -> Report:
    g = load(_read(args.file))
    if g.is_symbolic:
        raise Unsupported("ideal enumeration needs a finite ultragraph")
    budget = _budget(args)
    kw = {} if budget is None else {"bound": max(0, int(math.log2(max(budget, 1))))}
    found = enumerate_saturated_hereditary(g, **kw)
    rep = Report("ideals", args.file, HOLDS)
    rep.lines.append(f"{len(found)} saturated hereditary supports")
    for h in found:
        rep.lines.append("  " + str(h.support))
    rep.data = {"supports": [h.to_dict() for h in found]}
    return rep


def cmd_render(args) -> Report:
    text = _read(args.file)
    out = render_matrix(parse_matrix(text)) if looks_like_matrix(text) else render(parse(text))
    return Report("render", args.file, HOLDS, [out.rstrip("\n")], {"text": out})


COMMANDS = {"check": cmd_check, "compare-matrix": cmd_compare, "ktheory": cmd_ktheory,
            "ideals": cmd_ideals, "render": cmd_render}


class _Parser(argparse.ArgumentParser):
    """Usage errors are input errors (exit 3), not argparse's default 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(INPUT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--horizon", type=int, default=None, help="window size for symbolic inputs")
    common.add_argument("--budget", type=int, default=None, help="search budget (default: $ULTRA_BUDGET)")
    common.add_argument("--json", metavar="PATH", default=None, help="write a machine-readable report")
    common.add_argument("--verify-witness", action="store_true", help="re-check negative witnesses")
    p = _Parser(prog="ultragraph", description="Invariants of ultragraph C*-algebras.")
    p.add_argument("--suite", metavar="FILE", help="run one command per line of FILE")
    p.add_argument("--jobs", type=int, default=1, help="parallel documents in suite mode")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    c = sub.add_parser("check", parents=[common], help="decide a property")
    c.add_argument("property", choices=sorted(PROPERTIES))
    c.add_argument("file")
    for name, helptext in (("compare-matrix", "simplicity of the ultragraph and graph of a matrix"),
                           ("ideals", "list saturated hereditary supports"),
                           ("render", "print the canonical form of a document")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("file")
    k = sub.add_parser("ktheory", parents=[common], help="K-theory of a matrix")
    k.add_argument("file")
    k.add_argument("--sizes", default="12,24,36,48", help="truncation sizes for symbolic matrices")
    return p


def run(argv: list[str]) -> Report:
    """Execute one command; errors become reports with the mapped exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        raise InputError("no command given")
    name = getattr(args, "file", "")
    try:
        rep = COMMANDS[args.command](args)
    except InternalDisagreement as exc:
        rep = Report(args.command, name, INTERNAL, [f"internal error: {exc}"], {"error": str(exc)})
    except BudgetExceeded as exc:
        rep = Report(args.command, name, INCONCLUSIVE, [f"inconclusive: {exc}"], _error_data(exc))
    except (InputError, Unsupported) as exc:
        rep = Report(args.command, name, INPUT_ERROR, [f"{name}: {exc}"], _error_data(exc))
    except UltraError as exc:
        rep = Report(args.command, name, INPUT_ERROR, [f"{name}: {exc}"], _error_data(exc))
    if args.json:
        Path(args.json).write_text(json.dumps(rep.to_dict(), indent=2, sort_keys=True) + "\n")
    return rep


def _error_data(exc: Exception) -> dict:
    d = {"error": type(exc).__name__, "message": str(exc)}
    span = getattr(exc, "span", None)
    if span is not None:
        d["line"], d["col"] = span.line, span.col
    return d


def run_suite(path: str, jobs: int = 1) -> list[Report]:
    """Each nonempty line is one command; paths are relative to the suite file."""
    base = Path(path).resolve().parent
    cmds = []
    for line in _read(path).splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            argv = shlex.split(line)
            cmds.append([str(base / a) if (base / a).is_file() else a for a in argv])

    def one(argv):
        try:
            return run(argv)
        except SystemExit as exc:
            return Report(" ".join(argv), "", INPUT_ERROR, [f"bad command line: {exc}"])
        except Exception as exc:  # per-document isolation
            return Report(" ".join(argv), "", INTERNAL, [f"internal error: {exc!r}"])

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        return list(pool.map(one, cmds))


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    pre, _ = parser.parse_known_args(argv)
    try:
        if pre.suite:
            reports = run_suite(pre.suite, pre.jobs)
            for i, r in enumerate(reports, 1):
                print(f"[{i}] {r.command} {r.input} -> exit {r.exit_code}")
                for ln in r.lines:
                    print("    " + ln)
            return max((r.exit_code for r in reports), default=HOLDS)
        rep = run(argv)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except Exception as exc:
        print(f"internal error: {exc!r}", file=sys.stderr)
        return INTERNAL
    stream = sys.stderr if rep.exit_code in (INPUT_ERROR, INTERNAL) else sys.stdout
    for ln in rep.lines:
        print(ln, file=stream)
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
