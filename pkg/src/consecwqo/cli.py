"""Command-line front end: JSON problem files in, JSON lines out.

A problem file looks like::

    {"kind": {"name": "word", "alphabet": ["a", "b"]}, "basis": ["ab", "ba"]}

Exit status is 0 for any verdict (``undetermined`` included), 2 for bad
input and 3 when an enumeration or lifting cap is hit.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from typing import Optional, Sequence

from . import decide as dec
from . import doubleascent as da
from . import oracle
from .core import consecutive_leq
from .errors import InputError, LimitError
from .factorgraph import Problem, build
from .kinds import Kind, check_bountiful_at_scale, check_valid_at_scale, is_member

JEP_PAIR_LIMIT = 400


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from None


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _parse_json_arg(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        # bare words are accepted without quotes
        if what == "structure":
            return text
        raise InputError(f"{what} is not valid JSON: {text!r}") from None


def load_problem(data) -> "Problem | da.DoubleAscentProblem":
    if not isinstance(data, dict) or "kind" not in data:
        raise InputError("problem file must be an object with 'kind' and 'basis'")
    extra = set(data) - {"kind", "basis"}
    if extra:
        raise InputError(f"unknown problem fields: {sorted(extra)}")
    desc = data["kind"]
    if isinstance(desc, str):
        desc = {"name": desc}
    basis = data.get("basis", [])
    if not isinstance(basis, list):
        raise InputError("'basis' must be a list")
    if isinstance(desc, dict) and desc.get("name") == "double_ascent":
        if set(desc) != {"name"}:
            raise InputError("double_ascent takes no further kind fields")
        return da.DoubleAscentProblem.create(basis)
    kind = Kind.from_descriptor(desc)
    parsed, problems = [], []
    for i, item in enumerate(basis):
        try:
            s = kind.parse(item)
        except InputError as exc:
            problems.append(f"basis[{i}]: {exc}")
            continue
        if s.length < 1:
            problems.append(f"basis[{i}]: basis elements need at least one point")
        elif not is_member(kind, s):
            problems.append(f"basis[{i}]: {kind.label(s)} is not a {kind.name}")
        parsed.append(s)
    if problems:
        raise InputError("invalid basis:\n  " + "\n  ".join(problems))
    return Problem.create(kind, parsed)


def _show(p, s):
    return list(s) if isinstance(p, da.DoubleAscentProblem) else p.kind.to_json(s)


def _parse_structure(p, obj):
    if isinstance(p, da.DoubleAscentProblem):
        return da.as_permutation(obj)
    return p.kind.parse(obj)


def _graph(p, m: Optional[int]):
    if isinstance(p, da.DoubleAscentProblem):
        if m is not None and m != p.b:
            raise InputError("double ascents use the word factor graph at dimension b")
        return da.word_factor_graph(p)
    return build(p, m)


def _export(args, fg) -> None:
    if getattr(args, "emit_dot", None):
        _write(args.emit_dot, fg.to_dot())
    if getattr(args, "emit_json", None):
        _write(args.emit_json, json.dumps(fg.to_json()) + "\n")


# -- verification ----------------------------------------------------------------

def _verify(p, verdict: dec.Verdict, antichain, fg) -> dict:
    checks = []
    w = verdict.witness or {}
    if antichain is not None:
        checks.append(oracle.verify_antichain(p, antichain).to_json())
    if w.get("type") == "non_joinable_pair":
        s, t = _parse_structure(p, w["left"]), _parse_structure(p, w["right"])
        bound = len(s) + len(t) + len(fg)
        found = oracle.jep_search(p, s, t, bound)
        checks.append({"check": "no_joiner", "passed": found is None, "max_length": bound,
                       "counterexample": None if found is None else _show(p, found)})
    if w.get("type") == "missing_extension":
        s = _parse_structure(p, w["structure"])
        top = oracle.enumerate_avoidance(p, p.b)
        leq = da.value_consecutive_leq if isinstance(p, da.DoubleAscentProblem) else consecutive_leq
        hit = next((t for t in top if leq(s, t) is not None), None)
        checks.append({"check": "no_extension", "passed": hit is None,
                       "counterexample": None if hit is None else _show(p, hit)})
    if verdict.problem == "atomicity" and verdict.answer == dec.YES:
        checks.append(_verify_jep(p, len(fg)))
    return {"passed": all(c["passed"] for c in checks), "checks": checks}


def _verify_jep(p, n_vertices: int) -> dict:
    members = [s for n in range(1, p.b + 1) for s in oracle.enumerate_avoidance(p, n)]
    pairs = 0
    for s, t in itertools.product(members, repeat=2):
        if pairs >= JEP_PAIR_LIMIT:
            break
        pairs += 1
        if oracle.jep_search(p, s, t, len(s) + len(t) + n_vertices, least=False) is None:
            return {"check": "jep", "passed": False, "counterexample": [_show(p, s), _show(p, t)]}
    return {"check": "jep", "passed": True, "pairs": pairs}


# -- commands ---------------------------------------------------------------------------

def cmd_decide(args) -> int:
    p = load_problem(_read_json(args.input))
    is_da = isinstance(p, da.DoubleAscentProblem)
    if is_da:
        verdict = da.decide_wqo_da(p) if args.problem == "wqo" else da.decide_atomicity_da(p)
    elif args.problem == "wqo":
        verdict = dec.decide_wqo(p, args.dimension)
    else:
        verdict = dec.decide_atomicity(p, args.dimension)
    fg = _graph(p, None if is_da else args.dimension)
    _export(args, fg)
    out = verdict.to_json()
    antichain = None
    if args.witness is not None and verdict.problem == "wqo" and verdict.answer == dec.NO:
        antichain = da.antichain_witness_da(p, args.witness) if is_da else dec.antichain_witness(p, args.witness)
        out["antichain"] = [_show(p, s) for s in antichain]
    if is_da and args.problem == "atomicity":
        out["left_right"] = {k: v for k, v in da.left_right_diagnostics(fg).items() if k != "components"}
    if args.verify:
        out["verification"] = _verify(p, verdict, antichain, fg)
    _emit(out)
    return 0


def cmd_factor_graph(args) -> int:
    p = load_problem(_read_json(args.input))
    fg = _graph(p, args.dimension)
    _export(args, fg)
    _emit(fg.to_json())
    return 0


def cmd_enumerate(args) -> int:
    p = load_problem(_read_json(args.input))
    if args.length < 0:
        raise InputError("--length must be non-negative")
    members = p.members(args.length)
    _emit({"length": args.length, "count": len(members), "members": [_show(p, s) for s in members]})
    return 0


def cmd_witness(args) -> int:
    p = load_problem(_read_json(args.input))
    if isinstance(p, da.DoubleAscentProblem):
        xs = da.antichain_witness_da(p, args.count)
    else:
        xs = dec.antichain_witness(p, args.count)
    out = {"type": "antichain", "structures": [_show(p, s) for s in xs]}
    if args.verify:
        out["verification"] = oracle.verify_antichain(p, xs).to_json()
    _emit(out)
    return 0


def cmd_check_kind(args) -> int:
    sig = [int(x) for x in args.signature.split(",")] if args.signature else None
    alphabet = list(args.alphabet) if args.alphabet else None
    kind = Kind.of(args.kind, sig, alphabet)
    _emit(check_valid_at_scale(kind, args.max_length).to_json())
    for m in range(1, args.max_length + 1):
        _emit(check_bountiful_at_scale(kind, m).to_json())
    return 0


def cmd_oracle(args) -> int:
    p = load_problem(_read_json(args.input))
    if args.check == "enumerate":
        members = oracle.enumerate_avoidance(p, args.length)
        _emit({"check": "enumerate_avoidance", "length": args.length, "count": len(members),
               "members": [_show(p, s) for s in members]})
    elif args.check == "jep":
        s = _parse_structure(p, _parse_json_arg(args.left, "structure"))
        t = _parse_structure(p, _parse_json_arg(args.right, "structure"))
        found = oracle.jep_search(p, s, t, args.max_length)
        _emit({"check": "jep_search", "max_length": args.max_length,
               "joiner": None if found is None else _show(p, found)})
    else:
        items = _parse_json_arg(args.structures, "structure list")
        if not isinstance(items, list):
            raise InputError("--structures must be a JSON list")
        xs = [_parse_structure(p, x) for x in items]
        _emit(oracle.verify_antichain(p, xs).to_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="consecwqo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decide", help="wqo or atomicity verdict for a problem file")
    d.add_argument("--problem", choices=("wqo", "atomicity"), required=True)
    d.add_argument("--input", required=True)
    d.add_argument("--dimension", type=int)
    d.add_argument("--emit-dot")
    d.add_argument("--emit-json")
    d.add_argument("--witness", type=int, metavar="K", help="attach a K-element antichain to a 'no' wqo verdict")
    d.add_argument("--verify", action="store_true", help="re-check witnesses with the oracles")
    d.set_defaults(func=cmd_decide)

    f = sub.add_parser("factor-graph", help="print the factor graph as JSON")
    f.add_argument("--input", required=True)
    f.add_argument("--dimension", type=int)
    f.add_argument("--emit-dot")
    f.add_argument("--emit-json")
    f.set_defaults(func=cmd_factor_graph)

    e = sub.add_parser("enumerate", help="members of a given length")
    e.add_argument("--input", required=True)
    e.add_argument("--length", type=int, required=True)
    e.set_defaults(func=cmd_enumerate)

    w = sub.add_parser("witness", help="antichain of a non-wqo avoidance set")
    w.add_argument("--input", required=True)
    w.add_argument("--count", type=int, default=5)
    w.add_argument("--verify", action="store_true")
    w.set_defaults(func=cmd_witness)

    c = sub.add_parser("check-kind", help="validity and bountifulness at small scale")
    c.add_argument("--kind", required=True)
    c.add_argument("--signature", help="comma-separated arities for the relational kind")
    c.add_argument("--alphabet", help="letters of the word kind, e.g. ab")
    c.add_argument("--max-length", type=int, default=3)
    c.set_defaults(func=cmd_check_kind)

    o = sub.add_parser("oracle", help="brute-force checks")
    o.add_argument("check", choices=("enumerate", "jep", "antichain"))
    o.add_argument("--input", required=True)
    o.add_argument("--length", type=int, default=1)
    o.add_argument("--left")
    o.add_argument("--right")
    o.add_argument("--max-length", type=int, default=12)
    o.add_argument("--structures")
    o.set_defaults(func=cmd_oracle)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "oracle" and args.check == "jep" and (args.left is None or args.right is None):
        parser.error("oracle jep needs --left and --right")
    if args.command == "oracle" and args.check == "antichain" and args.structures is None:
        parser.error("oracle antichain needs --structures")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LimitError as exc:
        print(f"limit: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run())
