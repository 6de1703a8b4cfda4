"""Command line front end (``selfsim``).

Exit status: 0 when everything checked holds, 1 when a law or a reduction
fails (the report is still printed), 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import Optional

from . import __version__, laws, pinj
from .grammar import reduce as grammar_reduce
from .grammar.reduce import ReductionError
from .grammar.semantics import (Lexicon, TraceMismatch, TypeMismatch, UnknownWord, compare,
                                shipped_lexicon_path)
from .grammar.types import show
from .pinj import PartialInjection
from .streams import BinaryStream, BoundaryStreamError
from .structure import (SelfSimilarStructure, change_of_basis, convolution, corrupted, decode_of_stream,
                        matrix_rep, moved_point, polycyclic_generators, tau_ss)
from .tensorcat import endo, first_difference, t_compose, t_dagger, t_tensor


class UsageError(Exception):
    pass


# map specs ------------------------------------------------------------------

_ATOM = re.compile(r"aff\((\d+),(\d+),(\d+),(\d+)\)$")


def parse_map(spec: str, ss: Optional[SelfSimilarStructure] = None) -> PartialInjection:
    """Read a dot-separated composite such as ``p.q*`` (applied right to left).

    Atoms: ``id``, ``empty``, ``succ``, ``pred``, ``double``, ``p``, ``q``, ``p*``,
    ``q*`` (generators of ``ss`` and their converses) and
    ``aff(start,step,value,slope)``.
    """
    fixed = {
        "id": pinj.identity(),
        "empty": pinj.empty(),
        "succ": pinj.affine(0, 1, 1, 1),
        "pred": pinj.affine(1, 1, 0, 1),
        "double": pinj.affine(0, 1, 0, 2),
    }
    out = []
    for raw in spec.replace(" ", "").split("."):
        if raw in fixed:
            out.append(fixed[raw])
            continue
        if raw in ("p", "q", "p*", "q*"):
            if ss is None:
                raise UsageError(f"{raw} needs a stream")
            p, q = polycyclic_generators(ss)
            f = p if raw[0] == "p" else q
            out.append(pinj.dagger(f) if raw.endswith("*") else f)
            continue
        m = _ATOM.match(raw)
        if m:
            start, step, value, slope = map(int, m.groups())
            if step < 1 or slope < 1:
                raise UsageError(f"aff() needs positive step and slope: {raw}")
            out.append(pinj.affine(start, step, value, slope))
            continue
        raise UsageError(f"unknown map atom {raw!r}")
    return pinj.compose(*out)


def _stream(literal: str) -> SelfSimilarStructure:
    try:
        return decode_of_stream(BinaryStream.parse(literal))
    except BoundaryStreamError as e:
        raise UsageError(f"boundary point: {e}") from e
    except ValueError as e:
        raise UsageError(str(e)) from e


def _lexicon(path: Optional[str]) -> Lexicon:
    if path is None:
        return Lexicon.load(shipped_lexicon_path())
    p = Path(path)
    if not p.exists():
        shipped = shipped_lexicon_path(p.stem)
        if p.parent == Path(".") and shipped.exists():
            p = shipped
        else:
            raise UsageError(f"lexicon not found: {path}")
    try:
        return Lexicon.load(p)
    except (OSError, ValueError, KeyError) as e:
        raise UsageError(f"cannot load lexicon {path}: {e}") from e


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        payload = {"tool": "selfsim", "version": __version__, **payload}
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


# commands -------------------------------------------------------------------

def cmd_stream_table(args) -> int:
    ss = _stream(args.stream)
    stream = ss.stream
    rows = []
    for n in range(args.count):
        leaf, x = ss.decode.apply(0, n)
        rows.append({"n": n, "bit": stream.nth(n), "decode": [x, leaf]})
    lines = [f"stream {args.stream} (canonical {stream.literal()})", "n  bit  decode"]
    lines += [f"{r['n']:<3}{r['bit']:<5}({r['decode'][0]},{r['decode'][1]})" for r in rows]
    _emit(args, {"command": "stream-table", "stream": args.stream, "canonical": stream.literal(),
                 "rows": rows}, "\n".join(lines))
    return 0


def _check_structure(args) -> SelfSimilarStructure:
    ss = _stream(args.stream)
    return corrupted(ss) if args.corrupt else ss


def cmd_check(args) -> int:
    ss = _check_structure(args)
    reports = laws.run_suite(ss, args.suite, args.seed)
    moved = moved_point(tau_ss(ss)) if not args.corrupt else None
    ok = all(r.passed for r in reports)
    lines = [f"stream {args.stream}  suite {args.suite}  seed {args.seed}"
             + ("  (corrupted code)" if args.corrupt else "")]
    width = max(len(r.law) for r in reports)
    for r in reports:
        lines.append(f"{r.law:<{width}}  {r.status.upper():<4}  {r.instances:>3} instance(s)  {r.uses}")
        if r.witness:
            lines.append(f"{'':<{width}}  witness {json.dumps(r.witness, sort_keys=True)}")
    if moved is not None:
        lines.append(f"tau_ss moves {moved[0]} to {moved[1]} (associativity is not strict)")
    lines.append(f"{sum(r.passed for r in reports)}/{len(reports)} laws pass")
    payload = {"command": "check", "stream": args.stream, "suite": args.suite, "seed": args.seed,
               "corrupt": args.corrupt, "laws": [r.to_dict() for r in reports], "passed": ok,
               "tau_ss_moved_point": list(moved) if moved else None}
    _emit(args, payload, "\n".join(lines))
    return 0 if ok else 1


def cmd_matrix_rep(args) -> int:
    ss = _stream(args.stream)
    f = parse_map(args.map, ss)
    rep = matrix_rep(ss, f)
    back = convolution(ss, rep)
    ok = back == f
    entries = {f"{j},{i}": rep[(j, i)].inline() for j in range(2) for i in range(2)
               if not rep[(j, i)].is_empty()}
    text = f"map {args.map}: {f.inline()}\n{rep.render()}\nround trip {'ok' if ok else 'FAILED'}"
    _emit(args, {"command": "matrix-rep", "stream": args.stream, "map": f.inline(),
                 "entries": entries, "round_trip": ok}, text)
    return 0 if ok else 1


def cmd_basis_change(args) -> int:
    ss1, ss2 = _stream(args.stream1), _stream(args.stream2)
    u = change_of_basis(ss1, ss2)
    unitary = pinj.compose(u, pinj.dagger(u)) == pinj.identity() == pinj.compose(pinj.dagger(u), u)
    morphism = t_compose(endo(u), ss1.code) == ss2.code
    payload = {"command": "basis-change", "stream1": args.stream1, "stream2": args.stream2,
               "u": u.inline(), "unitary": unitary, "morphism": morphism}
    lines = [f"u = {u.inline()}", f"unitary {unitary}", f"u . code1 = code2 {morphism}"]
    ok = unitary and morphism
    if args.map:
        f = parse_map(args.map, ss1)      # p and q name the generators of the first structure
        arrow = t_tensor(endo(f), endo(f))
        lhs = pinj.compose(u, convolution(ss1, arrow), pinj.dagger(u))
        rhs = convolution(ss2, arrow)
        holds = lhs == rhs
        ok = ok and holds
        payload["conjugation"] = {"map": f.inline(), "holds": holds,
                                  "first_difference": pinj.first_difference(lhs, rhs)}
        lines.append(f"u conv1(f*f) u^dagger = conv2(f*f) for f = {args.map}: {holds}")
    _emit(args, payload, "\n".join(lines))
    return 0 if ok else 1


def _words(items) -> list[str]:
    return [w for item in items for w in item.split()]


def cmd_reduce(args) -> int:
    lex = _lexicon(args.lexicon)
    words = _words(args.words)
    try:
        types = lex.types(words)
    except UnknownWord as e:
        raise UsageError(f"unknown word {e.args[0]!r}") from e
    try:
        trace = grammar_reduce(types)
    except ReductionError as e:
        _emit(args, {"command": "reduce", "words": words, "reduces": False, "error": str(e),
                     "error_type": type(e).__name__}, f"no reduction: {e}")
        return 1
    steps = [{"position": s.position, "rule": s.label(), "after": [show(t) for t in s.after]}
             for s in trace.steps]
    text = trace.render() + f"\nfinal {show(trace.final)}; {trace.ambiguity} derivation(s)"
    _emit(args, {"command": "reduce", "words": words, "reduces": True, "final": show(trace.final),
                 "ambiguity": trace.ambiguity, "steps": steps}, text)
    return 0


def cmd_compare(args) -> int:
    lex = _lexicon(args.lexicon)
    try:
        value = compare(args.sentence1, args.sentence2, lex, args.stage)
    except UnknownWord as e:
        raise UsageError(f"unknown word {e.args[0]!r}") from e
    except (ReductionError, TypeMismatch, TraceMismatch) as e:
        _emit(args, {"command": "compare", "error": str(e)}, f"cannot compare: {e}")
        return 1
    value = round(value, 12) + 0.0
    _emit(args, {"command": "compare", "sentence1": args.sentence1, "sentence2": args.sentence2,
                 "stage": args.stage, "value": value}, f"{value}")
    return 0


def cmd_replay(args) -> int:
    try:
        report = json.loads(Path(args.report).read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        raise UsageError(f"cannot read report {args.report}: {e}") from e
    if report.get("command") != "check":
        raise UsageError("replay expects a report written by 'check --json'")
    ss = _stream(report["stream"])
    if report.get("corrupt"):
        ss = corrupted(ss)
    failing = [r for r in report["laws"] if r["status"] == "fail"
               and (args.law is None or r["law"] == args.law)]
    if not failing:
        print("no failing law to replay")
        return 0
    reproduced = []
    for r in failing:
        found = laws.replay(ss, r["law"], r["witness"].get("args", []))
        same = found is not None and found == r["witness"]
        reproduced.append(same)
        print(f"{r['law']}: {'reproduced' if same else 'NOT reproduced'}"
              + (f" at n={found['n']} on leaf {found['leaf']}" if found else ""))
    return 1 if any(reproduced) else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="selfsim", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"selfsim {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stream-table", parents=[common], help="decode table of a stream")
    p.add_argument("stream")
    p.add_argument("--count", type=int, default=10)
    p.set_defaults(run=cmd_stream_table)

    p = sub.add_parser("check", parents=[common], help="run a law suite on a stream")
    p.add_argument("stream")
    p.add_argument("--suite", choices=sorted(laws.SUITES), default="all")
    p.add_argument("--seed", type=int, default=laws.DEFAULT_SEED)
    p.add_argument("--corrupt", action="store_true", help="post-compose the code with p first")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("matrix-rep", parents=[common], help="2x2 matrix of a map")
    p.add_argument("stream")
    p.add_argument("map")
    p.set_defaults(run=cmd_matrix_rep)

    p = sub.add_parser("basis-change", parents=[common], help="isomorphism between two structures")
    p.add_argument("stream1")
    p.add_argument("stream2")
    p.add_argument("map", nargs="?")
    p.set_defaults(run=cmd_basis_change)

    p = sub.add_parser("reduce", parents=[common], help="reduce a sentence to its type")
    p.add_argument("--lexicon")
    p.add_argument("words", nargs="+")
    p.set_defaults(run=cmd_reduce)

    p = sub.add_parser("compare", parents=[common], help="inner product of two sentences")
    p.add_argument("--lexicon")
    p.add_argument("--stage", type=int, help="evaluation steps left undone in each sentence")
    p.add_argument("sentence1")
    p.add_argument("sentence2")
    p.set_defaults(run=cmd_compare)

    p = sub.add_parser("replay", help="re-run the failing instances of a JSON check report")
    p.add_argument("report")
    p.add_argument("--law")
    p.set_defaults(run=cmd_replay, json=False)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except UsageError as e:
        print(f"selfsim: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
