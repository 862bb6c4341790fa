"""Command-line interface.

Exit status: 0 on pass or found, 1 on fail or nothing within bounds, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import acceptance
from .algebra import AlgebraicModel, check_model, enumerate_models
from .bridge import algebra_to_frame, frame_to_algebra
from .calculi import (DerivationSyntaxError, box_lift, check_derivation, get_logic, is_axiom_instance,
                      parse_derivation)
from .fixtures import bundled_fixture_dir, load_fixture_file
from .frames import Frame, enumerate_frames, frame_conditions
from .ipc import NonTheorem, decide_ipc
from .search import Bounds, SearchStats, find_countermodel, solve_equation
from .syntax import ParseError, parse, show


class UsageError(Exception):
    pass


def _formula(text: str):
    try:
        return parse(text)
    except ParseError as e:
        raise UsageError(f"cannot parse {text!r} at offset {e.offset}: {e}") from e


def _logic(tag: str | None):
    if tag is None:
        raise UsageError("a logic is required (--logic)")
    try:
        return get_logic(tag)
    except KeyError as e:
        raise UsageError(e.args[0]) from e


def _bounds(args) -> Bounds:
    try:
        b = Bounds.parse(args.bounds) if args.bounds else Bounds()
    except ValueError as e:
        raise UsageError(str(e)) from e
    if getattr(args, "time_budget", None):
        b = Bounds(b.max_algebra_worlds, b.max_frame_worlds, b.max_assignments, args.time_budget)
    return b


def _emit(args, data: dict, text: str) -> None:
    print(json.dumps(data, indent=2) if args.json else text)


# ------------------------------------------------------------------ commands


def cmd_check_derivation(args) -> int:
    paths = []
    fixture_dir = Path(args.fixture_dir) if args.fixture_dir else bundled_fixture_dir()
    if args.all:
        paths = sorted(p for p in fixture_dir.glob("*.drv") if not p.name.startswith("src_"))
    elif args.file:
        p = Path(args.file)
        if not p.exists() and (fixture_dir / f"{args.file}.drv").exists():
            p = fixture_dir / f"{args.file}.drv"
        paths = [p]
    else:
        raise UsageError("give a derivation file or --all")
    results = []
    all_ok = True
    for p in paths:
        try:
            d, expect = load_fixture_file(p)
        except OSError as e:
            raise UsageError(f"cannot read {p}: {e}") from e
        except DerivationSyntaxError as e:
            raise UsageError(f"{p}:{e.lineno}: {e}") from e
        logic = args.logic or d.logic
        v = check_derivation(_logic(logic), d, strict_sp=args.strict_sp)
        ok = v.accepted if not args.all else v.accepted == expect
        all_ok &= ok
        results.append({"file": str(p), "logic": logic, "accepted": v.accepted, "line": v.line,
                        "reason": v.reason, "expected": expect if args.all else None})
    lines = []
    for r in results:
        verdict = "accepted" if r["accepted"] else f"rejected at line {r['line']}: {r['reason']}"
        lines.append(f"{r['file']} [{r['logic']}]: {verdict}")
    _emit(args, {"results": results, "ok": all_ok}, "\n".join(lines))
    return 0 if all_ok else 1


def cmd_prove_ipc(args) -> int:
    goal = _formula(args.formula)
    hyps = [_formula(h) for h in args.hyp]
    try:
        v = decide_ipc(hyps, goal)
    except ValueError as e:
        raise UsageError(str(e)) from e
    if isinstance(v, NonTheorem):
        cm = v.countermodel.to_json()
        if args.countermodel_out:
            Path(args.countermodel_out).write_text(json.dumps(cm, indent=2))
        _emit(args, {"verdict": "NonTheorem", "countermodel": cm},
              f"NonTheorem: {show(goal)}\ncountermodel {json.dumps(cm)}")
        return 1
    _emit(args, {"verdict": "Theorem", "last_rule": v.proof.rule},
          f"Theorem: {show(goal)}")
    return 0


def cmd_axiom(args) -> int:
    lg = _logic(args.logic_pos or args.logic)
    f = _formula(args.formula)
    scheme = is_axiom_instance(lg, f)
    _emit(args, {"logic": lg.name, "formula": show(f), "scheme": scheme},
          f"instance of {scheme}" if scheme else f"not an axiom of {lg.name}")
    return 0 if scheme else 1


def cmd_enumerate(args) -> int:
    lg = _logic(args.cls)
    if args.kind == "models":
        items = enumerate_models(lg, args.size, max_carrier=args.max_carrier)
    else:
        try:
            frame_conditions(lg)
        except ValueError as e:
            raise UsageError(str(e)) from e
        items = enumerate_frames(lg, args.size)
    count = 0
    for it in items:
        count += 1
        if args.json:
            print(json.dumps(it.to_json()))
        elif args.verbose:
            print(it.describe())
    if not args.json:
        print(f"{count} {args.kind} of {lg.name} up to {args.size} worlds")
    return 0


def _search(args, hyps, goal) -> int:
    lg = _logic(args.logic_pos or args.logic)
    stats = SearchStats()
    try:
        cm = find_countermodel(lg, hyps, goal, _bounds(args), stats)
    except ValueError as e:
        raise UsageError(str(e)) from e
    if cm is None:
        note = "no countermodel within bounds (inconclusive beyond them)"
        if not stats.complete:
            note += "; search incomplete"
        _emit(args, {"verdict": "pass", "countermodel": None, "algebras": stats.algebras, "frames": stats.frames,
                     "complete": stats.complete}, f"pass: {note}")
        return 0
    desc = cm.model.describe() if cm.kind == "algebra" else cm.model.frame.describe()
    _emit(args, {"verdict": "fail", "countermodel": cm.to_json()},
          f"fail: {cm.kind} countermodel {desc}; assignment {cm.assignment}")
    return 1


def cmd_valid(args) -> int:
    return _search(args, [], _formula(args.formula))


def cmd_consequence(args) -> int:
    return _search(args, [_formula(h) for h in args.hyp], _formula(args.goal))


def cmd_solve_eq(args) -> int:
    lg = _logic(args.logic_pos or args.logic)
    rep = solve_equation(lg, args.x, _formula(args.lhs), _formula(args.rhs), _bounds(args))
    _emit(args, rep.to_json(), rep.summary())
    return 1 if rep.unsatisfiable_everywhere else 0


def cmd_bridge(args) -> int:
    try:
        data = json.loads(Path(args.input).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read {args.input}: {e}") from e
    try:
        if "props" in data:
            out = frame_to_algebra(Frame.from_json(data), data.get("class"), intuitionistic=data.get("w_T") is None)
            result = out.to_json()
        elif "leq" in data:
            m = AlgebraicModel.from_json(data)
            if m.cls and not check_model(m, m.cls).passed:
                raise UsageError(f"model fails the {m.cls} conditions")
            rm, wm = algebra_to_frame(m, data.get("assignment"))
            result = rm.to_json()
            result["filters"] = [sorted(f) for f in wm.filters]
            result["class"] = m.cls
        else:
            raise UsageError("input is neither a model nor a frame file")
    except (ValueError, KeyError) as e:
        raise UsageError(str(e)) from e
    text = json.dumps(result, indent=2)
    if args.output:
        Path(args.output).write_text(text)
    print(text)
    return 0


def cmd_lift(args) -> int:
    try:
        d = parse_derivation(Path(args.file).read_text())
    except OSError as e:
        raise UsageError(f"cannot read {args.file}: {e}") from e
    except DerivationSyntaxError as e:
        raise UsageError(f"{args.file}:{e.lineno}: {e}") from e
    if not check_derivation(d.logic, d).accepted:
        print(f"source derivation does not check under {d.logic}", file=sys.stderr)
        return 1
    try:
        lifted = box_lift(d, args.target)
    except ValueError as e:
        raise UsageError(str(e)) from e
    v = check_derivation(args.target, lifted)
    text = lifted.to_text()
    if args.output:
        Path(args.output).write_text(text)
    _emit(args, {"target": args.target, "accepted": v.accepted, "derivation": text}, text)
    return 0 if v.accepted else 1


def cmd_reproduce(args) -> int:
    ids = [] if args.suite in ("all", "acceptance") else [args.suite]
    try:
        numbers = [int(i) for i in ids] or list(acceptance.CRITERIA)
        if any(n not in acceptance.CRITERIA for n in numbers):
            raise ValueError
    except ValueError:
        raise UsageError(f"unknown acceptance criterion {args.suite!r}") from None
    results = []
    for n in numbers:
        r = acceptance.criterion_9(seed=args.seed) if n == 9 and args.seed is not None else acceptance.CRITERIA[n]()
        results.append(r)
        if not args.json:
            print(r.line(), flush=True)
    if args.json:
        print(json.dumps([r.__dict__ for r in results], indent=2))
    return 0 if all(r.passed for r in results) else 1


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--logic", help="logic tag, e.g. L5, EL5-, E6L5, IEL, EL5star")
    common.add_argument("--bounds", help="N/M: algebra worlds / frame worlds (default 5/4)")
    common.add_argument("--time-budget", type=float, help="seconds before the search gives up")
    common.add_argument("--seed", type=int, help="seed for random formula corpora")
    common.add_argument("--fixture-dir", help="directory of .drv fixtures (default: bundled)")

    p = argparse.ArgumentParser(prog="modalbhk", description="Workbench for modal logics of proof and knowledge.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check-derivation", parents=[common], help="check a Hilbert-style derivation")
    s.add_argument("file", nargs="?", help="derivation file or fixture name")
    s.add_argument("--all", action="store_true", help="check every fixture against its expected verdict")
    s.add_argument("--strict-sp", action="store_true", help="allow SP only where the logic has it primitively")
    s.set_defaults(func=cmd_check_derivation)

    s = sub.add_parser("prove-ipc", parents=[common], help="decide an IPC sequent")
    s.add_argument("formula")
    s.add_argument("--hyp", action="append", default=[])
    s.add_argument("--countermodel-out", help="write the Kripke countermodel here")
    s.set_defaults(func=cmd_prove_ipc)

    for name in ("axiom", "axiom?"):
        s = sub.add_parser(name, parents=[common], help="is the formula an axiom instance of the logic?")
        s.add_argument("logic_pos", metavar="logic", nargs="?")
        s.add_argument("formula")
        s.set_defaults(func=cmd_axiom)

    s = sub.add_parser("enumerate", parents=[common], help="list models or frames of a class")
    s.add_argument("kind", choices=("models", "frames"))
    s.add_argument("cls", metavar="class")
    s.add_argument("size", type=int, help="maximum number of worlds")
    s.add_argument("--max-carrier", type=int)
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(func=cmd_enumerate)

    for name in ("valid", "valid?"):
        s = sub.add_parser(name, parents=[common], help="bounded countermodel search for a formula")
        s.add_argument("logic_pos", metavar="logic", nargs="?")
        s.add_argument("formula")
        s.set_defaults(func=cmd_valid)

    for name in ("consequence", "consequence?"):
        s = sub.add_parser(name, parents=[common], help="bounded countermodel search for a consequence")
        s.add_argument("logic_pos", metavar="logic", nargs="?")
        s.add_argument("goal")
        s.add_argument("--hyp", action="append", default=[])
        s.set_defaults(func=cmd_consequence)

    s = sub.add_parser("solve-eq", parents=[common], help="solve x == rhs in every enumerated model")
    s.add_argument("logic_pos", metavar="logic", nargs="?")
    s.add_argument("x")
    s.add_argument("lhs")
    s.add_argument("rhs")
    s.set_defaults(func=cmd_solve_eq)

    s = sub.add_parser("bridge", parents=[common], help="convert a model file to a frame file or back")
    s.add_argument("input")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_bridge)

    s = sub.add_parser("lift", parents=[common], help="lift an IPC/IEL derivation of A to one of []A")
    s.add_argument("file")
    s.add_argument("--target", default="L5")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_lift)

    s = sub.add_parser("reproduce", parents=[common], help="run the acceptance suite or one criterion")
    s.add_argument("suite", nargs="?", default="all", help="'all' or a criterion number 1-9")
    s.set_defaults(func=cmd_reproduce)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
