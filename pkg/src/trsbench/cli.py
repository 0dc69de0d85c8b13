"""Command-line interface: ``trsbench tm|trs|dp|verify ...``.

Exit status: 0 Confirmed or success, 1 Refuted (or a failed suite),
2 Unknown (or a machine still running), 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import checkers, encodings
from .checkers import CONFIRMED, REFUTED, CheckOutcome, Fuel
from .encodings import EncodedSystem, EncodingError, RelativeProblem
from .formats import (
    ParseError,
    format_reduction,
    format_trs,
    parse_config,
    parse_term,
    parse_tm,
    parse_trs,
)
from .terms import show, variables
from .trs import NoConstants, Reduction, TrsError, critical_pairs, find_step, successors
from .turing import Configuration, Halted, MachineError, tm_run

EXIT_OK, EXIT_REFUTED, EXIT_UNKNOWN, EXIT_INPUT = 0, 1, 2, 3

ENCODINGS = {
    "tmtrs": encodings.tmtrs_system,
    "confluence": encodings.build_confluence_trs,
    "cr-single": encodings.build_cr_single_trs,
    "wcr": encodings.build_wcr_trs,
    "grwcr": encodings.build_grwcr_trs,
    "pebbled": encodings.pebbled_system,
    "dp": encodings.dp_gadget_system,
}


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def verdict_exit(outcome: CheckOutcome) -> int:
    if outcome.verdict is CONFIRMED:
        return EXIT_OK
    return EXIT_REFUTED if outcome.verdict is REFUTED else EXIT_UNKNOWN


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _load_trs(path: str) -> EncodedSystem:
    try:
        return parse_trs(_read(path))
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from None


def _term(system: EncodedSystem, text: Optional[str]):
    if text is None:
        return system.designated_term
    return parse_term(text, _lhs_variables(system.trs.rules))


def _lhs_variables(rules) -> set:
    return {x for r in rules for x in variables(r.lhs)}


def step_json(step) -> dict:
    return {
        "source": show(step.source),
        "target": show(step.target),
        "position": list(step.position),
        "rule": step.rule_index,
        "substitution": {x: show(t) for x, t in step.substitution.items()},
    }


def reduction_json(red) -> dict:
    return {"start": show(red.start), "steps": [step_json(s) for s in red.steps]}


def outcome_json(outcome: CheckOutcome) -> dict:
    return {
        "verdict": outcome.verdict.value,
        "fuel_used": outcome.fuel_used,
        "bound": outcome.bound,
        "term": None if outcome.term is None else show(outcome.term),
        "witnesses": [reduction_json(r) for r in outcome.witnesses],
        "transcript": outcome.transcript,
        "detail": outcome.detail,
        "term_bounds": [{"term": show(t), "n": n} for t, n in outcome.term_bounds],
    }


def outcome_text(outcome: CheckOutcome) -> str:
    head = str(outcome.verdict)
    if outcome.bound is not None:
        head += f" (bound {outcome.bound})"
    lines = [head]
    if outcome.term is not None:
        lines.append(f"term: {show(outcome.term)}")
    if outcome.detail:
        lines.append(outcome.detail)
    for i, red in enumerate(outcome.witnesses, 1):
        lines.append(f"witness {i}:")
        lines.append(format_reduction(red).rstrip("\n"))
    for t, n in outcome.term_bounds:
        lines.append(f"n({show(t)}) = {n}")
    if outcome.transcript:
        lines.append(f"transcript sha256: {outcome.transcript}")
    lines.append(f"fuel used: {outcome.fuel_used}")
    return "\n".join(lines) + "\n"


def _fuel(args) -> Fuel:
    return Fuel(args.fuel, args.peak_depth, args.join_length, args.term_size, args.max_states)


# -- commands -------------------------------------------------------------------


def cmd_tm_run(args):
    try:
        m = parse_tm(_read(args.machine))
        c = parse_config(args.config, m) if args.config else Configuration(m.initial)
    except ParseError as exc:
        raise InputError(f"{args.machine}: {exc}") from None
    res = tm_run(m, c, args.fuel)
    if isinstance(res, Halted):
        payload = {"halted": True, "steps": res.steps, "configuration": str(res.final)}
        text = f"halted after {res.steps} steps: {res.final}\n"
        return EXIT_OK, payload, text
    payload = {"halted": False, "steps": args.fuel, "configuration": str(res.last)}
    return EXIT_UNKNOWN, payload, f"still running after {args.fuel} steps: {res.last}\n"


def cmd_tm_compile(args):
    try:
        m = parse_tm(_read(args.machine))
    except ParseError as exc:
        raise InputError(f"{args.machine}: {exc}") from None
    system = ENCODINGS[args.encoding](m)
    text = format_trs(system)
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise InputError(f"{args.output}: {exc.strerror}") from None
        out = f"wrote {len(system.trs.rules)} rules to {args.output}\n"
    else:
        out = text
    payload = {"encoding": args.encoding, "rules": len(system.trs.rules), "output": args.output,
               "designated_term": None if system.designated_term is None else show(system.designated_term)}
    if not args.output:
        payload["trs"] = text
    return EXIT_OK, payload, out


def cmd_trs_check(args):
    system = _load_trs(args.trs)
    trs = system.trs
    t = _term(system, args.term)
    fuel = _fuel(args)
    prop = args.property
    if prop == "wcr":
        outcome = checkers.check_wcr(trs, fuel, args.ground_only)
    elif t is None:
        outcome = {
            "sn": checkers.check_sn_uniform,
            "wn": checkers.check_wn_uniform,
            "cr": checkers.check_cr_uniform,
        }[prop](trs, fuel)
    else:
        outcome = {
            "sn": checkers.check_sn_term,
            "wn": checkers.check_wn_term,
            "cr": checkers.check_cr_term,
        }[prop](trs, t, fuel)
    return verdict_exit(outcome), outcome_json(outcome), outcome_text(outcome)


def cmd_trs_reduce(args):
    system = _load_trs(args.trs)
    t = _term(system, args.term)
    if t is None:
        raise InputError("no --term given and the file has no designated term")
    steps = []
    u = t
    for _ in range(args.max_steps):
        succ = successors(system.trs, u)
        if not succ:
            break
        step = find_step(system.trs, u, succ[0])
        steps.append(step)
        u = step.target
    red = Reduction(t, tuple(steps))
    normal = not successors(system.trs, u)
    payload = {"reduction": reduction_json(red), "last": show(u), "normal_form": normal}
    text = format_reduction(red) + f"{'normal form' if normal else 'stopped at'}: {show(u)}\n"
    return EXIT_OK if normal else EXIT_UNKNOWN, payload, text


def cmd_trs_critical_pairs(args):
    system = _load_trs(args.trs)
    pairs = critical_pairs(system.trs)
    if not args.ordered:
        # a root overlap of rules i, j is the mirror image of the one of j, i
        pairs = [cp for cp in pairs if cp.overlap_position or cp.rule_pair[0] < cp.rule_pair[1]]
    items = [
        {"left": show(cp.left), "right": show(cp.right), "peak": show(cp.peak),
         "position": list(cp.overlap_position), "rules": list(cp.rule_pair)}
        for cp in pairs
    ]
    lines = [
        f"{cp} from rules {cp.rule_pair[0]},{cp.rule_pair[1]} at "
        f"{'.'.join(map(str, cp.overlap_position)) or 'ε'}, peak {show(cp.peak)}"
        for cp in pairs
    ]
    text = "\n".join(lines + [f"{len(pairs)} critical pairs"]) + "\n"
    return EXIT_OK, {"critical_pairs": items}, text


def cmd_dp_check(args):
    top, base = _load_trs(args.top), _load_trs(args.base)
    designated = top.designated_term or base.designated_term
    problem = RelativeProblem(top.trs, base.trs, designated)
    t = designated
    if args.term is not None:
        t = parse_term(args.term, _lhs_variables(top.trs.rules + base.trs.rules))
    fuel = _fuel(args)
    if args.min:
        outcome = checkers.check_dp_min(
            problem, fuel, args.m, terms=None if t is None else [t])
    else:
        outcome = checkers.chain_search(problem, t, args.min_root_steps, fuel)
    return verdict_exit(outcome), outcome_json(outcome), outcome_text(outcome)


def cmd_dp_pairs(args):
    system = _load_trs(args.trs)
    problem = encodings.dependency_pairs(system.trs)
    text = format_trs(EncodedSystem(problem.top))
    return EXIT_OK, {"pairs": len(problem.top.rules), "trs": text}, text


def cmd_verify(args):
    from .suites import SUITES, run_suite

    if args.suite not in SUITES:
        raise InputError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    report = run_suite(args.suite, args.seed, args.cases)
    return (EXIT_OK if report.passed else EXIT_REFUTED), report.to_json(), report.text()


# -- parser ---------------------------------------------------------------------


def _add_fuel(p, fuel=100):
    p.add_argument("--fuel", type=_natural, default=fuel, help="maximum reduction length")
    p.add_argument("--peak-depth", type=_natural, default=3)
    p.add_argument("--join-length", type=_natural, default=10)
    p.add_argument("--term-size", type=_natural, default=None,
                   help="size bound for enumerated terms")
    p.add_argument("--max-states", type=_natural, default=Fuel().max_states,
                   help="terms explored per search before giving up")


def _natural(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="trsbench", description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="print a JSON report")
    sub = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    tm = sub.add_parser("tm", help="Turing machines").add_subparsers(dest="cmd", required=True,
                                                                      parser_class=_Parser)
    p = tm.add_parser("run", help="run a machine")
    p.add_argument("machine")
    p.add_argument("--config", help='start configuration, e.g. "a b [q0] c"')
    p.add_argument("--fuel", type=_natural, default=1000)
    p.set_defaults(func=cmd_tm_run)
    p = tm.add_parser("compile", help="compile a machine to a rewrite system")
    p.add_argument("machine")
    p.add_argument("--encoding", choices=list(ENCODINGS), default="tmtrs")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_tm_compile)

    trs = sub.add_parser("trs", help="rewrite systems").add_subparsers(dest="cmd", required=True,
                                                                        parser_class=_Parser)
    p = trs.add_parser("check", help="check sn, wn, cr or wcr")
    p.add_argument("property", choices=["sn", "wn", "cr", "wcr"])
    p.add_argument("trs")
    p.add_argument("--term")
    p.add_argument("--ground-only", action="store_true")
    _add_fuel(p)
    p.set_defaults(func=cmd_trs_check)
    p = trs.add_parser("reduce", help="follow the first reduct repeatedly")
    p.add_argument("trs")
    p.add_argument("--term")
    p.add_argument("--max-steps", type=_natural, default=100)
    p.set_defaults(func=cmd_trs_reduce)
    p = trs.add_parser("critical-pairs", help="list critical pairs")
    p.add_argument("trs")
    p.add_argument("--ordered", action="store_true",
                   help="list mirrored root overlaps separately")
    p.set_defaults(func=cmd_trs_critical_pairs)

    dp = sub.add_parser("dp", help="relative termination problems").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    p = dp.add_parser("check", help="search root-step chains, or apply the minimality criterion")
    p.add_argument("top")
    p.add_argument("base")
    p.add_argument("--term")
    p.add_argument("--min", action="store_true", help="use the minimality-flag criterion")
    p.add_argument("--m", type=_natural, default=3)
    p.add_argument("--min-root-steps", type=_natural, default=3)
    _add_fuel(p)
    p.set_defaults(func=cmd_dp_check)
    p = dp.add_parser("pairs", help="print the dependency pairs of a system")
    p.add_argument("trs")
    p.set_defaults(func=cmd_dp_pairs)

    p = sub.add_parser("verify", help="run an acceptance suite")
    p.add_argument("suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=_natural, default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = f"{args.group} {args.cmd}" if getattr(args, "cmd", None) else args.group
    if args.group == "trs" and args.cmd == "check":
        command += f" {args.property}"
    try:
        code, payload, text = args.func(args)
    except (InputError, ParseError, TrsError, MachineError, EncodingError, NoConstants, ValueError) as exc:
        if args.json:
            print(json.dumps({"command": command, "exit_code": EXIT_INPUT, "error": str(exc)}))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.json:
        report = {"command": command, "exit_code": code}
        report.update(payload)
        print(json.dumps(report, ensure_ascii=False, indent=2))
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
