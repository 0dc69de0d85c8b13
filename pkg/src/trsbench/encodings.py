"""Compilers from Turing machines to rewrite systems.

Machine states become binary symbols, tape symbols unary symbols, and the
constant ``t`` (TAPE_END) stands for the infinite blank tail of either half of
the tape. A configuration ``⟨w1, q, w2⟩`` is represented by ``q(w1(t), w2(t))``
with ``w1`` read outward from the head.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .terms import App, Term, Var, const, match, show, tower
from .trs import Rule, Trs, check_term, validate_trs
from .turing import R, Configuration, MissingDesignatedSymbols, TuringMachine

TAPE_END = "t"
TOP = "T"
RUN = "run"
PEBBLE = "pebble"
PICKN = "pickn"
OK = "ok"
CONS = "c"
MARK = "♯"

X, Y = Var("x"), Var("y")


class EncodingError(ValueError):
    pass


class SignatureClash(EncodingError):
    def __init__(self, names):
        names = sorted(names)
        super().__init__(f"machine symbols collide with gadget symbols: {names}")
        self.names = names


class NotATapeTerm(EncodingError):
    pass


class NotAMachineTerm(EncodingError):
    pass


@dataclass(frozen=True)
class EncodedSystem:
    trs: Trs
    designated_term: Optional[Term] = None
    notes: Mapping[int, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.designated_term is not None:
            check_term(self.trs, self.designated_term)


@dataclass(frozen=True)
class RelativeProblem:
    """Root steps of ``top`` combined with arbitrary steps of ``base``."""

    top: Trs
    base: Trs
    designated_term: Optional[Term] = None

    @property
    def signature(self) -> dict:
        sig = dict(self.base.signature)
        sig.update(self.top.signature)
        return sig


def _machine_signature(m: TuringMachine) -> dict:
    sig = {q: 2 for q in m.states}
    sig.update({a: 1 for a in m.alphabet})
    sig[TAPE_END] = 0
    return sig


def _check_reserved(m: TuringMachine, reserved) -> None:
    clash = (set(m.states) | set(m.alphabet)) & set(reserved)
    if clash:
        raise SignatureClash(clash)


def _tmtrs(m: TuringMachine) -> tuple:
    _check_reserved(m, {TAPE_END})
    end = const(TAPE_END)
    rules, notes = [], []

    def emit(lhs, rhs, note):
        rules.append(Rule(lhs, rhs))
        notes.append(note)

    for (q, f), (q2, f2, d) in m.transitions():
        tag = f"delta({q},{f})=({q2},{f2},{d})"
        if d == R:
            emit(App(q, (X, App(f, (Y,)))), App(q2, (App(f2, (X,)), Y)), f"tmtrs R {tag}")
            if f == m.blank:
                emit(App(q, (X, end)), App(q2, (App(f2, (X,)), end)), f"tmtrs R-extend {tag}")
        else:
            for g in m.alphabet:
                emit(
                    App(q, (App(g, (X,)), App(f, (Y,)))),
                    App(q2, (X, App(g, (App(f2, (Y,)),)))),
                    f"tmtrs L g={g} {tag}",
                )
            emit(
                App(q, (end, App(f, (Y,)))),
                App(q2, (end, App(m.blank, (App(f2, (Y,)),)))),
                f"tmtrs L-extend-left {tag}",
            )
            if f == m.blank:
                for g in m.alphabet:
                    emit(
                        App(q, (App(g, (X,)), end)),
                        App(q2, (X, App(g, (App(f2, (end,)),)))),
                        f"tmtrs L-extend-right g={g} {tag}",
                    )
                emit(
                    App(q, (end, end)),
                    App(q2, (end, App(m.blank, (App(f2, (end,)),)))),
                    f"tmtrs L-extend-both {tag}",
                )
    return rules, notes


def tm_to_trs(m: TuringMachine) -> Trs:
    rules, _ = _tmtrs(m)
    return validate_trs(_machine_signature(m), rules)


def tmtrs_system(m: TuringMachine) -> EncodedSystem:
    rules, notes = _tmtrs(m)
    return EncodedSystem(validate_trs(_machine_signature(m), rules), None, dict(enumerate(notes)))


def _halt_rules(m: TuringMachine) -> list:
    """``q(x, f(y)) -> T`` for undefined δ(q, f), and ``q(x, t) -> T`` for undefined δ(q, blank)."""
    out = []
    for q in m.states:
        for f in m.alphabet:
            if (q, f) not in m.delta:
                out.append((Rule(App(q, (X, App(f, (Y,)))), const(TOP)), f"halt delta({q},{f}) undefined"))
        if (q, m.blank) not in m.delta:
            out.append((Rule(App(q, (X, const(TAPE_END))), const(TOP)), f"halt-extend delta({q},{m.blank}) undefined"))
    return out


def _assemble(m, extra_sig, parts, designated=None) -> EncodedSystem:
    rules, notes = [], {}
    for rule, note in parts:
        notes[len(rules)] = note
        rules.append(rule)
    sig = _machine_signature(m)
    sig.update(extra_sig)
    return EncodedSystem(validate_trs(sig, rules), designated, notes)


def _base_parts(m):
    rules, notes = _tmtrs(m)
    return list(zip(rules, notes))


def build_confluence_trs(m: TuringMachine) -> EncodedSystem:
    """tmtrs(M) plus the run/T shuttle rules; M must designate S."""
    if m.succ is None:
        raise MissingDesignatedSymbols("S")
    _check_reserved(m, {TAPE_END, RUN, TOP})
    s, end, top = m.succ, const(TAPE_END), const(TOP)
    parts = _base_parts(m)
    parts.append((Rule(App(RUN, (X, end)), top), "confluence (1)"))
    parts.append((Rule(App(RUN, (end, Y)), App(m.initial, (end, Y))), "confluence (2)"))
    parts += [(r, "confluence (3) " + n) for r, n in _halt_rules(m)]
    parts.append((Rule(App(RUN, (X, App(s, (Y,)))), App(RUN, (App(s, (X,)), Y))), "confluence (4)"))
    parts.append((Rule(App(RUN, (App(s, (X,)), Y)), App(RUN, (X, App(s, (Y,))))), "confluence (5)"))
    return _assemble(m, {RUN: 2, TOP: 0}, parts)


def build_cr_single_trs(m: TuringMachine) -> EncodedSystem:
    if m.succ is None:
        raise MissingDesignatedSymbols("S")
    _check_reserved(m, {TAPE_END, RUN, TOP})
    end, top = const(TAPE_END), const(TOP)
    parts = _base_parts(m)
    parts.append((Rule(App(RUN, (X,)), top), "cr-single run->T"))
    parts.append((Rule(App(RUN, (X,)), App(RUN, (App(m.succ, (X,)),))), "cr-single run->run(S)"))
    parts.append((Rule(App(RUN, (X,)), App(m.initial, (end, X))), "cr-single run->q0"))
    parts += [(r, "cr-single " + n) for r, n in _halt_rules(m)]
    return _assemble(m, {RUN: 1, TOP: 0}, parts, App(RUN, (end,)))


def build_wcr_trs(m: TuringMachine) -> EncodedSystem:
    _check_reserved(m, {TAPE_END, RUN, TOP})
    end, top, run = const(TAPE_END), const(TOP), const(RUN)
    parts = _base_parts(m)
    parts.append((Rule(run, top), "wcr run->T"))
    parts.append((Rule(run, App(m.initial, (end, end))), "wcr run->q0"))
    parts += [(r, "wcr " + n) for r, n in _halt_rules(m)]
    return _assemble(m, {RUN: 0, TOP: 0}, parts, run)


def _fresh_args(base: str, n: int) -> tuple:
    return tuple(Var(f"{base}{i}") for i in range(1, n + 1))


def build_grwcr_trs(m: TuringMachine) -> EncodedSystem:
    _check_reserved(m, {TAPE_END, RUN, TOP})
    base = _base_parts(m)
    lhss = [r.lhs for r, _ in base]
    sig = _machine_signature(m)
    sig.update({RUN: 2, TOP: 0})
    parts = list(base)
    parts.append((Rule(App(RUN, (X, Y)), const(TOP)), "grwcr run->T"))
    parts.append((Rule(App(RUN, (X, Y)), App(m.initial, (X, Y))), "grwcr run->q0"))
    for q in m.states:
        for f, nf in sig.items():
            for g, ng in sig.items():
                lhs = App(q, (App(f, _fresh_args("x", nf)), App(g, _fresh_args("y", ng))))
                if not any(match(l, lhs) is not None for l in lhss):
                    parts.append((Rule(lhs, const(TOP)), f"grwcr catch-all {q} {f} {g}"))
    return _assemble(m, {RUN: 2, TOP: 0}, parts)


def _pebbled_parts(m: TuringMachine) -> list:
    _, z = m.require_designated()
    parts = [(Rule(r.lhs, App(PEBBLE, (r.rhs,))), "pebbled " + n) for r, n in _base_parts(m)]
    for q in m.states:
        if (q, z) not in m.delta:
            parts.append((Rule(App(q, (X, App(z, (Y,)))), const(TOP)), f"pebbled halt delta({q},{z}) undefined"))
    parts.append((Rule(App(PEBBLE, (const(TOP),)), const(TOP)), "pebbled absorb"))
    return parts


def tm_to_pebbled_trs(m: TuringMachine) -> Trs:
    return pebbled_system(m).trs


def pebbled_system(m: TuringMachine) -> EncodedSystem:
    _check_reserved(m, {TAPE_END, PEBBLE, TOP})
    return _assemble(m, {PEBBLE: 1, TOP: 0}, _pebbled_parts(m))


def _pickn_parts(succ: str, zero: str) -> list:
    pickn = const(PICKN)
    return [
        (Rule(pickn, App(CONS, (pickn,))), "pickn grow"),
        (Rule(pickn, App(OK, (App(zero, (const(TAPE_END),)),))), "pickn stop"),
        (Rule(App(CONS, (App(OK, (X,)),)), App(OK, (App(succ, (X,)),))), "pickn count"),
    ]


def pickn_trs(succ: str = "S", zero: str = "0") -> Trs:
    rules = [r for r, _ in _pickn_parts(succ, zero)]
    return validate_trs({succ: 1, zero: 1, TAPE_END: 0}, rules)


def dp_gadget_system(m: TuringMachine) -> EncodedSystem:
    """pebbled(M) ⊎ pickn plus the ternary run rule, designating ``run(T, pickn, pickn)``."""
    s, z = m.require_designated()
    _check_reserved(m, {TAPE_END, PEBBLE, TOP, RUN, OK, CONS, PICKN})

    def ok(u):
        return App(OK, (u,))

    parts = _pebbled_parts(m) + _pickn_parts(s, z)
    parts.append((
        Rule(
            App(RUN, (const(TOP), ok(X), ok(Y))),
            App(RUN, (App(m.initial, (X, Y)), ok(Y), const(PICKN))),
        ),
        "dp run",
    ))
    term = App(RUN, (const(TOP), const(PICKN), const(PICKN)))
    return _assemble(m, {PEBBLE: 1, TOP: 0, RUN: 3, OK: 1, CONS: 1, PICKN: 0}, parts, term)


def build_dp_gadget(m: TuringMachine) -> RelativeProblem:
    system = dp_gadget_system(m)
    return RelativeProblem(system.trs, system.trs, system.designated_term)


def mark(name: str) -> str:
    return name + MARK


def dependency_pairs(trs: Trs) -> RelativeProblem:
    """Marked pairs ``f♯(s) -> g♯(u)`` for every defined-rooted subterm ``g(u)`` of a rhs."""
    defined = set(trs.defined_symbols)
    clash = {mark(f) for f in defined} & set(trs.signature)
    if clash:
        raise SignatureClash(clash)
    pairs = []
    for rule in trs.rules:
        lhs = App(mark(rule.lhs.head), rule.lhs.args)
        for u in _subterms_preorder(rule.rhs):
            if type(u) is App and u.head in defined:
                pair = Rule(lhs, App(mark(u.head), u.args))
                if pair not in pairs:
                    pairs.append(pair)
    sig = dict(trs.signature)
    sig.update({mark(f): trs.signature[f] for f in trs.defined_symbols})
    return RelativeProblem(validate_trs(sig, pairs), trs)


def _subterms_preorder(t: Term):
    yield t
    if type(t) is App:
        for a in t.args:
            yield from _subterms_preorder(a)


def phi(t: Term, machine: Optional[TuringMachine] = None) -> tuple:
    """The tape word spelled by a tape term ``f1(f2(...(t)))``."""
    word = []
    s = t
    while True:
        if type(s) is Var:
            raise NotATapeTerm(f"{show(t)} contains a variable")
        if s.head == TAPE_END and not s.args:
            return tuple(word)
        if len(s.args) != 1 or (machine is not None and s.head not in machine.alphabet):
            raise NotATapeTerm(f"{show(t)} is not a tape term")
        word.append(s.head)
        s = s.args[0]


def interpret(machine: TuringMachine, t: Term) -> Configuration:
    """Φ: the configuration denoted by ``q(s1, s2)``."""
    if type(t) is Var or t.head not in machine.states or len(t.args) != 2:
        raise NotAMachineTerm(f"{show(t)} is not a machine term")
    try:
        left, right = phi(t.args[0], machine), phi(t.args[1], machine)
    except NotATapeTerm as exc:
        raise NotAMachineTerm(str(exc)) from None
    return Configuration.make(t.head, left, right, machine.blank)


def encode_config(machine: TuringMachine, c: Configuration) -> Term:
    c = c.canonical(machine.blank)
    end = const(TAPE_END)
    return App(c.state, (tower(c.left, end), tower(c.right, end)))


def is_machine_term(machine: TuringMachine, t: Term) -> bool:
    try:
        interpret(machine, t)
    except NotAMachineTerm:
        return False
    return True
