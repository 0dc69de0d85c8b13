"""Text formats for terms, rewrite systems and Turing machines.

TRS files follow the usual ``(VAR ...)`` / ``(RULES ...)`` layout. A few
structured comment lines carry what that layout cannot::

    # TERM: run(T,pickn,pickn)
    # SIGNATURE: q0/2 B/1 t/0
    (VAR x y)
    (RULES
      # provenance note for the next rule
      q0(x,B(y)) -> q0(B(x),y)
    )

Machines use one ``key: value`` header per line and one
``delta: q a -> q' b D`` line per transition.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional

from .encodings import EncodedSystem
from .terms import App, Term, Var, show, variables
from .trs import Reduction, Rule, TrsError, infer_signature, validate_trs
from .turing import Configuration, MachineError, TuringMachine


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)
        self.line = line
        self.col = col


_TOKEN = re.compile(r"\s*(->|[(),]|(?:(?!->)[^\s(),])+)")


@dataclass
class _Tok:
    text: str
    line: int
    col: int


def _tokenize(text: str, line: int = 1, col0: int = 0) -> list:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos]!r}", line, col0 + pos + 1)
            break
        if not m.group(1):
            break
        toks.append(_Tok(m.group(1), line, col0 + m.start(1) + 1))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, toks: list, var_names: Iterable[str] = ()):
        self.toks = toks
        self.i = 0
        self.vars = set(var_names)

    def peek(self) -> Optional[_Tok]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            last = self.toks[-1] if self.toks else _Tok("", 0, 0)
            raise ParseError("unexpected end of input", last.line, last.col + len(last.text))
        self.i += 1
        return tok

    def expect(self, text: str) -> _Tok:
        tok = self.next()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text!r}", tok.line, tok.col)
        return tok

    def term(self) -> Term:
        tok = self.next()
        if tok.text in ("(", ")", ",", "->"):
            raise ParseError(f"expected a symbol, found {tok.text!r}", tok.line, tok.col)
        nxt = self.peek()
        if nxt is not None and nxt.text == "(":
            if tok.text in self.vars:
                raise ParseError(f"variable {tok.text} applied to arguments", tok.line, tok.col)
            self.next()
            args = [self.term()]
            while self.peek() is not None and self.peek().text == ",":
                self.next()
                args.append(self.term())
            self.expect(")")
            return App(tok.text, args)
        if tok.text in self.vars:
            return Var(tok.text)
        return App(tok.text, ())


def parse_term(text: str, var_names: Iterable[str] = ()) -> Term:
    """Parse ``f(t1,...,tn)`` syntax; only names in ``var_names`` are variables."""
    p = _Parser(_tokenize(text), var_names)
    t = p.term()
    extra = p.peek()
    if extra is not None:
        raise ParseError(f"trailing input {extra.text!r}", extra.line, extra.col)
    return t


def format_term(t: Term) -> str:
    return show(t)


def _parse_signature(text: str, line: int) -> dict:
    sig = {}
    for item in text.split():
        name, sep, arity = item.rpartition("/")
        if not sep or not name or not arity.isdigit():
            raise ParseError(f"bad signature entry {item!r}", line, 1)
        sig[name] = int(arity)
    return sig


def parse_trs(text: str) -> EncodedSystem:
    toks, comments = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if stripped.startswith("#"):
            comments.append((lineno, stripped[1:].strip()))
        else:
            toks.extend(_tokenize(raw, lineno))

    term_text, term_line, signature = None, 0, None
    for lineno, body in comments:
        if body.startswith("TERM:"):
            term_text, term_line = body[len("TERM:"):].strip(), lineno
        elif body.startswith("SIGNATURE:"):
            signature = _parse_signature(body[len("SIGNATURE:"):], lineno)

    p = _Parser(toks)
    rules, rule_lines, rules_start = [], [], 0
    while p.peek() is not None:
        p.expect("(")
        head = p.next()
        if head.text == "VAR":
            while p.peek() is not None and p.peek().text != ")":
                p.vars.add(p.next().text)
            p.expect(")")
        elif head.text == "RULES":
            rules_start = head.line
            while p.peek() is not None and p.peek().text != ")":
                start = p.peek()
                lhs = p.term()
                p.expect("->")
                rhs = p.term()
                rules.append(Rule(lhs, rhs))
                rule_lines.append(start.line)
            p.expect(")")
        else:
            raise ParseError(f"unknown section {head.text!r}", head.line, head.col)

    notes = {}
    prev = rules_start
    for i, line in enumerate(rule_lines):
        between = [body for ln, body in comments if prev < ln < line]
        if between:
            notes[i] = between[-1]
        prev = line

    try:
        trs = validate_trs(signature, rules)
    except TrsError as exc:
        raise ParseError(str(exc)) from None
    term = None
    if term_text is not None:
        term = parse_term(term_text, p.vars)
        sig = dict(trs.signature)
        for f, n in infer_signature([term]).items():
            if sig.setdefault(f, n) != n:
                raise ParseError(f"designated term uses {f} with arity {n}", term_line, 1)
        trs = validate_trs(sig, trs.rules)
    return EncodedSystem(trs, term, notes)


def format_trs(system) -> str:
    """Write an :class:`EncodedSystem` (or a bare Trs) in the TRS text format."""
    if not isinstance(system, EncodedSystem):
        system = EncodedSystem(system)
    trs = system.trs
    lines = []
    if system.designated_term is not None:
        lines.append(f"# TERM: {show(system.designated_term)}")
    lines.append("# SIGNATURE: " + " ".join(f"{f}/{n}" for f, n in trs.signature.items()))
    names: dict = {}
    for r in trs.rules:
        for x in variables(r.lhs) + variables(r.rhs):
            names.setdefault(x, None)
    if system.designated_term is not None:
        for x in variables(system.designated_term):
            names.setdefault(x, None)
    lines.append("(VAR" + "".join(" " + x for x in names) + ")")
    lines.append("(RULES")
    for i, r in enumerate(trs.rules):
        if i in system.notes:
            lines.append(f"  # {system.notes[i]}")
        lines.append(f"  {show(r.lhs)} -> {show(r.rhs)}")
    lines.append(")")
    return "\n".join(lines) + "\n"


def format_reduction(red: Reduction) -> str:
    """One step per line: ``@position rule i: source -> target``."""
    if not red.steps:
        return f"{show(red.start)}  (empty reduction)\n"
    out = []
    for s in red.steps:
        pos = ".".join(map(str, s.position)) or "ε"
        out.append(f"@{pos} rule {s.rule_index}: {show(s.source)} -> {show(s.target)}")
    return "\n".join(out) + "\n"


_TM_KEYS = ("states", "initial", "alphabet", "blank", "S", "0")


def parse_tm(text: str) -> TuringMachine:
    header: dict = {}
    delta = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        key, value = key.strip(), value.strip()
        if not sep:
            raise ParseError("expected 'key: value'", lineno, 1)
        if key == "delta":
            lhs, arrow, rhs = value.partition("->")
            src, dst = lhs.split(), rhs.split()
            if not arrow or len(src) != 2 or len(dst) != 3:
                raise ParseError("expected 'delta: q a -> q2 b D'", lineno, 1)
            if tuple(src) in delta:
                raise ParseError(f"duplicate transition for {src[0]} {src[1]}", lineno, 1)
            delta[tuple(src)] = tuple(dst)
        elif key in _TM_KEYS:
            if key in header:
                raise ParseError(f"duplicate header {key!r}", lineno, 1)
            header[key] = value
        else:
            raise ParseError(f"unknown header {key!r}", lineno, 1)
    for key in ("states", "initial", "alphabet", "blank"):
        if key not in header:
            raise ParseError(f"missing header {key!r}")
    try:
        return TuringMachine(
            states=header["states"].split(),
            alphabet=header["alphabet"].split(),
            blank=header["blank"],
            initial=header["initial"],
            delta=delta,
            succ=header.get("S"),
            zero=header.get("0"),
        )
    except MachineError as exc:
        raise ParseError(str(exc)) from None


def format_tm(m: TuringMachine) -> str:
    lines = [
        "states: " + " ".join(m.states),
        f"initial: {m.initial}",
        "alphabet: " + " ".join(m.alphabet),
        f"blank: {m.blank}",
    ]
    if m.succ is not None:
        lines.append(f"S: {m.succ}")
    if m.zero is not None:
        lines.append(f"0: {m.zero}")
    for (q, a), (q2, b, d) in m.transitions():
        lines.append(f"delta: {q} {a} -> {q2} {b} {d}")
    return "\n".join(lines) + "\n"


def parse_config(text: str, machine: TuringMachine) -> Configuration:
    """Parse ``a b [q] c d``: tape in reading order with the state before the scanned cell."""
    toks = text.split()
    marks = [i for i, tok in enumerate(toks) if tok.startswith("[") and tok.endswith("]")]
    if len(marks) != 1:
        raise ParseError("configuration needs exactly one [state] marker")
    i = marks[0]
    state = toks[i][1:-1]
    if state not in machine.states:
        raise ParseError(f"unknown state {state!r}")
    for a in toks[:i] + toks[i + 1:]:
        if a not in machine.alphabet:
            raise ParseError(f"unknown tape symbol {a!r}")
    return Configuration.make(state, reversed(toks[:i]), toks[i + 1:], machine.blank)
