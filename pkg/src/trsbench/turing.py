"""Deterministic single-tape Turing machines over finite-carrier tapes.

A configuration ``⟨w1, q, w2⟩`` stores the part of the tape left of the head
in ``left`` nearest-first (cell -1 first) and the rest in ``right`` starting
with the scanned cell 0. Both words are kept without trailing blanks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

L, R = "L", "R"


class MachineError(ValueError):
    pass


class MissingDesignatedSymbols(MachineError):
    def __init__(self, what: str = "S and 0"):
        super().__init__(f"machine has no designated {what} symbol")


@dataclass(frozen=True)
class TuringMachine:
    states: tuple
    alphabet: tuple
    blank: str
    initial: str
    delta: Mapping[tuple, tuple] = field(default_factory=dict)
    succ: Optional[str] = None
    zero: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "delta", dict(self.delta))
        states, alphabet = set(self.states), set(self.alphabet)
        if len(states) != len(self.states) or len(alphabet) != len(self.alphabet):
            raise MachineError("duplicate state or symbol")
        if states & alphabet:
            raise MachineError(f"states and alphabet overlap: {sorted(states & alphabet)}")
        if self.blank not in alphabet:
            raise MachineError(f"blank {self.blank} not in alphabet")
        if self.initial not in states:
            raise MachineError(f"initial state {self.initial} not a state")
        for sym in (self.succ, self.zero):
            if sym is not None and sym not in alphabet:
                raise MachineError(f"designated symbol {sym} not in alphabet")
        for (q, a), (q2, b, d) in self.delta.items():
            if q not in states or q2 not in states:
                raise MachineError(f"transition {q} {a}: unknown state")
            if a not in alphabet or b not in alphabet:
                raise MachineError(f"transition {q} {a}: unknown symbol")
            if d not in (L, R):
                raise MachineError(f"transition {q} {a}: direction must be L or R, got {d}")

    def __hash__(self):
        return hash((self.states, self.alphabet, self.blank, self.initial,
                     tuple(sorted(self.delta.items())), self.succ, self.zero))

    def require_designated(self) -> tuple:
        if self.succ is None or self.zero is None:
            raise MissingDesignatedSymbols()
        return self.succ, self.zero

    def transitions(self) -> list:
        """``delta`` as a list ordered by state then symbol declaration order."""
        si = {q: i for i, q in enumerate(self.states)}
        ai = {a: i for i, a in enumerate(self.alphabet)}
        return sorted(self.delta.items(), key=lambda kv: (si[kv[0][0]], ai[kv[0][1]]))


def _trim(word: tuple, blank: str) -> tuple:
    end = len(word)
    while end and word[end - 1] == blank:
        end -= 1
    return word[:end]


@dataclass(frozen=True)
class Configuration:
    state: str
    left: tuple = ()
    right: tuple = ()

    @classmethod
    def make(cls, state: str, left, right, blank: str) -> "Configuration":
        return cls(state, _trim(tuple(left), blank), _trim(tuple(right), blank))

    def canonical(self, blank: str) -> "Configuration":
        return Configuration.make(self.state, self.left, self.right, blank)

    def scanned(self, blank: str) -> str:
        return self.right[0] if self.right else blank

    def __str__(self):
        left = " ".join(reversed(self.left))
        parts = [p for p in (left, f"[{self.state}]", " ".join(self.right)) if p]
        return " ".join(parts)


@dataclass(frozen=True)
class Halted:
    final: Configuration
    steps: int


@dataclass(frozen=True)
class Running:
    last: Configuration


RunResult = Union[Halted, Running]


def tm_step(machine: TuringMachine, c: Configuration) -> Optional[Configuration]:
    blank = machine.blank
    scanned = c.right[0] if c.right else blank
    move = machine.delta.get((c.state, scanned))
    if move is None:
        return None
    q2, written, d = move
    rest = c.right[1:]
    if d == R:
        left, right = (written,) + c.left, rest
    else:
        head = c.left[0] if c.left else blank
        left, right = c.left[1:], (head, written) + rest
    return Configuration(q2, _trim(left, blank), _trim(right, blank))


def tm_run(machine: TuringMachine, c: Configuration, fuel: int) -> RunResult:
    for steps in range(fuel + 1):
        nxt = tm_step(machine, c)
        if nxt is None:
            return Halted(c, steps)
        if steps == fuel:
            break
        c = nxt
    return Running(c)


def initial_config_fun(machine: TuringMachine, n: int) -> Configuration:
    s, z = machine.require_designated()
    return Configuration.make(machine.initial, (), (s,) * n + (z,), machine.blank)


def initial_config_rel(machine: TuringMachine, n: int, m: int) -> Configuration:
    """``0 S^n q0 S^m 0``: the left word, nearest-first, is ``S^n 0``."""
    s, z = machine.require_designated()
    return Configuration.make(machine.initial, (s,) * n + (z,), (s,) * m + (z,), machine.blank)


@dataclass(frozen=True)
class Value:
    m: int


class _Flag:
    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


Undefined = _Flag("Undefined")
OutOfFuel = _Flag("OutOfFuel")
Holds = _Flag("Holds")
Fails = _Flag("Fails")


def tm_compute_fun(machine: TuringMachine, n: int, fuel: int):
    """``Value(m)``, ``Undefined`` or ``OutOfFuel`` for f_M(n)."""
    s, z = machine.require_designated()
    res = tm_run(machine, initial_config_fun(machine, n), fuel)
    if isinstance(res, Running):
        return OutOfFuel
    word = res.final.right
    m = 0
    while m < len(word) and word[m] == s:
        m += 1
    scanned_zero = word[m] if m < len(word) else machine.blank
    return Value(m) if scanned_zero == z else Undefined


def tm_relation(machine: TuringMachine, n: int, m: int, fuel: int):
    """``Holds`` iff M halts from ``0 S^n q0 S^m 0`` scanning 0."""
    _, z = machine.require_designated()
    res = tm_run(machine, initial_config_rel(machine, n, m), fuel)
    if isinstance(res, Running):
        return OutOfFuel
    return Holds if res.final.scanned(machine.blank) == z else Fails
