"""Seeded random machines, random TRSs and a few hand-built reference machines."""

from __future__ import annotations

import random
from typing import Optional

from .terms import App, Term, Var
from .trs import Rule, Trs, validate_trs
from .turing import L, R, Configuration, TuringMachine

LETTERS = ("B", "a", "b")
NUMERALS = ("B", "S", "0")


def random_machine(rng: random.Random, max_states: int = 4, alphabet=LETTERS,
                   density: float = 0.75, succ: Optional[str] = None,
                   zero: Optional[str] = None) -> TuringMachine:
    """A machine with 1..max_states states over ``alphabet`` (first symbol is the blank)."""
    n = rng.randint(1, max_states)
    states = [f"q{i}" for i in range(n)]
    delta = {}
    for q in states:
        for a in alphabet:
            if rng.random() < density:
                delta[(q, a)] = (rng.choice(states), rng.choice(alphabet), rng.choice((L, R)))
    return TuringMachine(states, alphabet, alphabet[0], "q0", delta, succ, zero)


def random_config(rng: random.Random, m: TuringMachine, max_len: int = 4) -> Configuration:
    def word():
        return [rng.choice(m.alphabet) for _ in range(rng.randint(0, max_len))]

    return Configuration.make(rng.choice(m.states), word(), word(), m.blank)


def machine_corpus(seed: int, count: int, **kwargs) -> list:
    rng = random.Random(seed)
    return [random_machine(rng, **kwargs) for _ in range(count)]


def empty_machine() -> TuringMachine:
    """Halts immediately everywhere."""
    return TuringMachine(["q0"], NUMERALS, "B", "q0", {}, "S", "0")


def successor_machine() -> TuringMachine:
    """Computes n + 1: writes S into the blank left of the input and halts on it."""
    return TuringMachine(
        ["q0", "back", "fix", "h"], NUMERALS, "B", "q0",
        {
            ("q0", "S"): ("back", "S", L),
            ("q0", "0"): ("back", "0", L),
            ("back", "B"): ("fix", "S", R),
            ("fix", "S"): ("h", "S", L),
            ("fix", "0"): ("h", "0", L),
        },
        "S", "0",
    )


def rel_succ_machine() -> TuringMachine:
    """Decides m = n + 1 from ``0 S^n [q0] S^m 0``.

    One right S is crossed off first, then right and left S are crossed off
    in pairs. Only ``chk`` ever halts scanning 0, which happens exactly when
    both blocks run out together.
    """
    return TuringMachine(
        ["q0", "gr", "gl", "chk", "fail"], ("B", "S", "0", "X"), "B", "q0",
        {
            ("q0", "S"): ("gr", "X", R),
            ("q0", "0"): ("fail", "0", R),
            ("gr", "X"): ("gr", "X", R),
            ("gr", "S"): ("gl", "X", L),
            ("gr", "0"): ("chk", "0", L),
            ("gl", "X"): ("gl", "X", L),
            ("gl", "S"): ("gr", "X", R),
            ("gl", "0"): ("fail", "0", R),
            ("chk", "X"): ("chk", "X", L),
            ("chk", "S"): ("fail", "S", R),
        },
        "S", "0",
    )


def right_mover() -> TuringMachine:
    return TuringMachine(["q0"], LETTERS, "B", "q0", {("q0", "B"): ("q0", "B", R)})


def bouncer() -> TuringMachine:
    """Loops forever between the cells of ``ab`` when started in q0 on ``a``."""
    return TuringMachine(
        ["q0", "q1"], LETTERS, "B", "q0",
        {("q0", "a"): ("q1", "a", R), ("q1", "b"): ("q0", "b", L)},
    )


def loop_machines() -> list:
    """``(machine, configuration)`` pairs that never halt."""
    return [
        (right_mover(), Configuration("q0")),
        (bouncer(), Configuration.make("q0", (), ("a", "b"), "B")),
    ]


# -- random rewrite systems ---------------------------------------------------

_SIGNATURES = (
    {"a": 0, "f": 1},
    {"a": 0, "b": 0, "f": 1},
    {"a": 0, "f": 1, "g": 2},
    {"a": 0, "b": 0, "f": 1, "g": 2},
    {"a": 0, "f": 1, "h": 1},
    {"a": 0, "b": 0, "g": 2},
)


def random_term(rng: random.Random, sig: dict, depth: int, var_names=()) -> Term:
    leaves = [f for f, n in sig.items() if n == 0]
    if depth <= 0 or rng.random() < 0.35:
        if var_names and rng.random() < 0.5:
            return Var(rng.choice(var_names))
        return App(rng.choice(leaves), ())
    f = rng.choice(list(sig))
    return App(f, tuple(random_term(rng, sig, depth - 1, var_names) for _ in range(sig[f])))


def random_trs(rng: random.Random, max_rules: int = 4, depth: int = 2) -> Trs:
    sig = dict(rng.choice(_SIGNATURES))
    rules = []
    for _ in range(rng.randint(1, max_rules)):
        lhs = random_term(rng, sig, depth, ("x", "y"))
        while type(lhs) is Var:
            lhs = random_term(rng, sig, depth, ("x", "y"))
        lhs_vars = sorted({v.name for v in _vars(lhs)})
        rhs = random_term(rng, sig, depth, tuple(lhs_vars))
        rules.append(Rule(lhs, rhs))
    return validate_trs(sig, rules)


def _vars(t: Term):
    if type(t) is Var:
        yield t
    else:
        for a in t.args:
            yield from _vars(a)
