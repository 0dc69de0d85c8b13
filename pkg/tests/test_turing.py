import pytest
from hypothesis import given, settings, strategies as st

from trsbench.machines import (
    LETTERS,
    NUMERALS,
    empty_machine,
    rel_succ_machine,
    right_mover,
    successor_machine,
)
from trsbench.turing import (
    Configuration,
    Fails,
    Halted,
    Holds,
    MachineError,
    MissingDesignatedSymbols,
    OutOfFuel,
    Running,
    TuringMachine,
    Undefined,
    Value,
    initial_config_fun,
    initial_config_rel,
    tm_compute_fun,
    tm_relation,
    tm_run,
    tm_step,
)

from conftest import machines_and_configs


class ArrayTape:
    """Fixed-window tape with an explicit head index."""

    def __init__(self, machine, c, width=64):
        self.m = machine
        self.state = c.state
        self.cells = [machine.blank] * (2 * width + 1)
        self.head = width
        for i, sym in enumerate(c.left):
            self.cells[width - 1 - i] = sym
        for i, sym in enumerate(c.right):
            self.cells[width + i] = sym

    def step(self):
        move = self.m.delta.get((self.state, self.cells[self.head]))
        if move is None:
            return False
        self.state, self.cells[self.head], d = move
        self.head += 1 if d == "R" else -1
        return True

    def config(self):
        left = self.cells[:self.head][::-1]
        right = self.cells[self.head:]
        return Configuration.make(self.state, left, right, self.m.blank)


def writer():
    return TuringMachine(["q0"], LETTERS, "B", "q0", {("q0", "B"): ("q0", "a", "R")})


class TestStep:
    def test_right_move(self):
        assert tm_step(writer(), Configuration("q0")) == Configuration("q0", ("a",))

    def test_no_transition(self):
        m = TuringMachine(["q0"], LETTERS, "B", "q0", {})
        assert tm_step(m, Configuration("q0", ("a",), ("b",))) is None

    def test_left_move_canonicalizes(self):
        m = TuringMachine(["q0", "q1"], LETTERS, "B", "q0", {("q0", "a"): ("q1", "b", "L")})
        assert tm_step(m, Configuration("q0", (), ("a",))) == Configuration("q1", (), ("B", "b"))

    def test_left_move_trims_right(self):
        m = TuringMachine(["q0", "q1"], LETTERS, "B", "q0", {("q0", "a"): ("q1", "B", "L")})
        assert tm_step(m, Configuration("q0", ("b",), ("a",))) == Configuration("q1", (), ("b",))

    @settings(max_examples=1000)
    @given(machines_and_configs())
    def test_agrees_with_array_tape(self, mc):
        m, c = mc
        tape = ArrayTape(m, c)
        for _ in range(50):
            nxt = tm_step(m, c)
            moved = tape.step()
            assert (nxt is not None) == moved
            if nxt is None:
                break
            assert nxt == tape.config()
            c = nxt

    @given(machines_and_configs())
    def test_output_is_canonical(self, mc):
        m, c = mc
        nxt = tm_step(m, c)
        if nxt is not None:
            assert nxt.canonical(m.blank) == nxt
            assert nxt.canonical(m.blank).canonical(m.blank) == nxt


class TestRun:
    def test_empty_delta_halts_at_once(self):
        c = Configuration("q0", ("S",), ("0",))
        assert tm_run(empty_machine(), c, 100) == Halted(c, 0)

    def test_right_mover_runs(self):
        assert isinstance(tm_run(right_mover(), Configuration("q0"), 10), Running)

    def test_fuel_zero(self):
        c = Configuration("q0")
        assert tm_run(writer(), c, 0) == Running(c)

    @given(machines_and_configs(), st.integers(0, 40))
    def test_halting_is_stable(self, mc, k):
        m, c = mc
        res = tm_run(m, c, k)
        if isinstance(res, Halted):
            assert res.steps <= k
            assert tm_step(m, res.final) is None
            for k2 in (res.steps, k + 1, k + 17):
                assert tm_run(m, c, k2) == res


class TestFunctions:
    def test_initial_configs(self):
        m = successor_machine()
        assert initial_config_fun(m, 0) == Configuration("q0", (), ("0",))
        assert initial_config_fun(m, 1) == Configuration("q0", (), ("S", "0"))
        assert initial_config_fun(m, 2) == Configuration("q0", (), ("S", "S", "0"))
        assert initial_config_rel(m, 2, 1) == Configuration("q0", ("S", "S", "0"), ("S", "0"))

    def test_missing_designated(self):
        with pytest.raises(MissingDesignatedSymbols):
            initial_config_fun(writer(), 1)
        with pytest.raises(MissingDesignatedSymbols):
            tm_relation(writer(), 1, 1, 10)

    @pytest.mark.parametrize("n", range(6))
    def test_identity(self, n):
        assert tm_compute_fun(empty_machine(), n, 10) == Value(n)

    def test_undefined_when_halting_on_blank(self):
        m = TuringMachine(["q0"], NUMERALS, "B", "q0", {("q0", "S"): ("q0", "S", "R"),
                                                        ("q0", "0"): ("q0", "0", "R")}, "S", "0")
        assert tm_compute_fun(m, 2, 10) is Undefined

    def test_out_of_fuel(self):
        m = TuringMachine(["q0"], NUMERALS, "B", "q0", {("q0", "0"): ("q0", "0", "R"),
                                                        ("q0", "B"): ("q0", "B", "R")}, "S", "0")
        assert tm_compute_fun(m, 0, 20) is OutOfFuel

    @pytest.mark.parametrize("n", range(8))
    def test_successor(self, n):
        assert tm_compute_fun(successor_machine(), n, 100) == Value(n + 1)

    def test_relation_empty_delta(self):
        for n in range(4):
            assert tm_relation(empty_machine(), n, 0, 5) is Holds
            assert tm_relation(empty_machine(), n, 1, 5) is Fails

    def test_rel_succ_examples(self):
        m = rel_succ_machine()
        assert tm_relation(m, 2, 3, 200) is Holds
        assert tm_relation(m, 2, 2, 200) is Fails

    def test_rel_succ_table(self):
        m = rel_succ_machine()
        for n in range(7):
            for k in range(8):
                expected = Holds if k == n + 1 else Fails
                assert tm_relation(m, n, k, 500) is expected, (n, k)


class TestValidation:
    def test_states_and_symbols_disjoint(self):
        with pytest.raises(MachineError):
            TuringMachine(["a"], LETTERS, "B", "a", {})

    def test_bad_direction(self):
        with pytest.raises(MachineError):
            TuringMachine(["q0"], LETTERS, "B", "q0", {("q0", "a"): ("q0", "a", "N")})

    def test_unknown_symbol(self):
        with pytest.raises(MachineError):
            TuringMachine(["q0"], LETTERS, "B", "q0", {("q0", "z"): ("q0", "a", "R")})


def test_config_str():
    assert str(Configuration("q", ("a", "b"), ("c",))) == "b a [q] c"
