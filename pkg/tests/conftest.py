import random

import pytest
from hypothesis import settings, strategies as st

from trsbench.machines import random_config, random_machine, random_trs
from trsbench.terms import App, Var

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")

SIG = {"a": 0, "b": 0, "f": 1, "g": 2}
VARS = ("x", "y", "z")


def terms(sig=SIG, var_names=VARS, max_leaves=8):
    consts = [f for f, n in sig.items() if n == 0]
    funcs = [(f, n) for f, n in sig.items() if n > 0]
    leaves = st.sampled_from([App(c) for c in consts] + [Var(x) for x in var_names])

    def extend(children):
        return st.one_of(*[
            st.tuples(*[children] * n).map(lambda args, f=f: App(f, args)) for f, n in funcs
        ])

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def ground_terms(sig=SIG, max_leaves=8):
    return terms(sig, (), max_leaves)


seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def machines_and_configs(draw, **kwargs):
    rng = random.Random(draw(seeds))
    m = random_machine(rng, **kwargs)
    return m, random_config(rng, m)


@st.composite
def rewrite_systems(draw):
    return random_trs(random.Random(draw(seeds)))


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: full-size acceptance criteria")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
