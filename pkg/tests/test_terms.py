import itertools

import pytest
from hypothesis import given, strategies as st

from trsbench.terms import (
    HOLE,
    App,
    InvalidPosition,
    Var,
    app,
    apply_subst,
    compose,
    const,
    context_at,
    fill,
    is_ground,
    iter_subterms,
    match,
    positions,
    rename_apart,
    replace_at,
    subterm_at,
    unify,
    variables,
)

from conftest import terms

x, y, z = Var("x"), Var("y"), Var("z")
a, b, end = const("a"), const("b"), const("t")


def f(*args):
    return app("f", *args)


def g(*args):
    return app("g", *args)


class TestPositions:
    def test_variable_has_only_root(self):
        assert positions(x) == [()]

    def test_nested(self):
        assert positions(f(x, g(y))) == [(), (1,), (2,), (2, 1)]

    def test_constant(self):
        assert positions(end) == [()]

    @given(terms())
    def test_root_present_and_count_is_size(self, t):
        ps = positions(t)
        assert () in ps
        assert len(ps) == len(set(ps)) == t.size

    @given(terms())
    def test_preorder_is_lexicographic(self, t):
        ps = positions(t)
        assert ps == sorted(ps)


class TestSubtermReplace:
    def test_examples(self):
        assert subterm_at(f(a, b), (2,)) == b
        assert subterm_at(f(a, b), ()) == f(a, b)
        assert subterm_at(app("q", end, app("S", end)), (2, 1)) == end
        assert replace_at(f(a), (1,), b) == f(b)
        assert replace_at(f(a), (), b) == b
        assert replace_at(app("c", app("ok", x)), (1,), const("pickn")) == app("c", const("pickn"))

    def test_invalid_position(self):
        with pytest.raises(InvalidPosition):
            subterm_at(f(a), (2,))
        with pytest.raises(InvalidPosition):
            replace_at(a, (1,), b)

    @given(terms(), st.data())
    def test_replace_own_subterm_is_identity(self, t, data):
        p = data.draw(st.sampled_from(positions(t)))
        assert replace_at(t, p, subterm_at(t, p)) == t

    @given(terms(), st.data())
    def test_iter_subterms_agrees_with_subterm_at(self, t, data):
        for p, s in iter_subterms(t):
            assert subterm_at(t, p) == s

    def test_context_fill(self):
        t = f(a, g(b, x))
        c = context_at(t, (2, 1))
        assert c == f(a, g(const(HOLE), x))
        assert fill(c, b) == t
        with pytest.raises(ValueError):
            fill(f(a, b), a)


class TestSubstitution:
    def test_examples(self):
        q = app("q", x, app("f", y))
        assert apply_subst({"x": end}, q) == app("q", end, app("f", y))
        assert apply_subst({}, q) is q
        assert apply_subst({"x": app("S", x)}, app("run", x)) == app("run", app("S", x))

    @given(terms(), st.dictionaries(st.sampled_from("xyz"), terms()),
           st.dictionaries(st.sampled_from("xyz"), terms()))
    def test_composition(self, t, sigma, tau):
        assert apply_subst(sigma, apply_subst(tau, t)) == apply_subst(compose(sigma, tau), t)


class TestMatch:
    def test_examples(self):
        q = app("q", x, app("f", y))
        assert match(q, app("q", end, app("f", end))) == {"x": end, "y": end}
        assert match(f(x, x), f(a, b)) is None
        assert match(const("run"), const("run")) == {}

    @given(terms(), st.dictionaries(st.sampled_from("xyz"), terms()))
    def test_instance_is_matched(self, p, sigma):
        s = apply_subst(sigma, p)
        m = match(p, s)
        assert m is not None
        assert apply_subst(m, p) == s

    @given(terms(), terms())
    def test_soundness(self, p, s):
        m = match(p, s)
        if m is not None:
            assert apply_subst(m, p) == s


# -- unification against independent oracles ---------------------------------

SMALL = {"a": 0, "f": 1, "g": 2}


def _all_terms(depth, var_names):
    """Every term of depth <= ``depth`` over SMALL and the given variables."""
    out = [App("a")] + [Var(v) for v in var_names]
    for _ in range(depth):
        new = [App("f", (s,)) for s in out] + [App("g", (s, u)) for s in out for u in out]
        out = list(dict.fromkeys(out + new))
    return out


GROUND_2 = _all_terms(2, ())
DEPTH_3 = _all_terms(3, ("x", "y"))


def _brute_unifier(s, t):
    names = sorted(set(variables(s)) | set(variables(t)))
    for combo in itertools.product(GROUND_2, repeat=len(names)):
        sigma = dict(zip(names, combo))
        if apply_subst(sigma, s) == apply_subst(sigma, t):
            return sigma
    return None


def _robinson(s, t):
    """Textbook recursive unification, applying the substitution eagerly."""
    sigma = {}

    def occ(v, u):
        return u == Var(v) if type(u) is Var else any(occ(v, w) for w in u.args)

    def go(u, w):
        u, w = apply_subst(sigma, u), apply_subst(sigma, w)
        if u == w:
            return True
        if type(w) is Var and type(u) is not Var:
            u, w = w, u
        if type(u) is Var:
            if occ(u.name, w):
                return False
            for k in list(sigma):
                sigma[k] = apply_subst({u.name: w}, sigma[k])
            sigma[u.name] = w
            return True
        if u.head != w.head or len(u.args) != len(w.args):
            return False
        return all(go(p, q) for p, q in zip(u.args, w.args))

    return sigma if go(s, t) else None


depth3 = st.sampled_from(DEPTH_3)


class TestUnify:
    def test_examples(self):
        assert unify(const("run"), const("run")) == {}
        assert unify(f(x), f(g(y))) == {"x": g(y)}
        assert unify(x, f(x)) is None

    @given(terms(), terms())
    def test_soundness_and_idempotence(self, s, t):
        sigma = unify(s, t)
        if sigma is not None:
            assert apply_subst(sigma, s) == apply_subst(sigma, t)
            for u in sigma.values():
                assert apply_subst(sigma, u) == u

    @given(depth3, depth3)
    def test_unifiability_agrees_with_robinson(self, s, t):
        assert (unify(s, t) is None) == (_robinson(s, t) is None)

    @given(depth3, depth3)
    def test_more_general_than_brute_force_unifiers(self, s, t):
        tau = _brute_unifier(s, t)
        if tau is None:
            return
        sigma = unify(s, t)
        assert sigma is not None
        # tau factors through sigma: tau ∘ sigma = tau on every variable
        for v in set(variables(s)) | set(variables(t)):
            assert apply_subst(tau, apply_subst(sigma, Var(v))) == apply_subst(tau, Var(v))


class TestRename:
    def test_examples(self):
        r = rename_apart(f(x), {"x"})
        assert type(r.args[0]) is Var and r.args[0].name != "x"
        assert rename_apart(f(x), set()) == f(x)
        r = rename_apart(g(x, y), {"x", "y"})
        u, v = r.args
        assert u != v and {u.name, v.name}.isdisjoint({"x", "y"})

    @given(terms(), st.sets(st.sampled_from("xyz")))
    def test_renaming_is_injective_and_avoids(self, t, avoid):
        r = rename_apart(t, avoid)
        assert set(variables(r)).isdisjoint(avoid)
        assert len(variables(r)) == len(variables(t))
        assert match(t, r) is not None and match(r, t) is not None


def test_is_ground():
    assert is_ground(app("q", end, end))
    assert not is_ground(app("run", x))
    assert is_ground(const("T"))
