"""First-order terms, positions, substitutions, matching and unification.

Terms are immutable values compared structurally. A variable is ``Var(name)``;
everything else is ``App(head, args)`` where the arity of ``head`` is
``len(args)``. Positions are tuples of 1-based child indices, ``()`` being the
root.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional, Union

#: reserved 0-ary symbol marking the hole of a context
HOLE = "HOLE"

Position = tuple
Substitution = dict


class InvalidPosition(LookupError):
    pass


class Symbol(NamedTuple):
    name: str
    arity: int


class Var:
    __slots__ = ("name", "_hash")

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("var", name))

    @property
    def size(self) -> int:
        return 1

    def __eq__(self, other):
        return self is other or (type(other) is Var and other.name == self.name)

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return sort_key(self) < sort_key(other)

    def __repr__(self):
        return f"Var({self.name!r})"

    def __str__(self):
        return self.name


class App:
    __slots__ = ("head", "args", "size", "_hash")

    def __init__(self, head: str, args: Iterable[Term] = ()):
        args = tuple(args)
        size = 1
        for a in args:
            size += a.size
        self.head = head
        self.args = args
        self.size = size
        self._hash = hash((head, args))

    @property
    def arity(self) -> int:
        return len(self.args)

    def __eq__(self, other):
        if self is other:
            return True
        return (
            type(other) is App
            and self._hash == other._hash
            and self.head == other.head
            and self.args == other.args
        )

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return sort_key(self) < sort_key(other)

    def __repr__(self):
        if not self.args:
            return f"App({self.head!r})"
        return f"App({self.head!r}, {list(self.args)!r})"

    def __str__(self):
        return show(self)


Term = Union[Var, App]


def const(name: str) -> App:
    return App(name, ())


def app(head: str, *args: Term) -> App:
    return App(head, args)


def tower(heads: Iterable[str], bottom: Term) -> Term:
    """``tower(["a", "b"], t)`` is ``a(b(t))``."""
    t = bottom
    for h in reversed(list(heads)):
        t = App(h, (t,))
    return t


def show(t: Term) -> str:
    if type(t) is Var:
        return t.name
    if not t.args:
        return t.head
    return t.head + "(" + ",".join(show(a) for a in t.args) + ")"


def sort_key(t: Term):
    if type(t) is Var:
        return (0, t.name)
    return (1, t.head, len(t.args), tuple(sort_key(a) for a in t.args))


def positions(t: Term) -> list:
    """All positions of ``t`` in pre-order, which is also lexicographic order."""
    out = []
    stack = [((), t)]
    while stack:
        p, s = stack.pop()
        out.append(p)
        if type(s) is App:
            for i in range(len(s.args), 0, -1):
                stack.append((p + (i,), s.args[i - 1]))
    return out


def iter_subterms(t: Term) -> Iterator[tuple]:
    """Yield ``(position, subterm)`` pairs in pre-order."""
    stack = [((), t)]
    while stack:
        p, s = stack.pop()
        yield p, s
        if type(s) is App:
            for i in range(len(s.args), 0, -1):
                stack.append((p + (i,), s.args[i - 1]))


def subterm_at(t: Term, p: Position) -> Term:
    s = t
    for i in p:
        if type(s) is Var or not 1 <= i <= len(s.args):
            raise InvalidPosition(f"{_show_pos(p)} is not a position of {show(t)}")
        s = s.args[i - 1]
    return s


def replace_at(t: Term, p: Position, s: Term) -> Term:
    if not p:
        return s
    if type(t) is Var or not 1 <= p[0] <= len(t.args):
        raise InvalidPosition(f"{_show_pos(p)} is not a position of {show(t)}")
    i = p[0] - 1
    args = list(t.args)
    args[i] = replace_at(args[i], p[1:], s)
    return App(t.head, args)


def _show_pos(p: Position) -> str:
    return ".".join(map(str, p)) if p else "ε"


def variables(t: Term) -> list:
    """Variable names of ``t`` in order of first occurrence (no repeats)."""
    seen = {}
    for _, s in iter_subterms(t):
        if type(s) is Var:
            seen.setdefault(s.name, None)
    return list(seen)


def var_occurrences(t: Term) -> list:
    return [s.name for _, s in iter_subterms(t) if type(s) is Var]


def is_ground(t: Term) -> bool:
    if type(t) is Var:
        return False
    return all(is_ground(a) for a in t.args)


def symbols_of(t: Term) -> dict:
    """Map each function symbol in ``t`` to the arities it is used with."""
    out: dict = {}
    for _, s in iter_subterms(t):
        if type(s) is App:
            out.setdefault(s.head, set()).add(len(s.args))
    return out


def apply_subst(sigma: Mapping[str, Term], t: Term) -> Term:
    if not sigma:
        return t
    return _apply(sigma, t)


def _apply(sigma, t):
    if type(t) is Var:
        return sigma.get(t.name, t)
    if not t.args:
        return t
    return App(t.head, [_apply(sigma, a) for a in t.args])


def compose(sigma: Mapping[str, Term], tau: Mapping[str, Term]) -> dict:
    """The substitution ``sigma ∘ tau`` (apply ``tau`` first)."""
    out = {x: apply_subst(sigma, s) for x, s in tau.items()}
    for x, s in sigma.items():
        out.setdefault(x, s)
    return {x: s for x, s in out.items() if s != Var(x)}


def match(pattern: Term, subject: Term) -> Optional[dict]:
    """The substitution σ with σ(pattern) ≡ subject, or None."""
    sigma: dict = {}
    stack = [(pattern, subject)]
    while stack:
        p, s = stack.pop()
        if type(p) is Var:
            bound = sigma.get(p.name)
            if bound is None:
                sigma[p.name] = s
            elif bound != s:
                return None
        elif type(s) is Var or p.head != s.head or len(p.args) != len(s.args):
            return None
        else:
            stack.extend(zip(p.args, s.args))
    return sigma


def occurs(name: str, t: Term) -> bool:
    if type(t) is Var:
        return t.name == name
    return any(occurs(name, a) for a in t.args)


def unify(s: Term, t: Term) -> Optional[dict]:
    """An idempotent most general unifier of ``s`` and ``t``, or None."""
    sigma: dict = {}

    def walk(u):
        while type(u) is Var and u.name in sigma:
            u = sigma[u.name]
        return u

    def occurs_walk(name, u):
        u = walk(u)
        if type(u) is Var:
            return u.name == name
        return any(occurs_walk(name, a) for a in u.args)

    stack = [(s, t)]
    while stack:
        a, b = stack.pop()
        a, b = walk(a), walk(b)
        if type(a) is Var and type(b) is Var and a.name == b.name:
            continue
        if type(a) is Var:
            if occurs_walk(a.name, b):
                return None
            sigma[a.name] = b
        elif type(b) is Var:
            if occurs_walk(b.name, a):
                return None
            sigma[b.name] = a
        elif a.head != b.head or len(a.args) != len(b.args):
            return None
        else:
            stack.extend(zip(a.args, b.args))

    def resolve(u):
        u = walk(u)
        if type(u) is Var or not u.args:
            return u
        return App(u.head, [resolve(x) for x in u.args])

    return {x: resolve(Var(x)) for x in sigma}


def fresh_names(avoid: Iterable[str], base: str = "x") -> Iterator[str]:
    avoid = set(avoid)
    for i in itertools.count(1):
        name = f"{base}{i}"
        if name not in avoid:
            yield name


def rename_apart(t: Term, avoid: Iterable[str]) -> Term:
    """Injectively rename the variables of ``t`` away from ``avoid``."""
    return apply_subst(renaming_apart(variables(t), avoid), t)


def renaming_apart(names: Iterable[str], avoid: Iterable[str]) -> dict:
    names = list(names)
    avoid = set(avoid)
    clashing = [x for x in names if x in avoid]
    if not clashing:
        return {}
    gen = fresh_names(avoid | set(names), "v")
    return {x: Var(next(gen)) for x in clashing}


def fill(context: Term, s: Term) -> Term:
    """``C[s]``: replace the unique HOLE of ``context`` by ``s``."""
    holes = [p for p, u in iter_subterms(context) if type(u) is App and u.head == HOLE]
    if len(holes) != 1:
        raise ValueError(f"context must contain exactly one {HOLE}, found {len(holes)}")
    return replace_at(context, holes[0], s)


def context_at(t: Term, p: Position) -> Term:
    return replace_at(t, p, const(HOLE))
