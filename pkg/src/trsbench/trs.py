"""Rewrite rules, the one-step rewrite relation and syntactic TRS properties."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .terms import (
    App,
    Term,
    Var,
    apply_subst,
    iter_subterms,
    match,
    renaming_apart,
    replace_at,
    show,
    subterm_at,
    symbols_of,
    unify,
    var_occurrences,
    variables,
)


class TrsError(ValueError):
    pass


class VariableLhs(TrsError):
    def __init__(self, index: int):
        super().__init__(f"rule {index}: left-hand side is a variable")
        self.index = index


class ExtraVariableRhs(TrsError):
    def __init__(self, index: int, name: str):
        super().__init__(f"rule {index}: variable {name} occurs only on the right-hand side")
        self.index = index
        self.name = name


class ArityMismatch(TrsError):
    def __init__(self, symbol: str, arities):
        arities = sorted(arities)
        super().__init__(f"symbol {symbol} used with arities {arities}")
        self.symbol = symbol
        self.arities = arities


class NoConstants(TrsError):
    def __init__(self):
        super().__init__("signature has no constant symbol, so there are no ground terms")


@dataclass(frozen=True)
class Rule:
    lhs: Term
    rhs: Term

    def __str__(self):
        return f"{show(self.lhs)} -> {show(self.rhs)}"


@dataclass(frozen=True, eq=False)
class Trs:
    """A validated TRS. Build it with :func:`validate_trs`."""

    signature: Mapping[str, int]
    rules: tuple
    _by_head: dict = field(default_factory=dict, repr=False, compare=False)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        for i, r in enumerate(self.rules):
            self._by_head.setdefault(r.lhs.head, []).append(i)

    def __len__(self):
        return len(self.rules)

    def __eq__(self, other):
        return (
            isinstance(other, Trs)
            and dict(self.signature) == dict(other.signature)
            and self.rules == other.rules
        )

    def __hash__(self):
        return hash(self.rules)

    @property
    def defined_symbols(self) -> list:
        return list(self._by_head)

    def rules_for(self, head: str) -> list:
        return self._by_head.get(head, [])

    def __str__(self):
        return "\n".join(str(r) for r in self.rules)


@dataclass(frozen=True)
class Step:
    source: Term
    target: Term
    position: tuple
    rule_index: int
    substitution: Mapping[str, Term]

    def __str__(self):
        pos = ".".join(map(str, self.position)) or "ε"
        return f"{show(self.source)} -> {show(self.target)}  @{pos} rule {self.rule_index}"


@dataclass(frozen=True)
class Reduction:
    start: Term
    steps: tuple = ()

    def __post_init__(self):
        prev = self.start
        for s in self.steps:
            if s.source != prev:
                raise ValueError("reduction steps do not chain")
            prev = s.target

    def __len__(self):
        return len(self.steps)

    @property
    def last(self) -> Term:
        return self.steps[-1].target if self.steps else self.start

    @property
    def terms(self) -> list:
        return [self.start] + [s.target for s in self.steps]

    def extend(self, step: Step) -> "Reduction":
        return Reduction(self.start, self.steps + (step,))


@dataclass(frozen=True)
class CriticalPair:
    left: Term
    right: Term
    overlap_position: tuple
    rule_pair: tuple
    peak: Term

    def __str__(self):
        return f"<{show(self.left)}, {show(self.right)}>"


@dataclass(frozen=True)
class Classification:
    left_linear: bool
    orthogonal: bool
    non_erasing: bool
    collapsing: bool


def infer_signature(terms: Iterable[Term]) -> dict:
    arities: dict = {}
    for t in terms:
        for f, ars in symbols_of(t).items():
            arities.setdefault(f, set()).update(ars)
    for f, ars in arities.items():
        if len(ars) > 1:
            raise ArityMismatch(f, ars)
    return {f: next(iter(ars)) for f, ars in arities.items()}


def validate_trs(signature: Optional[Mapping[str, int]], rules: Sequence) -> Trs:
    """Check the rule invariants and return a :class:`Trs`.

    ``rules`` may hold :class:`Rule` objects or ``(lhs, rhs)`` pairs. With
    ``signature=None`` the signature is inferred from the rules.
    """
    rules = tuple(r if isinstance(r, Rule) else Rule(*r) for r in rules)
    for i, r in enumerate(rules):
        if type(r.lhs) is Var:
            raise VariableLhs(i)
        lhs_vars = set(variables(r.lhs))
        for x in variables(r.rhs):
            if x not in lhs_vars:
                raise ExtraVariableRhs(i, x)
    used = infer_signature(t for r in rules for t in (r.lhs, r.rhs))
    sig = dict(signature) if signature is not None else {}
    for f, n in used.items():
        if f in sig and sig[f] != n:
            raise ArityMismatch(f, {sig[f], n})
        sig.setdefault(f, n)
    return Trs(sig, rules)


def check_term(trs: Trs, t: Term) -> None:
    for f, ars in symbols_of(t).items():
        if f in trs.signature and {trs.signature[f]} != ars:
            raise ArityMismatch(f, ars | {trs.signature[f]})
        if len(ars) > 1:
            raise ArityMismatch(f, ars)


def _redexes(trs: Trs, t: Term, root_only: bool = False) -> Iterator[tuple]:
    """Yield ``(position, rule_index, substitution)`` in the canonical order."""
    subterms = [((), t)] if root_only else iter_subterms(t)
    for p, s in subterms:
        if type(s) is Var:
            continue
        for i in trs.rules_for(s.head):
            sigma = match(trs.rules[i].lhs, s)
            if sigma is not None:
                yield p, i, sigma


def one_step_reducts(trs: Trs, t: Term) -> list:
    """All steps from ``t``, ordered by position (lexicographic) then rule index."""
    return [
        Step(t, replace_at(t, p, apply_subst(sigma, trs.rules[i].rhs)), p, i, sigma)
        for p, i, sigma in _redexes(trs, t)
    ]


def root_step_reducts(trs: Trs, t: Term) -> list:
    return [
        Step(t, apply_subst(sigma, trs.rules[i].rhs), (), i, sigma)
        for _, i, sigma in _redexes(trs, t, root_only=True)
    ]


_CACHE_LIMIT = 200_000


def successors(trs: Trs, t: Term) -> tuple:
    """Distinct one-step reducts of ``t`` in first-occurrence order (cached).

    Built from the root reducts and the cached reducts of each argument, which
    visits redexes in the same order as :func:`one_step_reducts`.
    """
    cache = trs._cache
    out = cache.get(t)
    if out is None:
        if type(t) is Var:
            return ()
        seen = dict.fromkeys(root_successors(trs, t))
        args = t.args
        for k, a in enumerate(args):
            for s in successors(trs, a):
                seen.setdefault(App(t.head, args[:k] + (s,) + args[k + 1:]), None)
        out = tuple(seen)
        if len(cache) >= _CACHE_LIMIT:
            cache.clear()
        cache[t] = out
    return out


def root_successors(trs: Trs, t: Term) -> tuple:
    seen = {}
    for _, i, sigma in _redexes(trs, t, root_only=True):
        seen.setdefault(apply_subst(sigma, trs.rules[i].rhs), None)
    return tuple(seen)


def find_step(trs: Trs, source: Term, target: Term, root_only: bool = False) -> Step:
    """Recover full step metadata for a known one-step reduction."""
    for p, i, sigma in _redexes(trs, source, root_only):
        if replace_at(source, p, apply_subst(sigma, trs.rules[i].rhs)) == target:
            return Step(source, target, p, i, sigma)
    raise ValueError(f"{show(source)} does not rewrite to {show(target)}")


def reduction_from_terms(trs: Trs, terms: Sequence[Term]) -> Reduction:
    steps = tuple(find_step(trs, a, b) for a, b in zip(terms, terms[1:]))
    return Reduction(terms[0], steps)


def replay(trs: Trs, step: Step) -> bool:
    """Whether ``step`` is a genuine rewrite step of ``trs``."""
    if not 0 <= step.rule_index < len(trs.rules):
        return False
    rule = trs.rules[step.rule_index]
    try:
        redex = subterm_at(step.source, step.position)
    except LookupError:
        return False
    return (
        apply_subst(step.substitution, rule.lhs) == redex
        and replace_at(step.source, step.position, apply_subst(step.substitution, rule.rhs))
        == step.target
    )


def is_normal_form(trs: Trs, t: Term) -> bool:
    return next(_redexes(trs, t), None) is None


def reductions_up_to(trs: Trs, t: Term, n: int) -> Iterator[Reduction]:
    """All reductions from ``t`` of length at most ``n``, breadth-first."""
    level = [Reduction(t)]
    for depth in range(n + 1):
        yield from level
        if depth == n:
            return
        level = [red.extend(step) for red in level for step in one_step_reducts(trs, red.last)]
        if not level:
            return


def critical_pairs(trs: Trs) -> list:
    """Critical pairs of all overlaps, outer rule first.

    For outer rule i overlapped at non-variable position p by a renamed copy
    of rule j, the pair is ``<σ(r_i), σ(l_i)[σ(r_j)]_p>``. The overlap of a
    rule with itself at the root is skipped.
    """
    out = []
    for i, outer in enumerate(trs.rules):
        outer_vars = set(variables(outer.lhs))
        for j, inner in enumerate(trs.rules):
            ren = renaming_apart(variables(inner.lhs), outer_vars)
            l2, r2 = apply_subst(ren, inner.lhs), apply_subst(ren, inner.rhs)
            for p, s in iter_subterms(outer.lhs):
                if type(s) is Var or (i == j and not p):
                    continue
                sigma = unify(s, l2)
                if sigma is None:
                    continue
                peak = apply_subst(sigma, outer.lhs)
                out.append(
                    CriticalPair(
                        left=apply_subst(sigma, outer.rhs),
                        right=replace_at(peak, p, apply_subst(sigma, r2)),
                        overlap_position=p,
                        rule_pair=(i, j),
                        peak=peak,
                    )
                )
    return out


def is_left_linear_rule(rule: Rule) -> bool:
    occ = var_occurrences(rule.lhs)
    return len(occ) == len(set(occ))


def classify(trs: Trs) -> Classification:
    left_linear = all(is_left_linear_rule(r) for r in trs.rules)
    return Classification(
        left_linear=left_linear,
        orthogonal=left_linear and not critical_pairs(trs),
        non_erasing=all(set(variables(r.lhs)) == set(variables(r.rhs)) for r in trs.rules),
        collapsing=any(type(r.rhs) is Var for r in trs.rules),
    )


def enumerate_ground_terms(signature: Mapping[str, int], max_size: int) -> Iterator[Term]:
    """Every ground term with at most ``max_size`` nodes, by ascending size.

    Within one size, terms follow the signature's symbol order.
    """
    symbols = list(signature.items())
    if not any(n == 0 for _, n in symbols):
        raise NoConstants()
    by_size: dict = {}
    for size in range(1, max_size + 1):
        layer = []
        for f, n in symbols:
            if n == 0:
                if size == 1:
                    layer.append(App(f, ()))
                continue
            for parts in _compositions(size - 1, n):
                if any(not by_size.get(k) for k in parts):
                    continue
                for args in itertools.product(*(by_size[k] for k in parts)):
                    layer.append(App(f, args))
        by_size[size] = layer
        yield from layer


def _compositions(total: int, parts: int) -> Iterator[tuple]:
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest
