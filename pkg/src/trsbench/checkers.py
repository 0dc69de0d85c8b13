"""Bounded semi-decision procedures for normalization, confluence and relative termination.

Every check takes explicit :class:`Fuel` and answers with a three-valued
:class:`CheckOutcome`. ``CONFIRMED`` and ``REFUTED`` carry evidence that can be
replayed with :mod:`trsbench.trs`; ``UNKNOWN`` means the fuel ran out first.
Uniform and peak-bounded confirmations are confirmations *up to the stated
bounds* (term size, peak depth) and say so in ``detail``.
"""

from __future__ import annotations

import enum
import hashlib
import heapq
import itertools
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Mapping, Optional

from .encodings import RelativeProblem
from .terms import App, Term, Var, show
from .trs import (
    Reduction,
    Step,
    Trs,
    critical_pairs,
    enumerate_ground_terms,
    find_step,
    reduction_from_terms,
    root_successors,
    successors,
    validate_trs,
)


class Verdict(enum.Enum):
    CONFIRMED = "Confirmed"
    REFUTED = "Refuted"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


CONFIRMED, REFUTED, UNKNOWN = Verdict.CONFIRMED, Verdict.REFUTED, Verdict.UNKNOWN


@dataclass(frozen=True)
class Fuel:
    max_reduction_length: int = 100
    max_peak_depth: int = 3
    max_join_length: int = 10
    max_term_size: Optional[int] = None
    max_states: int = 20_000  # per search; wide branching gives up rather than exhausting memory

    def __post_init__(self):
        for name in ("max_reduction_length", "max_peak_depth", "max_join_length", "max_states"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.max_term_size is not None and self.max_term_size < 0:
            raise ValueError("max_term_size must be >= 0")


@dataclass(frozen=True)
class CheckOutcome:
    verdict: Verdict
    fuel_used: int
    bound: Optional[int] = None
    witnesses: tuple = ()
    term: Optional[Term] = None
    transcript: Optional[str] = None
    detail: str = ""
    term_bounds: tuple = ()

    @property
    def confirmed(self) -> bool:
        return self.verdict is CONFIRMED

    @property
    def refuted(self) -> bool:
        return self.verdict is REFUTED

    @property
    def unknown(self) -> bool:
        return self.verdict is UNKNOWN


def _digest(terms: Iterable[Term]) -> str:
    h = hashlib.sha256()
    for t in terms:
        h.update(show(t).encode())
        h.update(b"\n")
    return h.hexdigest()


# -- longest reductions ----------------------------------------------------


@dataclass
class _Longest:
    height: Optional[int]  # exact longest length from the start, if finite
    cycle: Optional[list]  # terms start ->* u ->+ u, if a cycle was found
    truncated: bool
    max_depth: int
    visited: list


def _longest(start: Term, succ: Callable, limit: int, expand: Callable = None,
             max_states: int = 20_000) -> _Longest:
    """Depth-first longest-path search with cycle detection.

    ``expand(u)`` decides whether the out-edges of ``u`` exist: True (follow
    them), False (treat ``u`` as a sink) or None (unknown, counts as
    truncation).
    """
    height: dict = {}
    partial: dict = {}
    path: list = []
    index: dict = {}
    stack: list = []
    visited: list = []
    max_depth = 0
    truncated = False

    def enter(u):
        nonlocal max_depth, truncated
        path.append(u)
        index[u] = len(path) - 1
        max_depth = max(max_depth, len(path) - 1)
        visited.append(u)
        ok = True if expand is None else expand(u)
        if ok is None:
            truncated = True
            stack.append([u, iter(()), 0, True])
        else:
            stack.append([u, iter(succ(u)) if ok else iter(()), 0, False])

    enter(start)
    while stack:
        frame = stack[-1]
        u = frame[0]
        d = len(path) - 1
        v = next(frame[1], None)
        if v is None:
            stack.pop()
            path.pop()
            del index[u]
            if frame[3]:
                partial[u] = max(partial.get(u, -1), limit - d)
            else:
                height[u] = frame[2]
            if stack:
                parent = stack[-1]
                if frame[3]:
                    parent[3] = True
                else:
                    parent[2] = max(parent[2], frame[2] + 1)
            continue
        if d >= limit:
            frame[3] = True
            frame[1] = iter(())
            truncated = True
            continue
        if v in index:
            return _Longest(None, path + [v], truncated, max_depth, visited)
        if len(visited) >= max_states:
            return _Longest(None, None, True, max_depth, visited)
        if v in height:
            if d + 1 + height[v] > limit:
                frame[3] = True
                truncated = True
            else:
                frame[2] = max(frame[2], height[v] + 1)
            continue
        if partial.get(v, -1) >= limit - (d + 1):
            frame[3] = True
            continue
        enter(v)
    if truncated or start not in height:
        return _Longest(None, None, True, max_depth, visited)
    return _Longest(height[start], None, False, max_depth, visited)


def check_sn_term(trs: Trs, t: Term, fuel: Fuel = Fuel()) -> CheckOutcome:
    """Is every reduction from ``t`` finite? Exact when not UNKNOWN."""
    res = _longest(t, lambda u: successors(trs, u), fuel.max_reduction_length, None, fuel.max_states)
    if res.cycle is not None:
        witness = reduction_from_terms(trs, res.cycle)
        return CheckOutcome(REFUTED, res.max_depth, witnesses=(witness,), term=t,
                            detail="cycle: the reduction revisits its last term")
    if res.truncated:
        return CheckOutcome(UNKNOWN, fuel.max_reduction_length, term=t,
                            detail="some reduction reached the length bound without repeating")
    return CheckOutcome(CONFIRMED, res.max_depth, bound=res.height, term=t,
                        transcript=_digest(res.visited))


def check_wn_term(trs: Trs, t: Term, fuel: Fuel = Fuel()) -> CheckOutcome:
    """Does ``t`` reach a normal form? Breadth-first, so witnesses are shortest."""
    limit = fuel.max_reduction_length
    parent = {t: None}
    frontier = [t]
    truncated = False
    depth = 0
    while frontier:
        nxt = []
        for u in frontier:
            succ = successors(trs, u)
            if not succ:
                return CheckOutcome(CONFIRMED, depth, bound=depth,
                                    witnesses=(_path_reduction(trs, parent, u),), term=t)
            if depth == limit:
                truncated = True
                continue
            for v in succ:
                if v not in parent:
                    parent[v] = u
                    nxt.append(v)
            if len(parent) >= fuel.max_states:
                return CheckOutcome(UNKNOWN, depth, term=t, detail=f"{len(parent)} terms reached")
        frontier = nxt
        if frontier:
            depth += 1
    if truncated:
        return CheckOutcome(UNKNOWN, limit, term=t)
    return CheckOutcome(REFUTED, depth, term=t, transcript=_digest(parent),
                        detail=f"reachable set of {len(parent)} terms has no normal form")


def _path_terms(parent: Mapping, u: Term) -> list:
    out = []
    while u is not None:
        out.append(u)
        u = parent[u]
    return out[::-1]


def _path_reduction(trs: Trs, parent: Mapping, u: Term) -> Reduction:
    return reduction_from_terms(trs, _path_terms(parent, u))


# -- joinability -------------------------------------------------------------


class _Reach:
    """The breadth-first reachable set of one term, grown one level at a time.

    Growth stops for good once ``cap`` terms are known; a capped set is never
    reported as exhausted, so it can only lead to UNKNOWN.
    """

    __slots__ = ("trs", "parent", "frontier", "depth", "order", "cap", "capped")

    def __init__(self, trs: Trs, root: Term, cap: int = 20_000):
        self.trs = trs
        self.parent = {root: None}
        self.order = [root]
        self.frontier = [root]
        self.depth = 0
        self.cap = cap
        self.capped = False

    @property
    def exhausted(self) -> bool:
        return not self.frontier

    @property
    def growable(self) -> bool:
        return bool(self.frontier) and not self.capped

    def grow(self) -> list:
        new = []
        for u in self.frontier:
            for v in successors(self.trs, u):
                if v not in self.parent:
                    self.parent[v] = u
                    new.append(v)
            if len(self.parent) >= self.cap:
                self.capped = True
                break
        self.order.extend(new)
        if not self.capped:
            self.frontier = new
            self.depth += 1
        return new

    def reduction_to(self, u: Term) -> Reduction:
        return _path_reduction(self.trs, self.parent, u)


class _Joiner:
    def __init__(self, trs: Trs, max_len: int, cap: int = 20_000):
        self.trs = trs
        self.max_len = max_len
        self.cap = cap
        self.cache: dict = {}

    def reach(self, u: Term) -> _Reach:
        r = self.cache.get(u)
        if r is None:
            r = self.cache[u] = _Reach(self.trs, u, self.cap)
        return r

    def join(self, u: Term, v: Term):
        """``(verdict, evidence)``; evidence is two reductions to a common reduct, or None."""
        if u == v:
            return CONFIRMED, (Reduction(u), Reduction(v))
        ru, rv = self.reach(u), self.reach(v)
        common = self._common(ru.order, rv) or self._common(rv.order, ru)
        while common is None:
            if ru.exhausted and rv.exhausted:
                return REFUTED, None
            can_u = ru.growable and ru.depth < self.max_len
            can_v = rv.growable and rv.depth < self.max_len
            if not can_u and not can_v:
                return UNKNOWN, None
            if can_u and (not can_v or ru.depth <= rv.depth):
                common = self._common(ru.grow(), rv)
            else:
                common = self._common(rv.grow(), ru)
        return CONFIRMED, (ru.reduction_to(common), rv.reduction_to(common))

    @staticmethod
    def _common(terms, other: _Reach) -> Optional[Term]:
        for w in terms:
            if w in other.parent:
                return w
        return None


def joinable(trs: Trs, u: Term, v: Term, max_len: int, cap: int = 20_000) -> tuple:
    return _Joiner(trs, max_len, cap).join(u, v)


# -- confluence ---------------------------------------------------------------


def check_cr_term(trs: Trs, t: Term, fuel: Fuel = Fuel(), _joiner: _Joiner = None) -> CheckOutcome:
    """Join every peak ``t1 <-* t ->* t2`` whose legs are at most ``max_peak_depth`` long."""
    joiner = _joiner or _Joiner(trs, fuel.max_join_length, fuel.max_states)
    reach = _Reach(trs, t, fuel.max_states)
    while reach.depth < fuel.max_peak_depth and reach.growable:
        reach.grow()
    exhaustive = reach.exhausted
    nodes = reach.order
    if reach.capped or len(nodes) * (len(nodes) - 1) // 2 > fuel.max_states:
        return CheckOutcome(UNKNOWN, fuel.max_peak_depth, term=t,
                            detail=f"too many peaks: {len(nodes)} reachable terms")
    unknown = 0
    for i, t1 in enumerate(nodes):
        for t2 in nodes[i + 1:]:
            verdict, _ = joiner.join(t1, t2)
            if verdict is REFUTED:
                return CheckOutcome(
                    REFUTED, fuel.max_peak_depth, term=t,
                    witnesses=(reach.reduction_to(t1), reach.reduction_to(t2)),
                    transcript=_digest(itertools.chain(joiner.reach(t1).order, joiner.reach(t2).order)),
                    detail="the two reducts have finite, disjoint reachable sets",
                )
            if verdict is UNKNOWN:
                unknown += 1
    if unknown:
        return CheckOutcome(UNKNOWN, fuel.max_join_length, term=t,
                            detail=f"{unknown} peaks not joined within the join bound")
    scope = "all peaks" if exhaustive else f"peaks of depth <= {fuel.max_peak_depth}"
    return CheckOutcome(CONFIRMED, fuel.max_peak_depth, term=t, transcript=_digest(nodes),
                        detail=f"{scope} joinable ({len(nodes)} reachable terms)")


def _linear_skeleton(t: Term, counter) -> Term:
    if type(t) is App and not t.args:
        return Var(f"z{next(counter)}")
    if type(t) is Var:
        return t
    return App(t.head, [_linear_skeleton(a, counter) for a in t.args])


def uniform_terms(signature: Mapping[str, int], max_size: int, open_terms: bool = True) -> list:
    """Ground terms up to ``max_size`` followed by their constants-to-variables skeletons."""
    ground = list(enumerate_ground_terms(signature, max_size))
    if not open_terms:
        return ground
    seen = set(ground)
    out = list(ground)
    for g in ground:
        s = _linear_skeleton(g, itertools.count(1))
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out


def _uniform(check, trs: Trs, fuel: Fuel, terms: list, what: str) -> CheckOutcome:
    first_unknown = None
    for t in terms:
        res = check(t)
        if res.refuted:
            return res
        if res.unknown and first_unknown is None:
            first_unknown = res
    if first_unknown is not None:
        return first_unknown
    return CheckOutcome(CONFIRMED, fuel.max_term_size or 0, transcript=_digest(terms),
                        detail=f"{what} for all {len(terms)} enumerated terms of size <= {fuel.max_term_size}")


def check_cr_uniform(trs: Trs, fuel: Fuel = Fuel(max_term_size=3), open_terms: bool = True) -> CheckOutcome:
    size = fuel.max_term_size if fuel.max_term_size is not None else 3
    fuel = replace(fuel, max_term_size=size)
    terms = uniform_terms(trs.signature, size, open_terms)
    joiner = _Joiner(trs, fuel.max_join_length, fuel.max_states)
    return _uniform(lambda t: check_cr_term(trs, t, fuel, joiner), trs, fuel, terms, "confluent")


def check_sn_uniform(trs: Trs, fuel: Fuel = Fuel(max_term_size=3)) -> CheckOutcome:
    size = fuel.max_term_size if fuel.max_term_size is not None else 3
    fuel = replace(fuel, max_term_size=size)
    terms = list(enumerate_ground_terms(trs.signature, size))
    return _uniform(lambda t: check_sn_term(trs, t, fuel), trs, fuel, terms, "terminating")


def check_wn_uniform(trs: Trs, fuel: Fuel = Fuel(max_term_size=3)) -> CheckOutcome:
    size = fuel.max_term_size if fuel.max_term_size is not None else 3
    fuel = replace(fuel, max_term_size=size)
    terms = list(enumerate_ground_terms(trs.signature, size))
    return _uniform(lambda t: check_wn_term(trs, t, fuel), trs, fuel, terms, "normalizing")


def check_wcr(trs: Trs, fuel: Fuel = Fuel(), ground_only: bool = False) -> CheckOutcome:
    """Weak confluence via critical pairs, or by enumerating ground one-step peaks."""
    joiner = _Joiner(trs, fuel.max_join_length, fuel.max_states)
    if not ground_only:
        pairs = critical_pairs(trs)
        unknown = 0
        for cp in pairs:
            verdict, _ = joiner.join(cp.left, cp.right)
            if verdict is REFUTED:
                return CheckOutcome(
                    REFUTED, fuel.max_join_length, term=cp.peak,
                    witnesses=(reduction_from_terms(trs, [cp.peak, cp.left]),
                               reduction_from_terms(trs, [cp.peak, cp.right])),
                    detail=f"critical pair {cp} from rules {cp.rule_pair} is not joinable",
                )
            if verdict is UNKNOWN:
                unknown += 1
        if unknown:
            return CheckOutcome(UNKNOWN, fuel.max_join_length,
                                detail=f"{unknown} of {len(pairs)} critical pairs unresolved")
        return CheckOutcome(CONFIRMED, fuel.max_join_length,
                            detail=f"all {len(pairs)} critical pairs joinable")
    size = fuel.max_term_size if fuel.max_term_size is not None else 4
    terms = list(enumerate_ground_terms(trs.signature, size))

    def peaks(t):
        succ = successors(trs, t)
        unknown = 0
        for i, u in enumerate(succ):
            for v in succ[i + 1:]:
                verdict, _ = joiner.join(u, v)
                if verdict is REFUTED:
                    return CheckOutcome(
                        REFUTED, fuel.max_join_length, term=t,
                        witnesses=(reduction_from_terms(trs, [t, u]), reduction_from_terms(trs, [t, v])),
                        detail=f"ground peak {show(u)} <- {show(t)} -> {show(v)} is not joinable",
                    )
                if verdict is UNKNOWN:
                    unknown += 1
        if unknown:
            return CheckOutcome(UNKNOWN, fuel.max_join_length, term=t)
        return CheckOutcome(CONFIRMED, fuel.max_join_length, term=t)

    fuel = replace(fuel, max_term_size=size)
    return _uniform(peaks, trs, fuel, terms, "ground peaks joinable")


# -- relative rewriting -------------------------------------------------------


def combined_trs(problem: RelativeProblem) -> Trs:
    """Top rules followed by base rules; witnesses index into this system."""
    return validate_trs(problem.signature, problem.top.rules + problem.base.rules)


def _relative_step(problem: RelativeProblem, u: Term, v: Term, root: bool) -> Step:
    if root:
        s = find_step(problem.top, u, v, root_only=True)
        return s
    s = find_step(problem.base, u, v)
    return Step(s.source, s.target, s.position, s.rule_index + len(problem.top.rules), s.substitution)


def _relative_reduction(problem: RelativeProblem, start: Term, hops: list) -> Reduction:
    steps = []
    u = start
    for v, root in hops:
        steps.append(_relative_step(problem, u, v, root))
        u = v
    return Reduction(start, tuple(steps))


def _relative_successors(problem: RelativeProblem, u: Term) -> list:
    out = {v: True for v in root_successors(problem.top, u)}
    for v in successors(problem.base, u):
        out.setdefault(v, False)
    return list(out.items())


def _terms_or_enumeration(problem: RelativeProblem, t: Optional[Term], fuel: Fuel) -> list:
    if t is not None:
        return [t]
    size = fuel.max_term_size if fuel.max_term_size is not None else 3
    return list(enumerate_ground_terms(problem.signature, size))


def chain_search(problem: RelativeProblem, t: Optional[Term], min_root_steps: int,
                 fuel: Fuel = Fuel()) -> CheckOutcome:
    """Look for a (root-top ∪ base) reduction with at least ``min_root_steps`` root-top steps.

    REFUTED (against relative termination) with the witness when one is found;
    CONFIRMED when the bounded search space is exhausted without one.
    """
    terms = _terms_or_enumeration(problem, t, fuel)
    if min_root_steps > 0 and not problem.top.rules:
        return CheckOutcome(CONFIRMED, 0, bound=0, detail="no top rules, so no root-top steps")
    results = [_chain_from(problem, s, min_root_steps, fuel) for s in terms]
    for res in results:
        if res.refuted:
            return res
    for res in results:
        if res.unknown:
            return res
    if len(results) == 1:
        return results[0]
    return CheckOutcome(CONFIRMED, fuel.max_reduction_length, transcript=_digest(terms),
                        detail=f"no chain from any of {len(terms)} enumerated terms")


def _is_cyclic(problem: RelativeProblem, red: Reduction) -> bool:
    """Whether some term repeats with a root-top step in between."""
    terms = red.terms
    roots = [s.position == () and s.rule_index < len(problem.top.rules) for s in red.steps]
    last_seen: dict = {}
    for i, u in enumerate(terms):
        if u in last_seen and any(roots[last_seen[u]:i]):
            return True
        last_seen[u] = i
    return False


def _chain_from(problem: RelativeProblem, start: Term, k: int, fuel: Fuel) -> CheckOutcome:
    limit = fuel.max_reduction_length
    best: dict = {(start, 0): 0}
    parent: dict = {(start, 0): None}
    counter = itertools.count()
    heap = [(0, start.size, 0, next(counter), start, 0)]
    truncated = False
    explored = 0
    while heap:
        _, _, steps, _, u, roots = heapq.heappop(heap)
        if best.get((u, roots), steps + 1) < steps:
            continue
        if roots >= k:
            hops = []
            state = (u, roots)
            while parent[state] is not None:
                prev, root = parent[state]
                hops.append((state[0], root))
                state = prev
            witness = _relative_reduction(problem, start, hops[::-1])
            cyclic = _is_cyclic(problem, witness)
            return CheckOutcome(
                REFUTED, steps, bound=sum(1 for s in witness.steps
                                          if s.position == () and s.rule_index < len(problem.top.rules)),
                witnesses=(witness,), term=start,
                detail="cyclic chain (infinitely many root steps)" if cyclic
                else f"reduction with {k} root-top steps",
            )
        explored += 1
        if explored > fuel.max_states:
            return CheckOutcome(UNKNOWN, steps, term=start, detail=f"{explored - 1} states explored")
        succ = _relative_successors(problem, u)
        if succ and steps >= limit:
            truncated = True
            continue
        for v, root in succ:
            r = min(k, roots + 1) if root else roots
            state = (v, r)
            if any(best.get((v, r2), limit + 1) <= steps + 1 for r2 in range(r, k + 1)):
                continue
            best[state] = steps + 1
            parent[state] = ((u, roots), root)
            heapq.heappush(heap, (-r, v.size, steps + 1, next(counter), v, r))
    if truncated:
        return CheckOutcome(UNKNOWN, limit, term=start, detail=f"{explored} states explored")
    return CheckOutcome(CONFIRMED, limit, term=start,
                        detail=f"search space of {explored} states exhausted")


def check_dp_min(problem: RelativeProblem, fuel: Fuel = Fuel(max_term_size=3), m: int = 3,
                 terms: Optional[list] = None) -> CheckOutcome:
    """Relative termination with the minimality flag, by both characterizations.

    Route 1 searches (root-top ∪ base)-reductions through base-terminating
    terms for a cycle. Route 2 computes, for the given ``m``, the least ``n``
    such that every ``n``-step reduction meets a term admitting an ``m``-step
    base reduction. The routes must agree whenever both conclude.

    Route 1 only ever refutes; confirmation is the route 2 map ``t -> n`` for
    this ``m`` and is bounded by the term enumeration.
    """
    if m > fuel.max_reduction_length:
        raise ValueError("m must not exceed max_reduction_length")
    if terms is None:
        terms = _terms_or_enumeration(problem, problem.designated_term, fuel)
    base_fuel = Fuel(max_reduction_length=fuel.max_reduction_length, max_states=fuel.max_states)
    base_sn: dict = {}

    def base_status(u):
        res = base_sn.get(u)
        if res is None:
            res = base_sn[u] = check_sn_term(problem.base, u, base_fuel)
        return res

    def route1_expand(u):
        res = base_status(u)
        if res.confirmed:
            return True
        return False if res.refuted else None

    def m_short(u):
        res = base_status(u)
        return res.confirmed and res.bound < m

    def succ(u):
        return [v for v, _ in _relative_successors(problem, u)]

    bounds = []
    unresolved = None
    for t in terms:
        r1 = _longest(t, succ, fuel.max_reduction_length, route1_expand, fuel.max_states)
        if r1.cycle is not None:
            witness = _relative_path(problem, r1.cycle)
            r2 = _longest(t, succ, fuel.max_reduction_length, m_short, fuel.max_states)
            if all(m_short(u) for u in r1.cycle) and r2.cycle is None and not r2.truncated:
                raise RuntimeError(f"minimality criteria disagree on {show(t)}")
            return CheckOutcome(REFUTED, r1.max_depth, term=t, witnesses=(witness,),
                                detail="cycle through base-terminating terms")
        if not m_short(t):
            n = 0
        else:
            r2 = _longest(t, succ, fuel.max_reduction_length, m_short, fuel.max_states)
            if r2.cycle is not None and not r1.truncated:
                raise RuntimeError(f"minimality criteria disagree on {show(t)}")
            n = None if r2.cycle is not None or r2.truncated else r2.height + 1
        if n is None:
            if unresolved is None:
                unresolved = t
            continue
        bounds.append((t, n))
    if unresolved is not None:
        return CheckOutcome(UNKNOWN, fuel.max_reduction_length, term=unresolved,
                            term_bounds=tuple(bounds))
    return CheckOutcome(CONFIRMED, fuel.max_reduction_length, term_bounds=tuple(bounds),
                        transcript=_digest(terms),
                        detail=f"finite minimal chains from all {len(terms)} enumerated terms (m={m})")


def _relative_path(problem: RelativeProblem, terms: list) -> Reduction:
    hops = []
    for u, v in zip(terms, terms[1:]):
        root = v in root_successors(problem.top, u)
        hops.append((v, root))
    return _relative_reduction(problem, terms[0], hops)
