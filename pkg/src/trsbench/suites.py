"""The acceptance suites as deterministic, seedable batch runs.

Each suite returns a :class:`SuiteReport` whose ``text()`` is a pure function
of the seed and case count, so two runs can be compared byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .checkers import (
    CONFIRMED,
    REFUTED,
    UNKNOWN,
    Fuel,
    chain_search,
    check_dp_min,
    check_sn_term,
    check_wcr,
    combined_trs,
    joinable,
    _Reach,
)
from .encodings import (
    MARK,
    OK,
    PICKN,
    RUN,
    TAPE_END,
    TOP,
    build_confluence_trs,
    build_dp_gadget,
    build_wcr_trs,
    dependency_pairs,
    encode_config,
    interpret,
    pickn_trs,
    tm_to_trs,
    tmtrs_system,
)
from .machines import (
    NUMERALS,
    empty_machine,
    loop_machines,
    random_config,
    random_machine,
    random_trs,
    rel_succ_machine,
)
from .terms import App, const, is_ground, iter_subterms, show, tower
from .trs import classify, critical_pairs, enumerate_ground_terms, replay, successors
from .turing import Configuration, Halted, tm_run, tm_step


@dataclass
class SuiteReport:
    name: str
    seed: int
    cases: int
    passed: bool
    summary: str
    lines: list = field(default_factory=list)

    def text(self) -> str:
        head = f"[{'PASS' if self.passed else 'FAIL'}] {self.name} seed={self.seed} cases={self.cases}: {self.summary}"
        return "\n".join([head] + ["  " + ln for ln in self.lines]) + "\n"

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "seed": self.seed,
            "cases": self.cases,
            "passed": self.passed,
            "summary": self.summary,
            "details": list(self.lines),
        }


def _tm_corpus(seed: int, cases: int) -> list:
    """``(machine, configuration)`` pairs shared by the simulation suites."""
    rng = random.Random(seed)
    out = []
    for _ in range(cases):
        m = random_machine(rng)
        out.append((m, random_config(rng, m)))
    return out


def simulation(seed: int = 0, cases: int = 200, steps: int = 50) -> SuiteReport:
    mismatches = []
    compared = 0
    for k, (m, c) in enumerate(_tm_corpus(seed, cases)):
        trs = tm_to_trs(m)
        t = encode_config(m, c)
        for i in range(steps):
            nxt = tm_step(m, c)
            succ = successors(trs, t)
            compared += 1
            if nxt is None:
                if succ:
                    mismatches.append(f"machine {k} step {i}: machine halted, term {show(t)} has a reduct")
                break
            if len(succ) != 1 or interpret(m, succ[0]) != nxt:
                mismatches.append(f"machine {k} step {i}: {c} -> {nxt} but term reducts {[show(s) for s in succ]}")
                break
            c, t = nxt, succ[0]
    return SuiteReport(
        "simulation", seed, cases, not mismatches,
        f"{compared} lock-step comparisons, {len(mismatches)} mismatches", mismatches,
    )


def halting(seed: int = 0, cases: int = 200, fuel: int = 100) -> SuiteReport:
    bad, halted, running = [], 0, 0
    corpus = [(f"machine {k}", m, c) for k, (m, c) in enumerate(_tm_corpus(seed, cases))]
    corpus += [(f"loop {k}", m, c) for k, (m, c) in enumerate(loop_machines())]
    for name, m, c in corpus:
        res = tm_run(m, c, fuel)
        out = check_sn_term(tm_to_trs(m), encode_config(m, c), Fuel(max_reduction_length=fuel))
        if isinstance(res, Halted):
            halted += 1
            if out.verdict is not CONFIRMED or out.bound != res.steps:
                bad.append(f"{name}: halts after {res.steps} steps, check_sn gave {out.verdict} bound {out.bound}")
        else:
            running += 1
            if out.verdict is CONFIRMED:
                bad.append(f"{name}: runs past {fuel} steps but check_sn gave Confirmed bound {out.bound}")
    return SuiteReport(
        "halting", seed, cases, not bad,
        f"{halted} halting, {running} running at fuel {fuel}, {len(bad)} disagreements", bad,
    )


def classifier(seed: int = 0, cases: int = 200) -> SuiteReport:
    bad = []
    for k, (m, _) in enumerate(_tm_corpus(seed, cases)):
        cls = classify(tm_to_trs(m))
        if not (cls.orthogonal and cls.non_erasing):
            bad.append(f"machine {k}: {cls}")
    return SuiteReport("classifier", seed, cases, not bad,
                       f"{cases - len(bad)}/{cases} orthogonal and non-erasing", bad)


def _numeral(n: int) -> App:
    return tower(["S"] * n + ["0"], const(TAPE_END))


def _is_numeral(t) -> bool:
    while type(t) is App and t.head == "S" and len(t.args) == 1:
        t = t.args[0]
    return t == App("0", (const(TAPE_END),))


def pickn(seed: int = 0, cases: int = 20, shape_depth: int = 25) -> SuiteReport:
    trs = pickn_trs()
    reach = _Reach(trs, const(PICKN))
    lines = []
    while reach.depth < max(2 * cases + 1, shape_depth) and not reach.exhausted:
        reach.grow()
        if reach.depth == shape_depth:
            shape_bad = [
                show(s) for u in reach.order for _, s in iter_subterms(u)
                if type(s) is App and s.head == OK and not _is_numeral(s.args[0])
            ]
            lines += [f"ok-term of wrong shape: {s}" for s in shape_bad]
            lines.append(f"depth {shape_depth}: {len(reach.order)} reachable terms checked for ok-shape")
    missing = [n for n in range(cases + 1) if App(OK, (_numeral(n),)) not in reach.parent]
    lines += [f"ok(S^{n}(0(t))) not reached" for n in missing]
    ok = not missing and not any(ln.startswith("ok-term") for ln in lines)
    return SuiteReport("pickn", seed, cases, ok,
                       f"ok(S^n(0(t))) reached for n <= {cases}: {not missing}", lines)


def _matches_halting(m, c, fuel) -> bool:
    return isinstance(tm_run(m, c, fuel), Halted)


def wcr(seed: int = 0, cases: int = 50, fuel: int = 50) -> SuiteReport:
    rng = random.Random(seed)
    bad, lines, halted = [], [], 0
    boundary = 0
    for k in range(cases):
        m = random_machine(rng)
        system = build_wcr_trs(m)
        trs = system.trs
        n_base = len(tmtrs_system(m).trs.rules)
        pairs = [cp for cp in critical_pairs(trs) if min(cp.rule_pair) >= n_base]
        unordered = {frozenset((cp.left, cp.right)) for cp in pairs}
        expected = frozenset((const(TOP), App(m.initial, (const(TAPE_END), const(TAPE_END)))))
        if unordered != {expected}:
            bad.append(f"machine {k}: gadget critical pairs {sorted(str(cp) for cp in pairs)}")
        verdict, _ = joinable(trs, const(TOP), App(m.initial, (const(TAPE_END), const(TAPE_END))), fuel)
        res = tm_run(m, Configuration(m.initial), fuel)
        halts = isinstance(res, Halted)
        halted += halts
        if halts and res.steps == fuel:
            boundary += 1
        if (verdict is CONFIRMED) != halts:
            bad.append(f"machine {k}: join {verdict}, machine halts within {fuel}: {halts}")
    lines = bad + [f"{boundary} machines halt at exactly {fuel} steps"]
    return SuiteReport("wcr", seed, cases, not bad,
                       f"{halted}/{cases} halt on the blank tape, {len(bad)} disagreements", lines)


def confluence(seed: int = 0, cases: int = 20, max_n: int = 10, fuel: int = 50) -> SuiteReport:
    rng = random.Random(seed)
    bad = []
    halted = 0
    end, top = const(TAPE_END), const(TOP)
    for k in range(cases):
        m = random_machine(rng, alphabet=NUMERALS, succ="S", zero="0")
        trs = build_confluence_trs(m).trs
        for n in range(max_n + 1):
            start = App(RUN, (end, tower(["S"] * n, end)))
            q_side = App(m.initial, (end, tower(["S"] * n, end)))
            if q_side not in successors(trs, start):
                bad.append(f"machine {k} n={n}: {show(start)} does not reach {show(q_side)}")
            d = _run_only_distance(trs, start, top, n + 2)
            if d != n + 1:
                bad.append(f"machine {k} n={n}: shuttle path to T has length {d}, expected {n + 1}")
            verdict, _ = joinable(trs, top, q_side, fuel)
            halts = _matches_halting(m, Configuration.make(m.initial, (), ("S",) * n, m.blank), fuel)
            halted += halts
            if (verdict is CONFIRMED) != halts:
                bad.append(f"machine {k} n={n}: peak join {verdict}, halts within {fuel}: {halts}")
    total = cases * (max_n + 1)
    return SuiteReport("confluence", seed, cases, not bad,
                       f"{total} peaks, {halted} over halting inputs, {len(bad)} disagreements", bad)


def _run_only_distance(trs, start, goal, limit):
    """Shortest path to ``goal`` through run-rooted terms only."""
    seen = {start}
    frontier = [start]
    for d in range(1, limit + 1):
        nxt = []
        for u in frontier:
            for v in successors(trs, u):
                if v == goal:
                    return d
                if v.head == RUN and v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return None


def dp_chain(seed: int = 0, cases: int = 1, fuel: int = 200, states: int = 500_000) -> SuiteReport:
    lines = []
    rel = build_dp_gadget(rel_succ_machine())
    found = chain_search(rel, rel.designated_term, 3, Fuel(max_reduction_length=fuel, max_states=states))
    combined = combined_trs(rel)
    replays = bool(found.witnesses) and all(replay(combined, s) for s in found.witnesses[0].steps)
    first = found.verdict is REFUTED and replays
    lines.append(f"REL_SUCC, >= 3 root steps: {found.verdict} ({found.detail}), "
                 f"witness length {len(found.witnesses[0]) if found.witnesses else '-'}, replays: {replays}")
    empty = build_dp_gadget(empty_machine())
    none = chain_search(empty, empty.designated_term, 2, Fuel(max_reduction_length=fuel, max_states=states))
    second = none.verdict is CONFIRMED
    lines.append(f"empty delta, >= 2 root steps: {none.verdict} ({none.detail})")
    if none.witnesses:
        lines += ["  " + str(s) for s in none.witnesses[0].steps]
    return SuiteReport("dp-chain", seed, cases, first and second,
                       f"REL_SUCC chain found: {first}; empty-delta search chain-free: {second}", lines)


def critical_pair_lemma(seed: int = 0, cases: int = 300, max_size: int = 5, join: int = 10,
                        states: int = 2000) -> SuiteReport:
    rng = random.Random(seed)
    bad, tally = [], {}
    for k in range(cases):
        trs = random_trs(rng)
        cp = check_wcr(trs, Fuel(max_join_length=join, max_states=states))
        gr = check_wcr(trs, Fuel(max_join_length=join, max_term_size=max_size, max_states=states),
                       ground_only=True)
        key = f"{cp.verdict}/{gr.verdict}"
        tally[key] = tally.get(key, 0) + 1
        contradiction = cp.verdict is CONFIRMED and gr.verdict is REFUTED
        if cp.verdict is REFUTED and gr.verdict is CONFIRMED:
            peak = cp.term
            # only a ground peak within the enumeration bound is comparable
            contradiction = peak.size <= max_size and is_ground(peak)
        if contradiction:
            bad.append(f"trs {k}: critical pairs {cp.verdict}, ground peaks {gr.verdict}: {'; '.join(map(str, trs.rules))}")
    lines = [f"{key}: {tally[key]}" for key in sorted(tally)] + bad
    return SuiteReport("critical-pairs", seed, cases, not bad,
                       f"{len(bad)} contradictions among {cases} systems", lines)


def minimality(seed: int = 0, cases: int = 50, fuel: int = 50, max_size: int = 4,
               m: int = 50, max_attempts: int = 5000, screen_states: int = 500) -> SuiteReport:
    rng = random.Random(seed)
    bad, accepted, resolved, attempts = [], 0, 0, 0
    tally = {}
    while accepted < cases and attempts < max_attempts:
        attempts += 1
        trs = random_trs(rng)
        screen = Fuel(max_reduction_length=fuel, max_states=screen_states)
        outs = []
        for t in enumerate_ground_terms(trs.signature, max_size):
            outs.append(check_sn_term(trs, t, screen))
            if outs[-1].unknown:
                break
        if outs and outs[-1].unknown:
            continue
        accepted += 1
        sn = REFUTED if any(o.refuted for o in outs) else CONFIRMED
        problem = dependency_pairs(trs)
        starts = [t for t in enumerate_ground_terms(problem.signature, max_size) if t.head.endswith(MARK)]
        dp = check_dp_min(problem, Fuel(max_reduction_length=fuel), m, terms=starts)
        key = f"{sn}/{dp.verdict}"
        tally[key] = tally.get(key, 0) + 1
        if dp.verdict is UNKNOWN:
            continue
        resolved += 1
        if dp.verdict is not sn:
            bad.append(f"trs {accepted - 1}: SN {sn}, dp_min {dp.verdict}: {'; '.join(map(str, trs.rules))}")
    lines = [f"{accepted} systems accepted after {attempts} draws"]
    lines += [f"{key}: {tally[key]}" for key in sorted(tally)] + bad
    ok = not bad and accepted == cases
    return SuiteReport("minimality", seed, cases, ok,
                       f"{resolved} resolved, {len(bad)} disagreements", lines)


SUITES = {
    "simulation": simulation,
    "halting": halting,
    "classifier": classifier,
    "pickn": pickn,
    "wcr": wcr,
    "confluence": confluence,
    "dp-chain": dp_chain,
    "critical-pairs": critical_pair_lemma,
    "minimality": minimality,
}


def determinism(seed: int = 0, cases: int = 0, suites=None) -> SuiteReport:
    """Run every suite twice with the same seed and compare the reports byte for byte."""
    lines = []
    for name in suites or SUITES:
        a = SUITES[name](seed).text()
        b = SUITES[name](seed).text()
        lines.append(f"{name}: {'identical' if a == b else 'DIFFERENT'}")
    ok = all(ln.endswith("identical") for ln in lines)
    return SuiteReport("determinism", seed, len(lines), ok,
                       f"{sum(ln.endswith('identical') for ln in lines)}/{len(lines)} suites identical", lines)


SUITES["determinism"] = determinism


def run_suite(name: str, seed: int = 0, cases: int = None) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    fn = SUITES[name]
    return fn(seed) if cases is None else fn(seed, cases)
