"""Relaxed timed Buchi automaton over evaluation states.

Every soft conjunct is monitored independently; its evaluation status is
one of

    unc  not yet decided (or currently holding, for invariants)
    vio  currently violated (invariant broken now, or deadline missed)
    sat  obligation met (bounded patterns; persists while the window that
         was opened by the last completion is still open)

The automaton's states are the reachable combinations of per-conjunct
statuses plus one absorbing sink for hard-constraint violations.  Reading
a symbol moves every conjunct deterministically given its clock region,
so each state has an enabled outgoing edge for every (symbol, region)
pair and self-loops exactly when nothing changes.  Edges are classified
by kind:

    1  progress: every change resolves an undecided conjunct
    2  recovery of an unbounded conjunct (vio -> unc) once the offending
       symbol is gone
    3  late completion of a bounded conjunct (vio -> sat, or vio -> unc
       when the completing symbol immediately re-triggers a response
       obligation), with the conjunct's clock constraint dropped
    4  self-loop

Continuous violation cost v_c counts bounded conjuncts currently in vio;
discrete violation cost v_d is 1 when any unbounded conjunct is in vio.
Both are infinite at the sink.

State identifiers enumerate the status product in reflected mixed-radix
order (first conjunct fastest, each digit sequence reversing direction on
alternate passes, status order unc < vio < sat), so consecutive ids differ
in a single conjunct; the sink is last.  This ordering is part of the
public contract: exported vectors such as v_c/v_d are indexed by it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator

from .formula import (
    Formula,
    FormulaError,
    Pattern,
    SubFormula,
    TemporalClass,
    classify,
    normalize_soft,
)

UNC = "unc"
VIO = "vio"
SAT = "sat"
_STATUS_ORDER = (UNC, VIO, SAT)

# Effect flags applied to a conjunct's runtime bookkeeping by a transition.
RESET = 1  # clock := 0 (activates the clock if it was off)
OFF = 2  # clock := inactive
DISCHARGE = 4  # hold-until obligation permanently discharged

MAX_SOFT_CONJUNCTS = 20
MAX_RELEVANT_ATOMS = 16


class ConstructionError(ValueError):
    """Raised when an automaton cannot be built from a formula."""


def evaluation_set(sub: SubFormula) -> tuple[str, ...]:
    """Statuses a conjunct ranges over, by temporal class."""
    match classify(sub):
        case TemporalClass.TEMPORALLY_BOUNDED:
            return (UNC, VIO, SAT)
        case TemporalClass.NON_BOUNDED_TYPE_I:
            return (UNC, SAT)
        case TemporalClass.NON_BOUNDED_TYPE_II:
            return (UNC, VIO)
    raise AssertionError


def distance_set(a: tuple[str, ...], b: tuple[str, ...]) -> frozenset[int]:
    """Indices of conjuncts whose evaluations differ between two states."""
    if len(a) != len(b):
        raise ValueError("evaluation tuples of different arity")
    return frozenset(i for i, (x, y) in enumerate(zip(a, b)) if x != y)


@dataclass(frozen=True)
class Case:
    """One deterministic transition case: symbol cube -> status + effects."""

    must: tuple[str, ...]
    must_not: tuple[str, ...]
    target: str
    effects: int = 0

    def matches(self, symbol: frozenset[str]) -> bool:
        return all(a in symbol for a in self.must) and not any(
            a in symbol for a in self.must_not
        )


class Monitor:
    """Per-conjunct status machine; subclasses fill in the case tables.

    A monitor may own one clock.  Its runtime bookkeeping is the pair
    (clock value or None when inactive, discharged flag); the clock region
    is evaluated at arrival time, after advancing by the transition
    duration and before applying effects.
    """

    uses_clock = False

    def __init__(self, sub: SubFormula, index: int):
        self.sub = sub
        self.index = index
        self.tclass = classify(sub)
        self.bounded = self.tclass is TemporalClass.TEMPORALLY_BOUNDED
        iv = sub.interval
        self.lower = iv.lower if iv else 0.0
        self.upper = iv.upper if iv else math.inf

    def statuses(self) -> tuple[str, ...]:
        return evaluation_set(self.sub)

    def initial_aux(self) -> tuple[float | None, bool]:
        return (0.0 if self.uses_clock and self.clock_starts_active else None, False)

    clock_starts_active = False

    def regions(self, status: str) -> tuple[str, ...]:
        raise NotImplementedError

    def cases(self, status: str, region: str) -> tuple[Case, ...]:
        raise NotImplementedError

    def region_of(self, status: str, clock: float | None, discharged: bool) -> str:
        raise NotImplementedError

    def guard_text(self, region: str) -> str | None:
        """Clock constraint selecting a region, or None when unconstrained."""
        if region == "lo":
            return f"x{self.index}<{_num(self.lower)}"
        if region == "in":
            if self.lower == 0:
                return f"x{self.index}<{_num(self.upper)}"
            return f"{_num(self.lower)}<=x{self.index}<{_num(self.upper)}"
        if region == "hi":
            return f"x{self.index}>={_num(self.upper)}"
        return None

    def _clock_region(self, clock: float) -> str:
        if clock < self.lower:
            return "lo"
        if clock < self.upper:
            return "in"
        return "hi"

    def _window_regions(self) -> tuple[str, ...]:
        return ("lo", "in", "hi") if self.lower > 0 else ("in", "hi")

    def step(
        self, status: str, aux: tuple[float | None, bool], dt: float, symbol: frozenset[str]
    ) -> tuple[str, tuple[float | None, bool]]:
        clock, discharged = aux
        if clock is not None:
            clock += dt
        region = self.region_of(status, clock, discharged)
        for case in self.cases(status, region):
            if case.matches(symbol):
                fx = case.effects
                if fx & RESET:
                    clock = 0.0
                if fx & OFF:
                    clock = None
                if fx & DISCHARGE:
                    discharged = True
                return case.target, (clock, discharged)
        raise AssertionError(f"no case for {self.sub.render()} {status}/{region}/{set(symbol)}")

    def targets(self, status: str, symbol: frozenset[str]) -> set[str]:
        """Statuses reachable from `status` reading `symbol` under some guard."""
        out: set[str] = set()
        for region in self.regions(status):
            for case in self.cases(status, region):
                if case.matches(symbol):
                    out.add(case.target)
                    break
        return out

    def abstract_regions(
        self, status: str, active: bool, discharged: bool
    ) -> tuple[str, ...]:
        """Regions consistent with the clock-active/discharged flags.

        Clock values stay existential, but an inactive clock cannot sit in a
        window region and vice versa; reachability over statuses alone would
        mix pending and idle futures."""
        return self.regions(status)

    def abstract_targets(
        self, status: str, active: bool, discharged: bool, symbol: frozenset[str]
    ) -> set[tuple[str, bool, bool]]:
        out: set[tuple[str, bool, bool]] = set()
        for region in self.abstract_regions(status, active, discharged):
            for case in self.cases(status, region):
                if case.matches(symbol):
                    nxt = active
                    if case.effects & RESET:
                        nxt = True
                    if case.effects & OFF:
                        nxt = False
                    out.add((case.target, nxt, discharged or bool(case.effects & DISCHARGE)))
                    break
        return out


class AlwaysNotMonitor(Monitor):
    def regions(self, status):
        return ("any",)

    def region_of(self, status, clock, discharged):
        return "any"

    def cases(self, status, region):
        p = self.sub.atoms[0]
        return (Case((p,), (), VIO), Case((), (p,), UNC))


class AlwaysMonitor(Monitor):
    def regions(self, status):
        return ("any",)

    def region_of(self, status, clock, discharged):
        return "any"

    def cases(self, status, region):
        p = self.sub.atoms[0]
        return (Case((p,), (), UNC), Case((), (p,), VIO))


class EventuallyMonitor(Monitor):
    def regions(self, status):
        return ("any",)

    def region_of(self, status, clock, discharged):
        return "any"

    def cases(self, status, region):
        p = self.sub.atoms[0]
        if status == SAT:
            return (Case((), (), SAT),)
        return (Case((p,), (), SAT), Case((), (p,), UNC))


class EventuallyWithinMonitor(Monitor):
    """One-shot bounded eventually; the clock runs from the start of the run."""

    uses_clock = True
    clock_starts_active = True

    def regions(self, status):
        if status == UNC:
            return self._window_regions()
        return ("any",)

    def region_of(self, status, clock, discharged):
        if status == UNC:
            return self._clock_region(clock)
        return "any"

    def cases(self, status, region):
        p = self.sub.atoms[0]
        if status == SAT:
            return (Case((), (), SAT),)
        if status == VIO:
            # Late completion: no clock constraint (kind-3 recovery).
            return (Case((p,), (), SAT, OFF), Case((), (p,), VIO))
        if region == "lo":
            return (Case((), (), UNC),)
        if region == "in":
            return (Case((p,), (), SAT, OFF), Case((), (p,), UNC))
        return (Case((), (), VIO, OFF),)  # hi: deadline missed, even reading p


class AlwaysEventuallyWithinMonitor(Monitor):
    """Recurrent bounded eventually.

    Each completion resets the clock and opens the next window; sat
    persists while the open window lasts and decays to vio when it
    expires without a completion.
    """

    uses_clock = True
    clock_starts_active = True

    def regions(self, status):
        if status == VIO:
            return ("any",)
        return self._window_regions()

    def region_of(self, status, clock, discharged):
        if status == VIO:
            return "any"
        return self._clock_region(clock)

    def cases(self, status, region):
        p = self.sub.atoms[0]
        if status == VIO:
            return (Case((p,), (), SAT, RESET), Case((), (p,), VIO))
        if region == "lo":
            return (Case((), (), status),)
        if region == "in":
            return (Case((p,), (), SAT, RESET), Case((), (p,), status))
        return (Case((), (), VIO),)


class RespondsWithinMonitor(Monitor):
    """Trigger/response: every trigger opens a deadline for the target.

    The clock is inactive while no obligation is pending; a trigger
    activates it, discharge turns it off again.  Pending obligations keep
    the oldest deadline (a new trigger inside the window does not reset).
    """

    uses_clock = True
    clock_starts_active = False

    def regions(self, status):
        if status == UNC:
            return ("off", *self._window_regions())
        return ("any",)

    def region_of(self, status, clock, discharged):
        if status == UNC:
            return "off" if clock is None else self._clock_region(clock)
        return "any"

    def abstract_regions(self, status, active, discharged):
        if status == UNC:
            return self._window_regions() if active else ("off",)
        return ("any",)

    def cases(self, status, region):
        trig, tgt = self.sub.atoms
        idle = (
            (
                Case((trig, tgt), (), SAT)
                if self.lower == 0
                else Case((trig, tgt), (), UNC, RESET)
            ),
            Case((trig,), (tgt,), UNC, RESET),
            Case((), (trig,), UNC if status == UNC else SAT),
        )
        if status == VIO:
            if self.lower == 0:
                # the target also serves a trigger read at the same instant
                return (Case((tgt,), (), SAT), Case((), (tgt,), VIO))
            return (
                Case((tgt, trig), (), UNC, RESET),
                Case((tgt,), (trig,), SAT),
                Case((), (tgt,), VIO),
            )
        if status == SAT:
            return idle
        if region == "off":
            return idle
        if region == "lo":
            return (Case((), (), UNC),)
        if region == "in":
            if self.lower == 0:
                return (Case((tgt,), (), SAT, OFF), Case((), (tgt,), UNC))
            return (
                Case((tgt, trig), (), UNC, RESET),
                Case((tgt,), (trig,), SAT, OFF),
                Case((), (tgt,), UNC),
            )
        return (Case((), (), VIO, OFF),)


class HoldUntilMonitor(Monitor):
    """Left operand must hold at every step strictly before the first right."""

    # unc covers both armed and discharged; the discharged flag decides.
    def regions(self, status):
        return ("armed", "done") if status == UNC else ("armed",)

    def abstract_regions(self, status, active, discharged):
        return ("done",) if discharged else ("armed",)

    def region_of(self, status, clock, discharged):
        return "done" if discharged else "armed"

    def cases(self, status, region):
        left, right = self.sub.atoms
        if region == "done":
            return (Case((), (), UNC),)
        return (
            Case((right,), (), UNC, DISCHARGE),
            Case((left,), (right,), UNC),
            Case((), (left, right), VIO),
        )


_MONITORS = {
    Pattern.ALWAYS_NOT: AlwaysNotMonitor,
    Pattern.ALWAYS: AlwaysMonitor,
    Pattern.EVENTUALLY: EventuallyMonitor,
    Pattern.EVENTUALLY_WITHIN: EventuallyWithinMonitor,
    Pattern.ALWAYS_EVENTUALLY_WITHIN: AlwaysEventuallyWithinMonitor,
    Pattern.ALWAYS_IMPLIES_EVENTUALLY_WITHIN: RespondsWithinMonitor,
    Pattern.HOLD_UNTIL: HoldUntilMonitor,
}


@dataclass(frozen=True)
class EvalState:
    id: int
    statuses: tuple[str, ...] | None  # None marks the sink
    v_c: float
    v_d: float
    initial: bool
    accepting: bool
    clock_constraints: tuple[str, ...]
    raw_index: int

    @property
    def sink(self) -> bool:
        return self.statuses is None


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    must: tuple[str, ...]
    must_not: tuple[str, ...]
    guard: str | None
    guard_regions: tuple[tuple[int, str], ...]  # (conjunct index, region)
    resets: tuple[int, ...]
    kind: int


def _snake_states(radices: list[int]) -> Iterator[tuple[int, ...]]:
    """Reflected mixed-radix enumeration: digit i reverses direction each
    time the higher digits advance, so successive tuples differ in one digit."""
    total = math.prod(radices) if radices else 1
    strides = []
    s = 1
    for r in radices:
        strides.append(s)
        s *= r
    for j in range(total):
        digits = []
        for r, stride in zip(radices, strides):
            raw = (j // stride) % r
            if (j // (stride * r)) % 2:
                raw = r - 1 - raw
            digits.append(raw)
        yield tuple(digits)


class RelaxedTBA:
    """Relaxed timed Buchi automaton for one task formula."""

    def __init__(self, formula: Formula, prune: bool = True):
        self.formula = formula
        self.alphabet = frozenset(formula.alphabet)
        self.hard_atoms = formula.hard_atoms
        conjuncts = normalize_soft(formula.soft)
        if len(conjuncts) > MAX_SOFT_CONJUNCTS:
            raise ConstructionError(
                f"too many soft conjuncts after until splitting: {len(conjuncts)}"
            )
        self.conjuncts = conjuncts
        self.monitors: tuple[Monitor, ...] = tuple(
            _MONITORS[sub.pattern](sub, i) for i, sub in enumerate(conjuncts)
        )
        self.clocks = tuple(m.index for m in self.monitors if m.uses_clock)
        relevant = set(self.hard_atoms)
        for sub in conjuncts:
            relevant.update(sub.atoms)
        if len(relevant) > MAX_RELEVANT_ATOMS:
            raise ConstructionError(f"too many distinct atoms: {len(relevant)}")
        self.relevant_atoms = tuple(sorted(relevant))

        per_set = [m.statuses() for m in self.monitors]
        self.raw_state_count = math.prod(len(s) for s in per_set) + 1
        raw: list[tuple[str, ...]] = [
            tuple(per_set[i][d] for i, d in enumerate(digits))
            for digits in _snake_states([len(s) for s in per_set])
        ]
        keep = list(range(len(raw)))
        if prune:
            keep = self._reachable(raw)
            accepting_vec = self._accepting_vector()
            if accepting_vec not in {raw[i] for i in keep}:
                raise ConstructionError(
                    "accepting evaluation unreachable; task unsatisfiable even relaxed"
                )
        self.pruned = prune

        self.states: list[EvalState] = []
        self._id_of: dict[tuple[str, ...], int] = {}
        accepting_vec = self._accepting_vector()
        for new_id, raw_idx in enumerate(keep):
            statuses = raw[raw_idx]
            self._id_of[statuses] = new_id
            self.states.append(
                EvalState(
                    id=new_id,
                    statuses=statuses,
                    v_c=float(
                        sum(
                            1
                            for m, st in zip(self.monitors, statuses)
                            if m.bounded and st == VIO
                        )
                    ),
                    v_d=1.0
                    if any(
                        not m.bounded and st == VIO
                        for m, st in zip(self.monitors, statuses)
                    )
                    else 0.0,
                    initial=raw_idx == 0,
                    accepting=statuses == accepting_vec,
                    clock_constraints=self._state_clock_constraints(statuses),
                    raw_index=raw_idx,
                )
            )
        self.sink_id = len(self.states)
        self.states.append(
            EvalState(
                id=self.sink_id,
                statuses=None,
                v_c=math.inf,
                v_d=math.inf,
                initial=False,
                accepting=False,
                clock_constraints=(),
                raw_index=self.raw_state_count - 1,
            )
        )
        self.initial_id = 0
        self.accepting_id = self._id_of[accepting_vec]
        self.v_c = [s.v_c for s in self.states]
        self.v_d = [s.v_d for s in self.states]
        self.edges: list[Edge] = self._build_edges()
        self._succ_cache: dict[tuple[int, frozenset[str]], tuple[int, ...]] = {}

    @property
    def state_count(self) -> int:
        return len(self.states)

    # -- construction ------------------------------------------------------

    def _accepting_vector(self) -> tuple[str, ...]:
        return tuple(
            UNC if m.tclass is TemporalClass.NON_BOUNDED_TYPE_II else SAT
            for m in self.monitors
        )

    def _state_clock_constraints(self, statuses: tuple[str, ...]) -> tuple[str, ...]:
        out = []
        for m, st in zip(self.monitors, statuses):
            if not m.uses_clock:
                continue
            if st == SAT:
                out.append(m.guard_text("in"))
            elif st == VIO:
                out.append(m.guard_text("hi"))
        return tuple(c for c in out if c)

    def _symbols(self) -> list[frozenset[str]]:
        atoms = self.relevant_atoms
        return [
            frozenset(a for a, on in zip(atoms, bits) if on)
            for bits in product((False, True), repeat=len(atoms))
        ]

    def _reachable(self, raw: list[tuple[str, ...]]) -> list[int]:
        index = {statuses: i for i, statuses in enumerate(raw)}
        symbols = [s for s in self._symbols() if not (s & self.hard_atoms)]
        init = (
            raw[0],
            tuple(m.uses_clock and m.clock_starts_active for m in self.monitors),
            tuple(False for _ in self.monitors),
        )
        nodes = {init}
        reached = {0}
        frontier = [init]
        while frontier:
            statuses, actives, discharges = frontier.pop()
            for sym in symbols:
                per = [
                    m.abstract_targets(st, a, d, sym)
                    for m, st, a, d in zip(self.monitors, statuses, actives, discharges)
                ]
                for combo in product(*per):
                    nxt = (
                        tuple(c[0] for c in combo),
                        tuple(c[1] for c in combo),
                        tuple(c[2] for c in combo),
                    )
                    if nxt not in nodes:
                        nodes.add(nxt)
                        reached.add(index[nxt[0]])
                        frontier.append(nxt)
        return sorted(reached)

    def _build_edges(self) -> list[Edge]:
        edges: list[Edge] = []
        hard = tuple(sorted(self.hard_atoms))
        for state in self.states:
            if state.sink:
                edges.append(Edge(state.id, state.id, (), (), None, (), (), 4))
                continue
            for atom in hard:
                edges.append(Edge(state.id, self.sink_id, (atom,), (), None, (), (), 4))
            statuses = state.statuses
            per_regions = [m.regions(st) for m, st in zip(self.monitors, statuses)]
            seen: set[tuple] = set()
            for combo in product(*per_regions):
                per_cases = [
                    m.cases(st, r)
                    for m, st, r in zip(self.monitors, statuses, combo)
                ]
                for joint in product(*per_cases):
                    must: set[str] = set()
                    must_not: set[str] = set(hard)
                    target = []
                    resets = []
                    ok = True
                    for m, case in zip(self.monitors, joint):
                        must.update(case.must)
                        must_not.update(case.must_not)
                        target.append(case.target)
                        if case.effects & RESET:
                            resets.append(m.index)
                    if must & must_not:
                        continue  # contradictory cube
                    dst = self._id_of.get(tuple(target))
                    if dst is None:
                        continue  # target pruned as unreachable
                    regions = tuple(
                        (m.index, r)
                        for m, st, r in zip(self.monitors, statuses, combo)
                        if len(m.regions(st)) > 1 and m.guard_text(r) is not None
                    )
                    key = (dst, tuple(sorted(must)), tuple(sorted(must_not)), regions, tuple(resets))
                    if key in seen:
                        continue
                    seen.add(key)
                    guard = " & ".join(
                        self.monitors[i].guard_text(r) for i, r in regions
                    ) or None
                    edges.append(
                        Edge(
                            state.id,
                            dst,
                            tuple(sorted(must)),
                            tuple(sorted(must_not)),
                            guard,
                            regions,
                            tuple(resets),
                            self._edge_kind(statuses, tuple(target)),
                        )
                    )
        return edges

    def _edge_kind(self, src: tuple[str, ...], dst: tuple[str, ...]) -> int:
        late = recover = False
        for m, a, b in zip(self.monitors, src, dst):
            if a == VIO and b != VIO and m.bounded:
                # late completion; for a response conjunct the closing target
                # may carry a fresh trigger, re-arming straight to unc
                late = True
            if a == VIO and b == UNC and not m.bounded:
                recover = True
        if late:
            return 3
        if recover:
            return 2
        return 4 if src == dst else 1

    # -- runtime -------------------------------------------------------------

    def initial_runtime(self) -> tuple[tuple[str, ...], tuple]:
        statuses = self.states[self.initial_id].statuses
        aux = tuple(m.initial_aux() for m in self.monitors)
        return statuses, aux

    def step(
        self,
        statuses: tuple[str, ...] | None,
        aux: tuple,
        dt: float,
        symbol: frozenset[str],
    ) -> tuple[tuple[str, ...] | None, tuple]:
        """Deterministic re-evaluation on reading `symbol` after `dt` time."""
        if statuses is None or symbol & self.hard_atoms:
            # Sink is absorbing; clocks no longer matter there.
            return None, aux
        out_status = []
        out_aux = []
        for m, st, a in zip(self.monitors, statuses, aux):
            st2, a2 = m.step(st, a, dt, symbol)
            out_status.append(st2)
            out_aux.append(a2)
        return tuple(out_status), tuple(out_aux)

    def state_id(self, statuses: tuple[str, ...] | None) -> int:
        if statuses is None:
            return self.sink_id
        return self._id_of[statuses]

    def successors(self, state_id: int, symbol: frozenset[str]) -> tuple[int, ...]:
        """Target states reachable by reading `symbol` under some guard."""
        key = (state_id, symbol)
        cached = self._succ_cache.get(key)
        if cached is not None:
            return cached
        if state_id == self.sink_id or symbol & self.hard_atoms:
            out: tuple[int, ...] = (self.sink_id,)
        else:
            statuses = self.states[state_id].statuses
            per = [m.targets(st, symbol) for m, st in zip(self.monitors, statuses)]
            ids = sorted(
                {
                    self._id_of[combo]
                    for combo in product(*per)
                    if combo in self._id_of
                }
            )
            out = tuple(ids)
        self._succ_cache[key] = out
        return out

    # -- export ---------------------------------------------------------------

    def describe(self) -> dict:
        return {
            "schema_version": 1,
            "alphabet": sorted(self.alphabet),
            "hard": [s.render() for s in self.formula.hard],
            "soft": [s.render() for s in self.conjuncts],
            "clocks": [
                {"id": f"x{m.index}", "conjunct": m.index, "interval": [m.lower, _json_num(m.upper)]}
                for m in self.monitors
                if m.uses_clock
            ],
            "raw_state_count": self.raw_state_count,
            "state_count": len(self.states),
            "initial": self.initial_id,
            "accepting": self.accepting_id,
            "sink": self.sink_id,
            "v_c": [_json_num(v) for v in self.v_c],
            "v_d": [_json_num(v) for v in self.v_d],
            "states": [
                {
                    "id": s.id,
                    "statuses": list(s.statuses) if s.statuses is not None else None,
                    "v_c": _json_num(s.v_c),
                    "v_d": _json_num(s.v_d),
                    "initial": s.initial,
                    "accepting": s.accepting,
                    "sink": s.sink,
                    "clock_constraints": list(s.clock_constraints),
                    "raw_index": s.raw_index,
                }
                for s in self.states
            ],
            "edges": [
                {
                    "src": e.src,
                    "dst": e.dst,
                    "must": list(e.must),
                    "must_not": list(e.must_not),
                    "guard": e.guard,
                    "resets": [f"x{i}" for i in e.resets],
                    "kind": e.kind,
                }
                for e in sorted(
                    self.edges, key=lambda e: (e.src, e.dst, e.guard or "", e.must, e.must_not)
                )
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.describe(), indent=2)

    def to_dot(self) -> str:
        return "\n".join(self._dot_lines()) + "\n"

    def _dot_lines(self) -> Iterator[str]:
        yield "digraph relaxed_tba {"
        yield "  rankdir=LR;"
        yield '  init [shape=point, label=""];'
        for s in self.states:
            if s.sink:
                label = f"s{s.id} sink"
                shape = "box"
            else:
                label = f"s{s.id} ({','.join(s.statuses)})\\nvc={_num(s.v_c)} vd={_num(s.v_d)}"
                if s.clock_constraints:
                    label += "\\n" + " & ".join(s.clock_constraints)
                shape = "doublecircle" if s.accepting else "circle"
            yield f'  {s.id} [shape={shape}, label="{label}"];'
        yield f"  init -> {self.initial_id};"
        for e in sorted(self.edges, key=lambda e: (e.src, e.dst, e.guard or "", e.must)):
            sym = " ".join([*e.must, *(f"!{a}" for a in e.must_not)]) or "*"
            parts = [sym]
            if e.guard:
                parts.append(e.guard)
            if e.resets:
                parts.append(" ".join(f"x{i}:=0" for i in e.resets))
            yield f'  {e.src} -> {e.dst} [label="{" | ".join(parts)}"];'
        yield "}"


def build(formula: Formula, prune: bool = True) -> RelaxedTBA:
    """Construct the relaxed automaton for a task formula."""
    if not isinstance(formula, Formula):
        raise ConstructionError("expected a parsed Formula")
    return RelaxedTBA(formula, prune=prune)


def _num(x: float) -> str:
    if math.isinf(x):
        return "inf"
    if x == int(x):
        return str(int(x))
    return str(x)


def _json_num(x: float):
    if math.isinf(x):
        return "inf"
    return int(x) if x == int(x) else x
