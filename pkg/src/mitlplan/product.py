"""Product of the grid workspace with a relaxed task automaton.

A product state pairs a cell with an automaton state and is encoded as
``cell * S + tba_id`` where ``S`` is the automaton state count.  The
transition relation is *structural*: it is derived from the static soft
labels only, so discovering or clearing an obstacle never adds or removes
a transition.  Obstacle knowledge enters through :meth:`blocked`, which
the energy layer turns into infinite transition costs and the planner
into pruned moves.

Automaton moves read the label of the arrival cell; the label of the
start cell is never consumed, which is why construction rejects a start
cell that already violates a hard constraint.
"""

from __future__ import annotations

import json
import math

from .automaton import RelaxedTBA
from .wts import GridWTS


class ProductError(ValueError):
    pass


class ProductAutomaton:
    def __init__(self, wts: GridWTS, tba: RelaxedTBA):
        if wts.alphabet:
            missing = set(tba.relevant_atoms) - set(wts.alphabet)
            if missing:
                raise ProductError(
                    f"automaton atoms {sorted(missing)} missing from workspace alphabet"
                )
        self.wts = wts
        self.tba = tba
        self.S = tba.state_count
        self.hard_atoms = tba.hard_atoms
        if wts.label(wts.q0) & self.hard_atoms:
            raise ProductError(
                f"start cell {wts.q0} carries a hard-forbidden label; no run can begin"
            )
        self._relevant = frozenset(tba.relevant_atoms)
        self._soft_syms: list[frozenset[str]] = []
        self._full_syms: list[frozenset[str]] = []
        self._sym_version = -1
        self._soft_version = 0
        self._rev_cache: tuple[int, list[list[int]]] | None = None
        self._refresh_symbols()

    # -- encoding -------------------------------------------------------------

    @property
    def state_count(self) -> int:
        return self.wts.state_count * self.S

    @property
    def initial(self) -> int:
        return self.encode(self.wts.q0, self.tba.initial_id)

    def encode(self, cell: int, tba_id: int) -> int:
        return cell * self.S + tba_id

    def decode(self, pid: int) -> tuple[int, int]:
        return divmod(pid, self.S)

    def accepting(self) -> list[int]:
        acc = self.tba.accepting_id
        return [self.encode(c, acc) for c in range(self.wts.state_count)]

    def is_accepting(self, pid: int) -> bool:
        return pid % self.S == self.tba.accepting_id

    # -- labels ---------------------------------------------------------------

    def _refresh_symbols(self) -> None:
        if self._sym_version == self.wts.label_version:
            return
        rel = self._relevant
        hard = self.hard_atoms
        self._full_syms = [lab & rel for lab in self.wts.labels]
        soft = [sym - hard for sym in self._full_syms]
        if soft != self._soft_syms:
            self._soft_syms = soft
            self._soft_version += 1
        self._sym_version = self.wts.label_version

    def soft_symbol(self, cell: int) -> frozenset[str]:
        """Arrival symbol with hard atoms masked out (structural view)."""
        self._refresh_symbols()
        return self._soft_syms[cell]

    def full_symbol(self, cell: int) -> frozenset[str]:
        """Arrival symbol as currently known, hard atoms included."""
        self._refresh_symbols()
        return self._full_syms[cell]

    def blocked(self, cell: int) -> bool:
        self._refresh_symbols()
        return bool(self._full_syms[cell] & self.hard_atoms)

    # -- transitions ------------------------------------------------------------

    def successors(self, pid: int) -> list[int]:
        """Structural successors (obstacle knowledge ignored)."""
        cell, s = divmod(pid, self.S)
        out = []
        for nb in self.wts.neighbors(cell):
            base = nb * self.S
            for t in self.tba.successors(s, self.soft_symbol(nb)):
                out.append(base + t)
        return out

    def transition_count(self) -> int:
        return sum(len(self.successors(p)) for p in range(self.state_count))

    def reverse_adjacency(self) -> list[list[int]]:
        """Predecessor lists over the structural transitions, cached until a
        soft label changes (obstacle toggles never invalidate it)."""
        self._refresh_symbols()
        if self._rev_cache is not None and self._rev_cache[0] == self._soft_version:
            return self._rev_cache[1]
        rev: list[list[int]] = [[] for _ in range(self.state_count)]
        for p in range(self.state_count):
            for q in self.successors(p):
                rev[q].append(p)
        self._rev_cache = (self._soft_version, rev)
        return rev

    # -- weights ----------------------------------------------------------------

    def violation_weight(self, pid: int, alpha: float) -> float:
        """Blended violation cost of entering `pid` (Type-II vs bounded mix)."""
        if not 0 <= alpha <= 1:
            raise ProductError(f"alpha must lie in [0,1], got {alpha}")
        s = pid % self.S
        if s == self.tba.sink_id:
            return math.inf
        # 0*inf is nan, so the sink case must exit before this arithmetic
        return (1 - alpha) * self.tba.v_c[s] + alpha * self.tba.v_d[s]

    def path_weight(self, pids, alpha: float) -> float:
        """Violation-weighted cost of a path; each step is charged for its target."""
        total = 0.0
        for pid in pids[1:]:
            total += self.wts.weight * self.violation_weight(pid, alpha)
        return total

    def run_violation_costs(self, tba_ids, times) -> tuple[float, float]:
        """Time-weighted continuous and discrete violation sums of an executed run."""
        if len(tba_ids) != len(times):
            raise ProductError("tba_ids and times differ in length")
        cont = disc = 0.0
        for k in range(len(tba_ids) - 1):
            dt = times[k + 1] - times[k]
            s = tba_ids[k + 1]
            cont += self.tba.v_c[s] * dt
            disc += self.tba.v_d[s] * dt
        return cont, disc

    # -- export -----------------------------------------------------------------

    def stats(self) -> dict:
        return {
            "schema_version": 1,
            "cells": self.wts.state_count,
            "tba_states": self.S,
            "states": self.state_count,
            "transitions": self.transition_count(),
            "accepting": self.wts.state_count,
            "initial": self.initial,
        }

    def stats_json(self) -> str:
        return json.dumps(self.stats(), indent=2)


def build_product(wts: GridWTS, tba: RelaxedTBA) -> ProductAutomaton:
    return ProductAutomaton(wts, tba)
