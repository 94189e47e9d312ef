"""Independent reference implementations used to cross-check the package.

Everything here is written directly from the operator definitions, not
from the package's construction: word checkers walk timed words position
by position, the recurrence-set oracle is a naive shrinking fixpoint, and
the path oracles enumerate trees exhaustively.  Keep these dumb; their
value is that they share no code with the implementation under test.

A timed word is a sequence of (symbol, tau) pairs for positions 1..n,
tau strictly increasing, with the run starting at time 0; the start
position carries no symbol.  The checkers return True when the word
witnesses a violation of the pattern (weak semantics: an obligation
whose deadline is still open at the end of the word does not violate).
"""

from __future__ import annotations

import math
from itertools import product as iproduct


# -- pattern violation checkers ---------------------------------------------------


def violates_always_not(word, p: str) -> bool:
    return any(p in sym for sym, _ in word)


def violates_always(word, p: str) -> bool:
    return any(p not in sym for sym, _ in word)


def violates_eventually(word, p: str) -> bool:
    return False  # an unbounded obligation is never refuted by a finite prefix


def violates_eventually_within(word, p: str, lo: float, hi: float) -> bool:
    for sym, tau in word:
        if lo <= tau < hi and p in sym:
            return False  # satisfied in the window, one-shot
        if tau >= hi:
            return True  # window closed without a completion
    return False


def violates_recurrent_within(word, p: str, lo: float, hi: float) -> bool:
    """Windows are anchored at the start and re-anchored at each completion."""
    anchor = 0.0
    for sym, tau in word:
        if tau - anchor >= hi:
            return True
        if p in sym and tau - anchor >= lo:
            anchor = tau
    return False


def violates_response_within(word, trig: str, tgt: str, lo: float, hi: float) -> bool:
    """Each trigger opens a deadline; a target discharges every open one."""
    pending: float | None = None
    for sym, tau in word:
        if pending is not None:
            if tau - pending >= hi:
                return True
            if tgt in sym and tau - pending >= lo:
                pending = None
        if trig in sym and pending is None:
            # trigger and target in the same position discharge instantly
            if not (tgt in sym and lo == 0):
                pending = tau
    return False


def violates_until_within(word, left: str, right: str, lo: float, hi: float) -> bool:
    """Direct check of `left holds until right, right within the window`."""
    for j, (sym, tau) in enumerate(word):
        if right in sym and lo <= tau < hi:
            return any(left not in s for s, _ in word[:j])
        if tau >= hi:
            return True
        if left not in sym and right not in sym:
            return True
    return False


def violates_hold_until(word, left: str, right: str) -> bool:
    for sym, _ in word:
        if right in sym:
            return False
        if left not in sym:
            return True
    return False


def word_violates(sub, word) -> bool:
    """Dispatch on a parsed sub-formula (pattern and interval read off it)."""
    lo = sub.interval.lower if sub.interval else 0.0
    hi = sub.interval.upper if sub.interval else math.inf
    name = sub.pattern.name
    if name == "ALWAYS_NOT":
        return violates_always_not(word, sub.atoms[0])
    if name == "ALWAYS":
        return violates_always(word, sub.atoms[0])
    if name == "EVENTUALLY":
        return violates_eventually(word, sub.atoms[0])
    if name == "EVENTUALLY_WITHIN":
        return violates_eventually_within(word, sub.atoms[0], lo, hi)
    if name == "ALWAYS_EVENTUALLY_WITHIN":
        return violates_recurrent_within(word, sub.atoms[0], lo, hi)
    if name == "ALWAYS_IMPLIES_EVENTUALLY_WITHIN":
        return violates_response_within(word, sub.atoms[0], sub.atoms[1], lo, hi)
    if name == "UNTIL_WITHIN":
        return violates_until_within(word, sub.atoms[0], sub.atoms[1], lo, hi)
    if name == "HOLD_UNTIL":
        return violates_hold_until(word, sub.atoms[0], sub.atoms[1])
    raise AssertionError(f"no oracle for {name}")


def soft_violation_free(formula, word) -> bool:
    """True when no soft conjunct of the formula is violated on the word."""
    from mitlplan.formula import normalize_soft

    return not any(word_violates(sub, word) for sub in normalize_soft(formula.soft))


# -- recurrence set ---------------------------------------------------------------


def _reaches_set(succ, start: int, targets: set[int]) -> bool:
    """Is some target reachable from `start` in one or more steps?"""
    frontier = list(succ(start))
    seen = set(frontier)
    while frontier:
        node = frontier.pop()
        if node in targets:
            return True
        for nxt in succ(node):
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return False


def fixpoint_self_reachable(accepting, succ) -> frozenset[int]:
    """Shrink the accepting set until every member re-reaches the set
    through at least one transition."""
    current = set(accepting)
    while True:
        keep = {p for p in current if _reaches_set(succ, p, current)}
        if keep == current:
            return frozenset(current)
        current = keep


# -- shortest distances ------------------------------------------------------------


def bellman_ford_to_targets(n: int, succ, cost_into, targets) -> list[float]:
    """Distance-to-target-set by iterated relaxation (no priority queue)."""
    dist = [math.inf] * n
    for t in targets:
        dist[t] = 0.0
    for _ in range(n):
        changed = False
        for u in range(n):
            for v in succ(u):
                c = cost_into(v)
                if dist[v] + c < dist[u]:
                    dist[u] = dist[v] + c
                    changed = True
        if not changed:
            break
    return dist


# -- path enumeration ---------------------------------------------------------------


def enumerate_cell_paths(neighbors, start: int, depth: int):
    """All move sequences of the given depth, no pruning."""
    if depth == 0:
        yield ()
        return
    for nb in neighbors(start):
        for rest in enumerate_cell_paths(neighbors, nb, depth - 1):
            yield (nb, *rest)


def brute_force_best(paths, score):
    """Argmax with the planner's published tie-break: utility first, then
    lower terminal energy, then the identity of the path itself."""
    best = None
    best_key = None
    for path in paths:
        u, term, ident = score(path)
        key = (-u, term, ident)
        if best_key is None or key < best_key:
            best, best_key = path, key
    return best


def all_words(atoms, length: int, dt: float = 1.0):
    """Every timed word over the given atoms with fixed step duration."""
    symbols = [frozenset(s) for s in _subsets(tuple(atoms))]
    for combo in iproduct(symbols, repeat=length):
        yield [(sym, (i + 1) * dt) for i, sym in enumerate(combo)]


def _subsets(atoms):
    out = [()]
    for a in atoms:
        out.extend([s + (a,) for s in out])
    return out
