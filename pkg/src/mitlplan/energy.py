"""Energy function over the product: distance-to-recurrence potential.

The planner needs, for every product state, the cheapest violation-aware
distance to the largest self-reachable subset of the accepting states
(the set the agent must revisit forever).  That set is fixed by the
structural graph; obstacle knowledge only re-prices transitions, so an
update recomputes distances but never the set itself.

Transition costs for the energy are ``w * (1 + beta * wv)`` by default,
where ``wv`` is the blended violation weight of the target.  The additive
1 keeps every cost strictly positive (a plain ``w * wv`` zeroes out on
violation-free transitions and breaks the strict-descent property the
planner's progress argument rests on); scaling the violation part by
``beta`` keeps the energy ordering consistent with the planner's utility,
which charges violations at the same rate.  The ``unit`` mode drops the
``beta`` factor and ``literal`` restores the bare product, for comparison.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .product import ProductAutomaton, ProductError

MODES = ("beta", "unit", "literal")


@dataclass(frozen=True)
class EnergyTable:
    J: tuple[float, ...]
    fstar: frozenset[int]
    version: int
    alpha: float
    beta: float
    mode: str

    def energy(self, pid: int) -> float:
        return self.J[pid]


def _strongly_connected(product: ProductAutomaton) -> list[list[int]]:
    """Tarjan's algorithm with an explicit stack (graphs here overflow the
    recursion limit by two orders of magnitude)."""
    n = product.state_count
    index = [-1] * n
    low = [0] * n
    on_stack = bytearray(n)
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, iter(product.successors(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = 1
        while work:
            node, it = work[-1]
            advanced = False
            for child in it:
                if index[child] == -1:
                    index[child] = low[child] = counter
                    counter += 1
                    stack.append(child)
                    on_stack[child] = 1
                    work.append((child, iter(product.successors(child))))
                    advanced = True
                    break
                if on_stack[child]:
                    if index[child] < low[node]:
                        low[node] = index[child]
            if advanced:
                continue
            work.pop()
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = 0
                    comp.append(w)
                    if w == node:
                        break
                sccs.append(comp)
            if work:
                parent = work[-1][0]
                if low[node] < low[parent]:
                    low[parent] = low[node]
    return sccs


def largest_self_reachable(product: ProductAutomaton) -> frozenset[int]:
    """Accepting states that can reach an accepting cycle (in one or more
    steps); equivalently the greatest subset of the accepting states whose
    members all re-reach the subset non-trivially."""
    acc = set(product.accepting())
    kernel: set[int] = set()
    for comp in _strongly_connected(product):
        if len(comp) > 1:
            kernel.update(p for p in comp if p in acc)
        else:
            p = comp[0]
            if p in acc and p in product.successors(p):
                kernel.add(p)
    if not kernel:
        return frozenset()
    rev = product.reverse_adjacency()
    reach = set(kernel)
    frontier = list(kernel)
    while frontier:
        u = frontier.pop()
        for v in rev[u]:
            if v not in reach:
                reach.add(v)
                frontier.append(v)
    return frozenset(acc & reach)


def edge_cost_into(
    product: ProductAutomaton, pid: int, alpha: float, beta: float, mode: str
) -> float:
    """Energy cost of any transition entering `pid` under the current knowledge."""
    cell, s = product.decode(pid)
    if s == product.tba.sink_id or product.blocked(cell):
        return math.inf
    wv = product.violation_weight(pid, alpha)
    w = product.wts.weight
    match mode:
        case "beta":
            return w * (1.0 + beta * wv)
        case "unit":
            return w * (1.0 + wv)
        case "literal":
            return w * wv
    raise ProductError(f"unknown energy mode {mode!r}; expected one of {MODES}")


def _dijkstra(
    product: ProductAutomaton,
    sources: frozenset[int],
    alpha: float,
    beta: float,
    mode: str,
) -> list[float]:
    n = product.state_count
    cost_into = [edge_cost_into(product, p, alpha, beta, mode) for p in range(n)]
    rev = product.reverse_adjacency()
    dist = [math.inf] * n
    heap: list[tuple[float, int]] = []
    for s in sources:
        dist[s] = 0.0
        heapq.heappush(heap, (0.0, s))
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        cu = cost_into[u]
        if math.isinf(cu):
            continue
        cand = d + cu
        for v in rev[u]:
            if cand < dist[v]:
                dist[v] = cand
                heapq.heappush(heap, (cand, v))
    return dist


def compute_energy(
    product: ProductAutomaton,
    fstar: frozenset[int] | None = None,
    alpha: float = 0.5,
    beta: float = 1.0,
    mode: str = "beta",
) -> EnergyTable:
    if mode not in MODES:
        raise ProductError(f"unknown energy mode {mode!r}; expected one of {MODES}")
    if fstar is None:
        fstar = largest_self_reachable(product)
    J = _dijkstra(product, fstar, alpha, beta, mode)
    return EnergyTable(tuple(J), fstar, 0, alpha, beta, mode)


def automaton_update(
    product: ProductAutomaton, table: EnergyTable, deltas: dict
) -> EnergyTable:
    """Fold sensed label changes into the agent's knowledge and re-price.

    `deltas` maps cell index to the full observed label set.  Consistent
    observations are a no-op (same table object back); otherwise distances
    are recomputed against the cached recurrence set, which label changes
    cannot alter."""
    changed = False
    for cell, atoms in deltas.items():
        atoms = frozenset(atoms)
        if product.wts.label(cell) != atoms:
            product.wts.set_label(cell, atoms)
            changed = True
    if not changed:
        return table
    J = _dijkstra(product, table.fstar, table.alpha, table.beta, table.mode)
    return EnergyTable(
        tuple(J), table.fstar, table.version + 1, table.alpha, table.beta, table.mode
    )


def energy_csv(product: ProductAutomaton, table: EnergyTable) -> str:
    lines = ["# schema_version=1", "state,cell,tba_state,energy"]
    for pid, j in enumerate(table.J):
        cell, s = product.decode(pid)
        val = "inf" if math.isinf(j) else f"{j:g}"
        lines.append(f"{pid},{cell},{s},{val}")
    return "\n".join(lines) + "\n"
