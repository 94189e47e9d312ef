"""Receding-horizon plan synthesis over the product.

Each step enumerates every horizon-N path from the current product state
(moves onto cells known to violate a hard constraint are pruned, so no
candidate ever touches the sink), scores them by accumulated sensed
reward minus the violation penalty, and keeps the best one satisfying the
active energy constraint:

  C1  current energy positive, previous prediction never at zero:
      the new terminal energy must strictly undercut the previous one;
  C2  current energy positive, previous prediction reached zero at
      position i: the new prediction must reach zero by position i-1;
  C3  current energy zero: the new terminal energy must be finite.

Only the first predicted move is applied.  In a static environment this
drives the energy to zero and keeps revisiting the recurrence set; under
dynamic obstacles a step can transiently admit no satisfying path, in
which case the lowest-terminal-energy candidate is taken and flagged.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, NamedTuple

from .energy import EnergyTable, automaton_update, compute_energy
from .product import ProductAutomaton


class NoAcceptingRunError(RuntimeError):
    """No accepting run exists from the initial state."""


class InfeasibleError(RuntimeError):
    """The agent has no admissible move (hard constraints close every path)."""


@dataclass(frozen=True)
class PlannerConfig:
    horizon: int = 4
    alpha: float = 0.8
    beta: float = 10.0
    sense_range: int = 4
    sense_norm: str = "manhattan"
    energy_mode: str = "beta"

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError(f"horizon must be at least 1, got {self.horizon}")
        if not 0 <= self.alpha <= 1:
            raise ValueError(f"alpha must lie in [0,1], got {self.alpha}")
        if self.beta < 0:
            raise ValueError(f"beta must be non-negative, got {self.beta}")
        # prediction beyond the sensed disk would plan over unknown cells
        if self.sense_range < self.horizon:
            raise ValueError(
                f"sense_range {self.sense_range} below horizon {self.horizon}"
            )
        if self.sense_norm not in ("manhattan", "chebyshev"):
            raise ValueError(f"unknown sense_norm {self.sense_norm!r}")


class PathNode(NamedTuple):
    cell: int
    tba_id: int
    statuses: tuple
    aux: tuple


@dataclass(frozen=True)
class PlanStep:
    k: int
    chosen: int
    predicted: tuple[int, ...]
    utility: float
    constraint_case: str
    fallback: bool
    terminal_energy: float


@dataclass
class PlannerState:
    cell: int
    statuses: tuple
    aux: tuple
    prev_predicted: tuple[int, ...]
    tau: float = 0.0
    cum_reward: float = 0.0
    cum_vc: float = 0.0
    cum_vd: float = 0.0


RewardOf = Callable[[int], float]


def zero_rewards(cell: int) -> float:
    return 0.0


def _iter_paths(
    product: ProductAutomaton,
    cell: int,
    statuses: tuple,
    aux: tuple,
    horizon: int,
) -> Iterator[tuple[PathNode, ...]]:
    tba = product.tba
    dt = product.wts.weight
    prefix: list[PathNode] = []

    def rec(cell, statuses, aux, depth):
        if depth == horizon:
            yield tuple(prefix)
            return
        for nb in product.wts.neighbors(cell):
            if product.blocked(nb):
                continue
            st2, aux2 = tba.step(statuses, aux, dt, product.full_symbol(nb))
            prefix.append(PathNode(nb, tba.state_id(st2), st2, aux2))
            yield from rec(nb, st2, aux2, depth + 1)
            prefix.pop()

    yield from rec(cell, statuses, aux, 0)


def enumerate_paths(
    product: ProductAutomaton,
    cell: int,
    statuses: tuple,
    aux: tuple,
    horizon: int,
) -> list[tuple[PathNode, ...]]:
    """All admissible horizon-N paths from the given runtime state.

    Empty when every neighbor is known-blocked (agent surrounded)."""
    return list(_iter_paths(product, cell, statuses, aux, horizon))


def utility(
    product: ProductAutomaton,
    path: tuple[PathNode, ...],
    reward_of: RewardOf,
    alpha: float,
    beta: float,
) -> float:
    w = product.wts.weight
    gain = 0.0
    cost = 0.0
    for node in path:
        gain += reward_of(node.cell)
        cost += w * product.violation_weight(product.encode(node.cell, node.tba_id), alpha)
    return gain - beta * cost


def _select(
    product: ProductAutomaton,
    table: EnergyTable,
    paths: Iterator[tuple[PathNode, ...]],
    reward_of: RewardOf,
    config: PlannerConfig,
    admissible: Callable[[tuple[int, ...]], bool],
) -> tuple[tuple[PathNode, ...] | None, tuple[PathNode, ...] | None, float, float]:
    """Best admissible path and best fallback path, each with its utility.

    Ordering is deterministic: utility desc, then terminal energy asc, then
    the product-id sequence; the fallback ranks terminal energy first."""
    best = fallback = None
    best_key = fb_key = None
    best_u = fb_u = math.nan
    for path in paths:
        pids = tuple(product.encode(n.cell, n.tba_id) for n in path)
        u = utility(product, path, reward_of, config.alpha, config.beta)
        term = table.J[pids[-1]]
        key = (-u, term, pids)
        fkey = (term, -u, pids)
        if fb_key is None or fkey < fb_key:
            fallback, fb_key, fb_u = path, fkey, u
        if admissible(pids) and (best_key is None or key < best_key):
            best, best_key, best_u = path, key, u
    return best, fallback, best_u, fb_u


def initial_plan(
    product: ProductAutomaton,
    table: EnergyTable,
    reward_of: RewardOf,
    config: PlannerConfig,
) -> tuple[PlanStep, PathNode]:
    if math.isinf(table.J[product.initial]):
        raise NoAcceptingRunError(
            "no accepting run exists from the initial state (energy is infinite)"
        )
    statuses, aux = product.tba.initial_runtime()
    paths = _iter_paths(product, product.wts.q0, statuses, aux, config.horizon)
    best, _, best_u, _ = _select(
        product, table, paths, reward_of, config, lambda pids: True
    )
    if best is None:
        raise InfeasibleError("no admissible initial move (start cell surrounded)")
    pids = tuple(product.encode(n.cell, n.tba_id) for n in best)
    step = PlanStep(
        k=0,
        chosen=pids[0],
        predicted=pids,
        utility=best_u,
        constraint_case="initial",
        fallback=False,
        terminal_energy=table.J[pids[-1]],
    )
    return step, best[0]


def rhc_step(
    product: ProductAutomaton,
    table: EnergyTable,
    reward_of: RewardOf,
    config: PlannerConfig,
    state: PlannerState,
    k: int,
) -> tuple[PlanStep, PathNode]:
    cur = product.encode(state.cell, product.tba.state_id(state.statuses))
    j_cur = table.J[cur]
    zero_pos = None
    for i, pid in enumerate(state.prev_predicted):
        if table.J[pid] == 0:
            zero_pos = i
            break

    if j_cur == 0:
        case = "C3"

        def admissible(pids):
            return not math.isinf(table.J[pids[-1]])

    elif zero_pos is not None and zero_pos >= 1:
        case = "C2"
        cutoff = zero_pos  # previous zero shifts one position closer

        def admissible(pids):
            return any(table.J[p] == 0 for p in pids[:cutoff])

    else:
        case = "C1"
        prev_term = table.J[state.prev_predicted[-1]]

        def admissible(pids):
            return table.J[pids[-1]] < prev_term

    paths = _iter_paths(product, state.cell, state.statuses, state.aux, config.horizon)
    best, fallback, best_u, fb_u = _select(
        product, table, paths, reward_of, config, admissible
    )
    if best is None and fallback is None:
        raise InfeasibleError(f"no admissible move at step {k} (agent surrounded)")
    chosen_path, chosen_u, used_fallback = (
        (best, best_u, False) if best is not None else (fallback, fb_u, True)
    )
    pids = tuple(product.encode(n.cell, n.tba_id) for n in chosen_path)
    step = PlanStep(
        k=k,
        chosen=pids[0],
        predicted=pids,
        utility=chosen_u,
        constraint_case=case,
        fallback=used_fallback,
        terminal_energy=table.J[pids[-1]],
    )
    return step, chosen_path[0]


@dataclass
class RunResult:
    header: dict
    rows: list[dict]
    plan_steps: list[PlanStep] = field(default_factory=list)

    def trace_jsonl(self) -> str:
        lines = [json.dumps(self.header, sort_keys=True)]
        lines.extend(json.dumps(r, sort_keys=True) for r in self.rows)
        return "\n".join(lines) + "\n"

    def series_csv(self) -> str:
        lines = ["# schema_version=1", "k,energy,cum_reward,cum_vc,cum_vd"]
        init = self.header["initial_step"]
        lines.append(
            f"0,{_csv_num(init['energy'])},{_csv_num(init['cum_reward'])},"
            f"{_csv_num(init['cum_vc'])},{_csv_num(init['cum_vd'])}"
        )
        for r in self.rows:
            lines.append(
                f"{r['k']},{_csv_num(r['energy'])},{_csv_num(r['cum_reward'])},"
                f"{_csv_num(r['cum_vc'])},{_csv_num(r['cum_vd'])}"
            )
        return "\n".join(lines) + "\n"


def _csv_num(x: float) -> str:
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return f"{x:g}"


def _json_num(x: float) -> float | str:
    return "inf" if isinstance(x, float) and math.isinf(x) else x


def _sensed_reward_view(env, wts, agent_cell: int, k: int, config: PlannerConfig) -> RewardOf:
    def at(cell: int) -> float:
        if wts.distance(agent_cell, cell, config.sense_norm) > config.sense_range:
            return 0.0
        return env.reward(k, cell)

    return at


def run_loop(
    product: ProductAutomaton,
    env,
    config: PlannerConfig,
    steps: int,
    table: EnergyTable | None = None,
) -> RunResult:
    """Sense, update, plan, move, repeat.

    Iteration k advances the environment, folds sensed label changes into
    the knowledge and the energy table, plans from the state reached at
    k-1, and applies the first predicted move.  The initial plan (k=0) is
    recorded in the trace header; each later iteration appends one row."""
    wts = product.wts
    tba = product.tba
    if table is None:
        table = compute_energy(product, None, config.alpha, config.beta, config.energy_mode)

    env.set_agent(wts.q0)
    deltas = env.sense(wts, wts.q0, config.sense_range, config.sense_norm)
    table = automaton_update(product, table, deltas)

    reward_of = _sensed_reward_view(env, wts, wts.q0, 0, config)
    step0, node = initial_plan(product, table, reward_of, config)
    state = PlannerState(
        cell=node.cell,
        statuses=node.statuses,
        aux=node.aux,
        prev_predicted=step0.predicted,
        tau=wts.weight,
    )
    state.cum_reward = env.reward(0, node.cell)
    state.cum_vc = tba.v_c[node.tba_id] * wts.weight
    state.cum_vd = tba.v_d[node.tba_id] * wts.weight
    env.set_agent(node.cell)

    header = {
        "schema_version": 1,
        "kind": "trace",
        "grid": [wts.width, wts.height],
        "start_cell": wts.q0,
        "tba_states": tba.state_count,
        "product_states": product.state_count,
        "fstar_size": len(table.fstar),
        "config": {
            "horizon": config.horizon,
            "alpha": config.alpha,
            "beta": config.beta,
            "sense_range": config.sense_range,
            "sense_norm": config.sense_norm,
            "energy_mode": config.energy_mode,
        },
        "steps": steps,
        "initial_step": _row(product, table, step0, node, state),
    }
    rows: list[dict] = []
    plan_steps = [step0]

    for k in range(1, steps + 1):
        env.step(k)
        deltas = env.sense(wts, state.cell, config.sense_range, config.sense_norm)
        table = automaton_update(product, table, deltas)
        reward_of = _sensed_reward_view(env, wts, state.cell, k, config)
        step, node = rhc_step(product, table, reward_of, config, state, k)
        state.cell = node.cell
        state.statuses = node.statuses
        state.aux = node.aux
        state.prev_predicted = step.predicted
        state.tau += wts.weight
        state.cum_reward += env.reward(k, node.cell)
        state.cum_vc += tba.v_c[node.tba_id] * wts.weight
        state.cum_vd += tba.v_d[node.tba_id] * wts.weight
        env.set_agent(node.cell)
        rows.append(_row(product, table, step, node, state))
        plan_steps.append(step)

    return RunResult(header=header, rows=rows, plan_steps=plan_steps)


def _row(
    product: ProductAutomaton,
    table: EnergyTable,
    step: PlanStep,
    node: PathNode,
    state: PlannerState,
) -> dict:
    x, y = product.wts.xy(node.cell)
    return {
        "k": step.k,
        "cell": node.cell,
        "xy": [x, y],
        "tba_state": node.tba_id,
        "tau": state.tau,
        "energy": _json_num(table.J[step.chosen]),
        "constraint_case": step.constraint_case,
        "fallback": step.fallback,
        "utility": step.utility,
        "terminal_energy": _json_num(step.terminal_energy),
        "predicted": list(step.predicted),
        "cum_reward": state.cum_reward,
        "cum_vc": _json_num(state.cum_vc),
        "cum_vd": _json_num(state.cum_vd),
        "table_version": table.version,
    }
