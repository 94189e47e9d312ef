"""Timing matrix over workspace sizes and horizons.

Each measured step performs the full per-step planning workload: one
label delta is applied (a sentinel corner cell toggles between obstacle
and free), which forces the energy table to be recomputed, and then one
receding-horizon step is planned.  A warm-up iteration precedes the
timed ones and the garbage collector is paused while the clock runs.
Structural columns (grid states, product states) are exact; timing
columns are wall clock and machine dependent.
"""

from __future__ import annotations

import gc
import time
from dataclasses import dataclass

from .automaton import build
from .energy import compute_energy, automaton_update
from .formula import parse
from .planner import PlannerConfig, PlannerState, initial_plan, rhc_step, zero_rewards
from .product import build_product
from .sim import case_study_scenario
from .wts import GridWTS


@dataclass(frozen=True)
class BenchRow:
    workspace: int
    horizon: int
    wts_states: int
    product_states: int
    mean_step_seconds: float


def _bench_wts(width: int, alphabet: frozenset[str]) -> GridWTS:
    wts = GridWTS(width, width, q0=(width // 2) * width + width // 2, alphabet=alphabet)
    wts.set_label(width * width - 1, frozenset({"pear"}))
    wts.set_label(width - 1, frozenset({"cherry"}))
    wts.label_version = 0
    return wts


def bench_matrix(
    sizes: tuple[int, ...] = (10, 30, 50),
    horizons: tuple[int, ...] = (4, 6, 8),
    repetitions: int = 3,
) -> list[BenchRow]:
    formula = parse(case_study_scenario()["formula"])
    tba = build(formula)
    rows: list[BenchRow] = []
    for width in sizes:
        if width < 4:
            raise ValueError(f"workspace side must be at least 4, got {width}")
        wts = _bench_wts(width, frozenset(formula.alphabet))
        product = build_product(wts, tba)
        sentinel = wts.index(0, width - 1)
        for horizon in horizons:
            config = PlannerConfig(horizon=horizon, sense_range=horizon)
            table = compute_energy(product, None, config.alpha, config.beta)
            step0, node = initial_plan(product, table, zero_rewards, config)
            state = PlannerState(
                cell=node.cell,
                statuses=node.statuses,
                aux=node.aux,
                prev_predicted=step0.predicted,
                tau=wts.weight,
            )
            total = 0.0
            gc_was_enabled = gc.isenabled()
            gc.collect()
            gc.disable()
            try:
                for k in range(repetitions + 1):
                    # iteration 0 warms the caches and is not timed
                    delta = {sentinel: frozenset() if k % 2 else frozenset({"obs"})}
                    t0 = time.perf_counter()
                    table = automaton_update(product, table, delta)
                    step, node = rhc_step(product, table, zero_rewards, config, state, k + 1)
                    if k:
                        total += time.perf_counter() - t0
                    state.cell = node.cell
                    state.statuses = node.statuses
                    state.aux = node.aux
                    state.prev_predicted = step.predicted
                    state.tau += wts.weight
            finally:
                if gc_was_enabled:
                    gc.enable()
            # leave the sentinel free for the next horizon's fresh table
            if wts.label(sentinel):
                wts.set_label(sentinel, frozenset())
            rows.append(
                BenchRow(
                    workspace=width,
                    horizon=horizon,
                    wts_states=wts.state_count,
                    product_states=product.state_count,
                    mean_step_seconds=total / repetitions,
                )
            )
    return rows


def bench_csv(rows: list[BenchRow]) -> str:
    lines = ["# schema_version=1", "workspace,horizon,wts_states,product_states,mean_step_seconds"]
    for r in rows:
        lines.append(
            f"{r.workspace},{r.horizon},{r.wts_states},{r.product_states},"
            f"{r.mean_step_seconds:.6f}"
        )
    return "\n".join(lines) + "\n"
