"""HTTP facade over the planning core.

Endpoints mirror the command surface: build an automaton, run a
simulation episode, benchmark, inspect an energy table.  Domain errors
map to 422 (bad input) or 409 (well-formed task with no feasible run),
always as {"detail": {"code", "message"}}.
"""

from __future__ import annotations

import math

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from ..automaton import build
from ..bench import bench_csv, bench_matrix
from ..energy import compute_energy, energy_csv
from ..formula import parse
from ..planner import InfeasibleError, NoAcceptingRunError, run_loop
from ..product import build_product
from ..sim import scenario_from_dict
from .schemas import (
    BenchRequest,
    BenchResponse,
    BenchRowModel,
    BuildRequest,
    BuildResponse,
    InspectRequest,
    InspectResponse,
    SimulateRequest,
    SimulateResponse,
)


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"detail": {"code": code, "message": message}})


def _merged_scenario(req: SimulateRequest) -> dict:
    scenario = dict(req.scenario)
    planner = dict(scenario.get("planner", {}))
    if req.horizon is not None:
        planner["horizon"] = req.horizon
        if req.sense_range is None:
            pinned = planner.get("sense_range")
            if pinned is not None and pinned < req.horizon:
                # the scenario's radius can't cover the widened horizon
                planner["sense_range"] = req.horizon
    if req.alpha is not None:
        planner["alpha"] = req.alpha
    if req.beta is not None:
        planner["beta"] = req.beta
    if req.sense_range is not None:
        planner["sense_range"] = req.sense_range
    scenario["planner"] = planner
    if req.steps is not None:
        scenario["steps"] = req.steps
    if req.seed is not None:
        scenario["seed"] = req.seed
    return scenario


def create_app() -> FastAPI:
    app = FastAPI(title="mitlplan", version="0.1.0")

    @app.exception_handler(NoAcceptingRunError)
    async def _no_run(request, exc):
        return _error(409, "no_accepting_run", str(exc))

    @app.exception_handler(InfeasibleError)
    async def _infeasible(request, exc):
        return _error(409, "infeasible", str(exc))

    @app.exception_handler(ValueError)
    async def _bad_input(request, exc):
        # FormulaError, ConstructionError, GridError, ProductError and
        # ScenarioError all derive from ValueError
        return _error(422, "invalid_input", str(exc))

    @app.post("/build", response_model=BuildResponse)
    def do_build(req: BuildRequest) -> BuildResponse:
        alphabet = frozenset(req.alphabet) if req.alphabet is not None else None
        formula = parse(req.formula, alphabet)
        tba = build(formula, prune=req.prune)
        doc = tba.describe()
        return BuildResponse(
            states=tba.state_count,
            raw_states=tba.raw_state_count,
            edges=len(tba.edges),
            initial=tba.initial_id,
            accepting=tba.accepting_id,
            sink=tba.sink_id,
            v_c=doc["v_c"],
            v_d=doc["v_d"],
            automaton=doc,
            dot=tba.to_dot(),
        )

    @app.post("/simulate", response_model=SimulateResponse)
    def do_simulate(req: SimulateRequest) -> SimulateResponse:
        env, wts, formula, config, run = scenario_from_dict(_merged_scenario(req))
        tba = build(formula)
        product = build_product(wts, tba)
        result = run_loop(product, env, config, run["steps"])

        zero_steps = []
        if result.header["initial_step"]["energy"] == 0:
            zero_steps.append(0)
        zero_steps.extend(r["k"] for r in result.rows if r["energy"] == 0)
        counts: dict[str, int] = {}
        for r in result.rows:
            counts[r["constraint_case"]] = counts.get(r["constraint_case"], 0) + 1
        final = result.rows[-1] if result.rows else result.header["initial_step"]
        return SimulateResponse(
            steps=run["steps"],
            final_cum_reward=final["cum_reward"],
            energy_zero_steps=zero_steps,
            constraint_counts=counts,
            fallback_steps=[r["k"] for r in result.rows if r["fallback"]],
            trace_jsonl=result.trace_jsonl(),
            series_csv=result.series_csv(),
        )

    @app.post("/bench", response_model=BenchResponse)
    def do_bench(req: BenchRequest) -> BenchResponse:
        rows = bench_matrix(tuple(req.sizes), tuple(req.horizons), req.repetitions)
        return BenchResponse(
            rows=[BenchRowModel(**vars(r)) for r in rows],
            csv=bench_csv(rows),
        )

    @app.post("/inspect", response_model=InspectResponse)
    def do_inspect(req: InspectRequest) -> InspectResponse:
        env, wts, formula, config, _run = scenario_from_dict(dict(req.scenario))
        tba = build(formula)
        product = build_product(wts, tba)
        table = compute_energy(product, None, config.alpha, config.beta, config.energy_mode)
        finite = [j for j in table.J if not math.isinf(j)]
        return InspectResponse(
            tba_states=tba.state_count,
            tba_raw_states=tba.raw_state_count,
            product_states=product.state_count,
            product_transitions=product.transition_count(),
            accepting_states=len(product.accepting()),
            fstar_size=len(table.fstar),
            initial_energy=_num(table.J[product.initial]),
            finite_energy_states=len(finite),
            max_finite_energy=_num(max(finite)) if finite else "inf",
            energy_csv=energy_csv(product, table),
        )

    return app


def _num(x: float) -> float | str:
    return "inf" if math.isinf(x) else x


app = create_app()
