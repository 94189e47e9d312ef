"""Request and response bodies for the planning service.

Numeric fields that can be infinite travel as the string "inf" so every
payload stays strict JSON.
"""

from __future__ import annotations

from pydantic import BaseModel, Field

Num = int | float | str


class ErrorBody(BaseModel):
    code: str
    message: str


class BuildRequest(BaseModel):
    formula: str
    alphabet: list[str] | None = None
    prune: bool = True


class BuildResponse(BaseModel):
    schema_version: int = 1
    states: int
    raw_states: int
    edges: int
    initial: int
    accepting: int
    sink: int
    v_c: list[Num]
    v_d: list[Num]
    automaton: dict
    dot: str


class SimulateRequest(BaseModel):
    scenario: dict
    steps: int | None = Field(default=None, ge=0)
    horizon: int | None = Field(default=None, ge=1)
    alpha: float | None = Field(default=None, ge=0.0, le=1.0)
    beta: float | None = Field(default=None, ge=0.0)
    sense_range: int | None = Field(default=None, ge=0)
    seed: int | None = None


class SimulateResponse(BaseModel):
    schema_version: int = 1
    steps: int
    final_cum_reward: float
    energy_zero_steps: list[int]
    constraint_counts: dict[str, int]
    fallback_steps: list[int]
    trace_jsonl: str
    series_csv: str


class BenchRequest(BaseModel):
    sizes: list[int] = Field(default=[10, 30, 50], min_length=1)
    horizons: list[int] = Field(default=[4, 6, 8], min_length=1)
    repetitions: int = Field(default=3, ge=1)


class BenchRowModel(BaseModel):
    workspace: int
    horizon: int
    wts_states: int
    product_states: int
    mean_step_seconds: float


class BenchResponse(BaseModel):
    schema_version: int = 1
    rows: list[BenchRowModel]
    csv: str


class InspectRequest(BaseModel):
    scenario: dict


class InspectResponse(BaseModel):
    schema_version: int = 1
    tba_states: int
    tba_raw_states: int
    product_states: int
    product_transitions: int
    accepting_states: int
    fstar_size: int
    initial_energy: Num
    finite_energy_states: int
    max_finite_energy: Num
    energy_csv: str
