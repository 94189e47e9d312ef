"""Command-line client: subcommands end to end, artifacts on disk, exit codes."""

from __future__ import annotations

import json

import httpx
import pytest

from mitlplan.cli import (
    EXIT_INFEASIBLE,
    EXIT_INPUT,
    EXIT_NO_RUN,
    EXIT_OK,
    CliError,
    _post,
    main,
)

RUNNING = "hard: G !obs ; soft: G !g & F[0,10) p"


def scenario_file(tmp_path, **overrides):
    doc = {
        "width": 4,
        "height": 4,
        "start": [0, 0],
        "formula": "hard: G !obs ; soft: G F[0,8) p",
        "labels": {"p": [[3, 3]]},
        "planner": {"horizon": 2, "sense_range": 2},
        "steps": 12,
        "seed": 5,
    }
    doc.update(overrides)
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(doc))
    return str(path)


# --- build ------------------------------------------------------------------------


def test_build_prints_table_and_writes_artifacts(tmp_path, capsys):
    assert main(["build", "--formula", RUNNING, "--out", str(tmp_path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "states: 7 (raw 7)" in out
    assert "initial: 0  accepting: 4  sink: 6" in out
    assert "v_c: [0, 0, 1, 1, 0, 0, inf]" in out
    assert "v_d: [0, 1, 1, 0, 0, 1, inf]" in out
    doc = json.loads((tmp_path / "automaton.json").read_text())
    assert doc["schema_version"] == 1
    assert doc["state_count"] == 7
    assert (tmp_path / "automaton.dot").read_text().startswith("digraph")
    assert f"wrote {tmp_path}/automaton.json" in out


def test_build_reads_formula_from_file(tmp_path, capsys):
    src = tmp_path / "task.mitl"
    src.write_text(RUNNING + "\n")
    assert main(["build", "--formula", str(src)]) == EXIT_OK
    assert "states: 7 (raw 7)" in capsys.readouterr().out


def test_build_parse_error_exits_2(capsys):
    assert main(["build", "--formula", "soft: H p"]) == EXIT_INPUT
    assert "error:" in capsys.readouterr().err


def test_build_alphabet_must_cover_used_atoms(capsys):
    assert main(["build", "--formula", RUNNING, "--alphabet", "q"]) == EXIT_INPUT
    assert main(["build", "--formula", RUNNING, "--alphabet", "g,p,obs,q"]) == EXIT_OK


# --- simulate ---------------------------------------------------------------------


def test_simulate_writes_trace_and_series(tmp_path, capsys):
    scen = scenario_file(tmp_path)
    outdir = tmp_path / "run"
    assert main(["simulate", "--scenario", scen, "--out", str(outdir)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "steps: 12" in out
    assert "energy zero at:" in out
    assert "final cumulative reward:" in out
    trace = (outdir / "trace.jsonl").read_text().strip().split("\n")
    assert len(trace) == 13
    assert json.loads(trace[0])["kind"] == "trace"
    series = (outdir / "series.csv").read_text().strip().split("\n")
    assert series[0] == "# schema_version=1"
    assert series[1] == "k,energy,cum_reward,cum_vc,cum_vd"
    assert len(series) == 15


def test_simulate_same_seed_same_bytes(tmp_path, capsys):
    scen = scenario_file(tmp_path)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["simulate", "--scenario", scen, "--out", str(a)]) == EXIT_OK
    assert main(["simulate", "--scenario", scen, "--out", str(b)]) == EXIT_OK
    assert (a / "trace.jsonl").read_bytes() == (b / "trace.jsonl").read_bytes()
    assert (a / "series.csv").read_bytes() == (b / "series.csv").read_bytes()
    c = tmp_path / "c"
    assert main(["simulate", "--scenario", scen, "--seed", "6", "--out", str(c)]) == EXIT_OK
    assert (a / "trace.jsonl").read_bytes() != (c / "trace.jsonl").read_bytes()


def test_simulate_flag_overrides_reach_the_run(tmp_path, capsys):
    scen = scenario_file(tmp_path)
    outdir = tmp_path / "short"
    code = main(
        ["simulate", "--scenario", scen, "--steps", "3", "--horizon", "3", "--out", str(outdir)]
    )
    assert code == EXIT_OK
    header = json.loads((outdir / "trace.jsonl").read_text().split("\n")[0])
    assert header["steps"] == 3
    assert header["config"]["horizon"] == 3


def test_simulate_missing_scenario_exits_2(capsys):
    assert main(["simulate", "--scenario", "/nonexistent.json"]) == EXIT_INPUT
    assert "scenario file not found" in capsys.readouterr().err


def test_simulate_unachievable_task_exits_3(tmp_path, capsys):
    scen = scenario_file(tmp_path, formula="hard: G !obs ; soft: F p", labels={})
    assert main(["simulate", "--scenario", scen]) == EXIT_NO_RUN
    assert "no accepting run" in capsys.readouterr().err


# --- bench and inspect ------------------------------------------------------------


def test_bench_prints_rows_and_writes_csv(tmp_path, capsys):
    code = main(
        ["bench", "--sizes", "5", "--horizons", "2", "--repetitions", "1",
         "--out", str(tmp_path)]
    )
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "workspace  horizon  wts_states  product_states  mean_step_s" in out
    lines = (tmp_path / "bench.csv").read_text().strip().split("\n")
    assert lines[0] == "# schema_version=1"
    assert lines[1] == "workspace,horizon,wts_states,product_states,mean_step_seconds"
    fields = lines[2].split(",")
    assert fields[:4] == ["5", "2", "25", "375"]
    assert float(fields[4]) > 0


def test_inspect_reports_energy_statistics(tmp_path, capsys):
    scen = scenario_file(tmp_path)
    assert main(["inspect", "--scenario", scen, "--out", str(tmp_path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "tba states:" in out
    assert "product states: 64" in out
    assert "largest self-reachable set:" in out
    csv = (tmp_path / "energy.csv").read_text().strip().split("\n")
    assert csv[0] == "# schema_version=1"
    assert len(csv) == 2 + 64


def test_inspect_case_study_keyword(capsys):
    assert main(["inspect", "--scenario", "case-study"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "product states: 1500" in out
    assert "initial energy: 16.0" in out


# --- error mapping ----------------------------------------------------------------


def mapped_exit(status: int, body: dict | str) -> int:
    def handler(request: httpx.Request) -> httpx.Response:
        if isinstance(body, dict):
            return httpx.Response(status, json=body)
        return httpx.Response(status, text=body)

    client = httpx.Client(transport=httpx.MockTransport(handler), base_url="http://t")
    with pytest.raises(CliError) as err:
        _post(client, "/simulate", {})
    return err.value.exit_code


def test_service_error_codes_map_onto_exit_codes():
    detail = lambda code: {"detail": {"code": code, "message": "m"}}
    assert mapped_exit(409, detail("no_accepting_run")) == EXIT_NO_RUN
    assert mapped_exit(409, detail("infeasible")) == EXIT_INFEASIBLE
    assert mapped_exit(422, detail("invalid_input")) == EXIT_INPUT
    assert mapped_exit(500, "boom") == EXIT_INPUT


def test_unreachable_server_exits_2(capsys):
    code = main(
        ["inspect", "--scenario", "case-study", "--server", "http://127.0.0.1:1"]
    )
    assert code == EXIT_INPUT
    assert "service unreachable" in capsys.readouterr().err


def test_missing_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
