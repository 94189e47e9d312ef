"""Command-line client for the planning service.

Subcommands run against an in-process service instance by default, or a
remote one with --server.  Exit codes: 0 success, 2 invalid input or
construction failure, 3 no accepting run exists, 4 the run became
infeasible at execution time.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NO_RUN = 3
EXIT_INFEASIBLE = 4

_STATUS_EXIT = {"no_accepting_run": EXIT_NO_RUN, "infeasible": EXIT_INFEASIBLE}


class CliError(Exception):
    def __init__(self, message: str, exit_code: int = EXIT_INPUT):
        super().__init__(message)
        self.exit_code = exit_code


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    # in-process: drive the ASGI app through the synchronous test transport
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service.app import create_app

    return TestClient(create_app())


def _post(client: httpx.Client, path: str, payload: dict) -> dict:
    try:
        resp = client.post(path, json=payload)
    except httpx.HTTPError as exc:
        raise CliError(f"service unreachable: {exc}") from exc
    if resp.status_code == 200:
        return resp.json()
    try:
        detail = resp.json()["detail"]
        code, message = detail["code"], detail["message"]
    except Exception:
        code, message = "invalid_input", resp.text
    raise CliError(message, _STATUS_EXIT.get(code, EXIT_INPUT))


def _maybe_file(text: str) -> str:
    """Treat the argument as a path when it names a readable file."""
    p = Path(text)
    if p.is_file():
        return p.read_text()
    return text


def _load_scenario(arg: str) -> dict:
    if arg == "case-study":
        from .sim import case_study_scenario

        return case_study_scenario()
    p = Path(arg)
    if not p.is_file():
        raise CliError(f"scenario file not found: {arg}")
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise CliError(f"scenario is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise CliError("scenario document must be a JSON object")
    return doc


def _outdir(arg: str | None) -> Path | None:
    if arg is None:
        return None
    out = Path(arg)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write(out: Path, name: str, text: str) -> None:
    (out / name).write_text(text)
    print(f"wrote {out / name}")


def _fmt_vec(values: list) -> str:
    return "[" + ", ".join(str(v) for v in values) + "]"


def cmd_build(args: argparse.Namespace) -> int:
    payload: dict = {"formula": _maybe_file(args.formula), "prune": not args.no_prune}
    if args.alphabet:
        payload["alphabet"] = [a.strip() for a in args.alphabet.split(",") if a.strip()]
    with _client(args.server) as client:
        doc = _post(client, "/build", payload)
    print(f"states: {doc['states']} (raw {doc['raw_states']})")
    print(f"edges: {doc['edges']}")
    print(f"initial: {doc['initial']}  accepting: {doc['accepting']}  sink: {doc['sink']}")
    print(f"v_c: {_fmt_vec(doc['v_c'])}")
    print(f"v_d: {_fmt_vec(doc['v_d'])}")
    out = _outdir(args.out)
    if out:
        _write(out, "automaton.json", json.dumps(doc["automaton"], indent=2) + "\n")
        _write(out, "automaton.dot", doc["dot"])
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    payload: dict = {"scenario": _load_scenario(args.scenario)}
    for key in ("steps", "horizon", "alpha", "beta", "seed"):
        value = getattr(args, key)
        if value is not None:
            payload[key] = value
    if args.sense_range is not None:
        payload["sense_range"] = args.sense_range
    with _client(args.server) as client:
        doc = _post(client, "/simulate", payload)
    zeros = doc["energy_zero_steps"]
    print(f"steps: {doc['steps']}")
    print(f"energy zero at: {zeros if zeros else 'never'}")
    print(f"constraint cases: {doc['constraint_counts']}")
    print(f"fallback steps: {doc['fallback_steps'] if doc['fallback_steps'] else 'none'}")
    print(f"final cumulative reward: {doc['final_cum_reward']:g}")
    out = _outdir(args.out)
    if out:
        _write(out, "trace.jsonl", doc["trace_jsonl"])
        _write(out, "series.csv", doc["series_csv"])
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    payload = {
        "sizes": [int(s) for s in args.sizes.split(",") if s],
        "horizons": [int(h) for h in args.horizons.split(",") if h],
        "repetitions": args.repetitions,
    }
    with _client(args.server) as client:
        doc = _post(client, "/bench", payload)
    print("workspace  horizon  wts_states  product_states  mean_step_s")
    for r in doc["rows"]:
        print(
            f"{r['workspace']:>9}  {r['horizon']:>7}  {r['wts_states']:>10}  "
            f"{r['product_states']:>14}  {r['mean_step_seconds']:>11.4f}"
        )
    out = _outdir(args.out)
    if out:
        _write(out, "bench.csv", doc["csv"])
    return EXIT_OK


def cmd_inspect(args: argparse.Namespace) -> int:
    payload = {"scenario": _load_scenario(args.scenario)}
    with _client(args.server) as client:
        doc = _post(client, "/inspect", payload)
    print(f"tba states: {doc['tba_states']} (raw {doc['tba_raw_states']})")
    print(f"product states: {doc['product_states']}")
    print(f"product transitions: {doc['product_transitions']}")
    print(f"accepting states: {doc['accepting_states']}")
    print(f"largest self-reachable set: {doc['fstar_size']}")
    print(f"initial energy: {doc['initial_energy']}")
    print(
        f"finite-energy states: {doc['finite_energy_states']} "
        f"(max finite {doc['max_finite_energy']})"
    )
    out = _outdir(args.out)
    if out:
        _write(out, "energy.csv", doc["energy_csv"])
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mitlplan",
        description="Minimal-violation planning for timed temporal-logic tasks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--server", help="base URL of a running service (default: in-process)")
        p.add_argument("--out", help="directory for output artifacts")

    b = sub.add_parser("build", help="construct a relaxed automaton from a formula")
    b.add_argument("--formula", required=True, help="formula text or path to a file holding it")
    b.add_argument("--alphabet", help="comma-separated atoms beyond those in the formula")
    b.add_argument("--no-prune", action="store_true", help="keep unreachable evaluations")
    common(b)
    b.set_defaults(func=cmd_build)

    s = sub.add_parser("simulate", help="run a planning episode on a scenario")
    s.add_argument(
        "--scenario",
        required=True,
        help="path to a scenario JSON document, or 'case-study' for the built-in one",
    )
    s.add_argument("--steps", type=int)
    s.add_argument("--horizon", type=int)
    s.add_argument("--alpha", type=float)
    s.add_argument("--beta", type=float)
    s.add_argument("--sense-range", dest="sense_range", type=int)
    s.add_argument("--seed", type=int)
    common(s)
    s.set_defaults(func=cmd_simulate)

    n = sub.add_parser("bench", help="measure planning time across sizes and horizons")
    n.add_argument("--sizes", default="10,30,50", help="comma-separated workspace side lengths")
    n.add_argument("--horizons", default="4,6,8", help="comma-separated planning horizons")
    n.add_argument("--repetitions", type=int, default=3, help="measured steps per cell")
    common(n)
    n.set_defaults(func=cmd_bench)

    i = sub.add_parser("inspect", help="print energy-table and recurrence-set statistics")
    i.add_argument(
        "--scenario",
        required=True,
        help="path to a scenario JSON document, or 'case-study' for the built-in one",
    )
    common(i)
    i.set_defaults(func=cmd_inspect)

    v = sub.add_parser("serve", help="run the HTTP service")
    v.add_argument("--host", default="127.0.0.1")
    v.add_argument("--port", type=int, default=8000)
    v.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
