import json
import os

import pytest

from stabledg import (
    RunConfig,
    TraceRecord,
    read_trace_csv,
    replay,
    run_batch,
    summarize,
    write_trace_csv,
)
from stabledg import harness
from stabledg.cli import main
from stabledg.errors import EmptyTrace, InvariantBreached, ModelViolation
from stabledg.graph import StepDelta
from stabledg.stream import EventStream, random_arrival_stream, random_low_avg_stream, write_stream


def test_empty_stream_empty_trace():
    assert replay(RunConfig(alg="directed", stream=EventStream([]))) == []
    with pytest.raises(EmptyTrace):
        summarize([])


def test_trace_csv_round_trip(tmp_path):
    stream = random_low_avg_stream(25, 2, seed=2, departure_rate=0.2)
    records = replay(RunConfig(alg="is6", stream=stream))
    path = tmp_path / "trace.csv"
    write_trace_csv(records, path)
    assert read_trace_csv(path) == records


def test_replay_deterministic_bytes(tmp_path):
    stream = random_arrival_stream(20, 2, seed=6)
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    replay(RunConfig(alg="phase2", stream=stream, oracle="exact", out=str(p1)))
    replay(RunConfig(alg="phase2", stream=stream, oracle="exact", out=str(p2)))
    assert p1.read_bytes() == p2.read_bytes()


def test_arrival_only_algorithms_reject_dynamic_streams():
    stream = random_low_avg_stream(10, 2, seed=1, departure_rate=0.4)
    with pytest.raises(ModelViolation):
        replay(RunConfig(alg="is2", stream=stream))


def test_strict_mode_catches_stability_breach(monkeypatch):
    class Unstable:
        name = "unstable"
        model = "arrival"
        sense = "min"
        stability_cap = 0

        def __init__(self):
            self.sol = set()

        def step(self, g, ev):
            self.sol.add(ev.vertex)
            return StepDelta(added=frozenset({ev.vertex}))

        def solution(self):
            return self.sol

        def check(self, g):
            return True, ""

        def aux(self):
            return {}

        def opt(self, g):
            return 1

    monkeypatch.setattr(harness, "make_algorithm", lambda cfg, stream: Unstable())
    stream = random_arrival_stream(3, 1, seed=0)
    with pytest.raises(InvariantBreached) as err:
        replay(RunConfig(alg="directed", stream=stream, strict=True))
    assert err.value.name == "stability-cap"


def test_sparse_oracle_mode():
    stream = random_arrival_stream(12, 2, seed=3)
    records = replay(RunConfig(alg="directed", stream=stream, oracle="exact", oracle_every=4))
    solved = [r for r in records if r.opt is not None]
    assert [r.t for r in solved] == [4, 8, 12]


def test_summary_fields():
    stream = random_low_avg_stream(30, 2, seed=4)
    records = replay(RunConfig(alg="is2", stream=stream, oracle="exact", budget=None))
    s = summarize(records, sense="max")
    assert s.max_stability <= 2
    assert s.min_working_ratio is not None and s.min_working_ratio >= 0.455
    assert s.worst_ratio is not None and s.worst_ratio >= 1.0


def test_run_batch():
    cfgs = [RunConfig(alg="directed", stream=random_arrival_stream(10, 2, seed=s)) for s in range(4)]
    out = run_batch(cfgs, workers=2)
    assert len(out) == 4 and all(len(r) == 10 for r in out)


def test_missing_degree_bound_is_an_error():
    stream = random_arrival_stream(5, 2, seed=0)
    stream.meta.pop("d")
    with pytest.raises(ValueError):
        replay(RunConfig(alg="phasek", stream=stream))
    assert len(replay(RunConfig(alg="phasek", stream=stream, d=2))) == 5


def test_evaluate_bounds_directed():
    stream = random_arrival_stream(14, 2, seed=8)
    records, checks = harness.evaluate_bounds(
        RunConfig(alg="directed", stream=stream, oracle="exact", strict=True)
    )
    assert len(records) == 14
    names = {c.name for c in checks}
    assert {"stability-cap", "ratio-(d+1)^2"} <= names
    assert all(c.ok for c in checks)


# -- command-line interface -------------------------------------------------------------


def test_cli_round_trip(tmp_path, capsys):
    stream_path = tmp_path / "stream.jsonl"
    trace_path = tmp_path / "trace.csv"
    assert main(["gen", "tight", "--d", "3", "--out", str(stream_path)]) == 0
    assert (tmp_path / "stream.jsonl.meta.json").exists()
    assert (
        main(
            [
                "run",
                "--alg",
                "directed",
                "--stream",
                str(stream_path),
                "--oracle",
                "on",
                "--budget",
                "40",
                "--strict",
                "--out",
                str(trace_path),
            ]
        )
        == 0
    )
    summary = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert summary["max_stability"] == 1
    assert main(["summarize", "--trace", str(trace_path)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["events"] == len(read_trace_csv(trace_path))


def test_cli_verify_passes(tmp_path, capsys):
    stream_path = tmp_path / "s.jsonl"
    write_stream(random_arrival_stream(14, 2, seed=2), stream_path)
    code = main(["verify", "--alg", "phase2", "--stream", str(stream_path), "--oracle", "on", "--target", "oracle"])
    out = capsys.readouterr().out
    assert code == 0
    assert "PASS overall" in out


def test_cli_gen_star_and_lb(tmp_path):
    star = tmp_path / "star.jsonl"
    assert main(["gen", "star", "--n", "10", "--out", str(star)]) == 0
    lb = tmp_path / "lb.jsonl"
    assert main(["gen", "is-lb", "--n", "6", "--epsilon", "0.2", "--mu", "0.005", "--seed", "1", "--out", str(lb)]) == 0
    sidecar = json.loads((tmp_path / "lb.jsonl.meta.json").read_text())
    assert "landmarks" in sidecar and "certificates" in sidecar


def test_cli_gen_expander_with_certificate(tmp_path):
    out = tmp_path / "exp.json"
    assert (
        main(
            [
                "gen",
                "expander",
                "--n",
                "8",
                "--epsilon",
                "0.2",
                "--mu",
                "0.005",
                "--seed",
                "4",
                "--verify-cap",
                "2",
                "--out",
                str(out),
            ]
        )
        == 0
    )
    payload = json.loads(out.read_text())
    assert len(payload["left"]) == 10 and len(payload["right"]) == 8
    sidecar = json.loads((tmp_path / "exp.json.meta.json").read_text())
    assert "expansion" in sidecar["certificates"]


def test_cli_seed_env_override(tmp_path, monkeypatch):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    monkeypatch.setenv(harness.SEED_ENV_VAR, "12")
    main(["gen", "expander", "--n", "8", "--epsilon", "0.2", "--seed", "0", "--out", str(a)])
    monkeypatch.delenv(harness.SEED_ENV_VAR)
    main(["gen", "expander", "--n", "8", "--epsilon", "0.2", "--seed", "12", "--out", str(b)])
    assert json.loads(a.read_text())["edges"] == json.loads(b.read_text())["edges"]


def test_cli_error_exit_code(tmp_path):
    stream_path = tmp_path / "s.jsonl"
    write_stream(random_low_avg_stream(8, 2, seed=0, departure_rate=0.5), stream_path)
    # arrival-only algorithm fed a fully-dynamic stream
    assert main(["run", "--alg", "is2", "--stream", str(stream_path)]) == 1
