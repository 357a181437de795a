"""Replay engine tying streams, algorithms, oracles, and trace files together.

A replay consumes one event stream with one registered algorithm, validates
the output set after every event with an algorithm-independent checker,
optionally computes the exact optimum per event, and emits one trace record
per event.  Traces round-trip losslessly through CSV.  Replays are
deterministic: identical configurations produce byte-identical traces.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import domset, indset, stabilize
from .errors import EmptyTrace, InvariantBreached, ModelViolation
from .graph import DynamicGraph, StepDelta
from .oracle import (
    DOMSET_BUDGET,
    INDSET_BUDGET,
    OracleBudget,
    domination_number,
    independence_number,
    is_directed_dominating_set,
    is_dominating_set,
    is_independent_set,
)
from .stream import MODEL_ARRIVAL, MODEL_DYNAMIC, EventStream, read_stream

BASE_COLUMNS = ("t", "event", "n_alive", "sol_size", "opt", "max_opt", "added", "removed")

SEED_ENV_VAR = "STABLE_DG_SEED"


@dataclass
class TraceRecord:
    t: int
    event: str
    n_alive: int
    sol_size: int
    opt: int | None
    max_opt: int | None
    added: int
    removed: int
    aux: dict = field(default_factory=dict)


@dataclass
class RunConfig:
    alg: str
    stream: EventStream | str | Path
    oracle: str = "off"  # "off" | "exact"
    strict: bool = False
    seed: int | None = None
    out: str | None = None
    oracle_every: int = 1
    budget: OracleBudget | None = None
    target: str = "auto"  # phase target policy: auto | oracle | greedy
    d: int | None = None  # override for the stream's degree bound
    params: dict = field(default_factory=dict)  # sas: sense / eps / f

    def effective_seed(self):
        env = os.environ.get(SEED_ENV_VAR)
        if env is not None:
            return int(env)
        return self.seed


@dataclass
class RunSummary:
    algorithm: str
    events: int
    max_stability: int
    worst_ratio: float | None
    min_working_ratio: float | None
    bounds_guaranteed: bool


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


# -- algorithm adapters -----------------------------------------------------------


class _DirectedAlgo:
    name = "directed"
    model = MODEL_ARRIVAL
    sense = "min"

    def __init__(self, budget):
        self.state = domset.DirectedDomState()
        self.budget = budget
        self.stability_cap = 1

    def step(self, g, ev) -> StepDelta:
        if ev.kind == "del":
            raise ModelViolation("directed maintainer handles arrivals only")
        return domset.directed_step(self.state, g, ev.vertex)

    def solution(self):
        return self.state.dominating

    def check(self, g):
        if not is_directed_dominating_set(g, self.state.dominating):
            return False, "directed-domination"
        witnesses = sorted(self.state.unrelated)
        houses = {u: g.out_closed_neighborhood(u) for u in witnesses}
        for i, u in enumerate(witnesses):
            for w in witnesses[i + 1 :]:
                if houses[u] & houses[w]:
                    return False, "witnesses-pairwise-unrelated"
        anchored = set()
        for u in witnesses:
            anchored |= houses[u]
        if not self.state.dominating <= anchored:
            return False, "solution-anchored-to-witnesses"
        return True, ""

    def aux(self):
        return {"u": len(self.state.unrelated)}

    def opt(self, g):
        return domination_number(g, self.budget)


class _PhaseDomAlgo:
    model = MODEL_ARRIVAL
    sense = "min"

    def __init__(self, name, batch, target_solver, budget):
        self.name = name
        self.state = domset.PhaseDomState(batch=batch)
        self.target_solver = target_solver
        self.budget = budget
        self.stability_cap = batch + 1

    def step(self, g, ev) -> StepDelta:
        if ev.kind == "del":
            raise ModelViolation("phase dominating-set maintainer handles arrivals only")
        return domset.phase_step(self.state, g, ev.vertex, self.target_solver)

    def solution(self):
        return self.state.solution

    def check(self, g):
        if not is_dominating_set(g, self.state.solution):
            return False, "domination"
        s = self.state
        if s.pending_add & s.solution or not s.pending_remove <= s.solution or s.pending_add & s.pending_remove:
            return False, "pending-set-discipline"
        return True, ""

    def aux(self):
        s = self.state
        return {
            "pending_add": len(s.pending_add),
            "pending_remove": len(s.pending_remove),
            "phase_start": int(s.phase_started),
            "target_exact": int(s.last_target_exact),
        }

    def opt(self, g):
        return domination_number(g, self.budget)


class _PhaseIndAlgo:
    sense = "max"

    def __init__(self, name, mode, d, budget):
        self.name = name
        self.model = MODEL_ARRIVAL if mode == indset.MODE_ARRIVAL else MODEL_DYNAMIC
        self.state = indset.PhaseIndState(mode=mode, degree_bound=d)
        self.budget = budget
        self.stability_cap = 2 if mode == indset.MODE_ARRIVAL else 6

    def step(self, g, ev) -> StepDelta:
        return indset.indset_step(self.state, g, ev)

    def solution(self):
        return self.state.independent

    def check(self, g):
        s = self.state
        if not is_independent_set(g, s.independent):
            return False, "independence"
        if not (s.independent <= s.working and s.working <= g.alive):
            return False, "containment-chain"
        if s.pending_add & s.working or not s.pending_remove <= s.working or s.pending_add & s.pending_remove:
            return False, "pending-set-discipline"
        cap = indset.DEGREE_CAP_FACTOR * s.degree_bound
        if any(len(g.adjacency[v] & s.working) > cap for v in s.working):
            return False, "working-degree-cap"
        return True, ""

    def aux(self):
        s = self.state
        return {
            "w": len(s.working),
            "phase_start": int(s.phase_started),
            "pre_w": s.pre_greedy_working,
            "pre_i": s.pre_greedy_independent,
            "grown": s.greedy_added,
        }

    def opt(self, g):
        return independence_number(g, self.budget)


class _SwapAlgo:
    name = "sas"
    model = MODEL_ARRIVAL

    def __init__(self, adapter, epsilon, swap_cap):
        self.adapter = adapter
        self.state = stabilize.SwapState(epsilon=Fraction(epsilon), swap_cap=swap_cap)
        self.sense = "min" if adapter.sense == stabilize.SENSE_MIN else "max"
        self.stability_cap = stabilize.stability_bound(adapter, epsilon, swap_cap)

    def step(self, g, ev) -> StepDelta:
        if ev.kind == "del":
            raise ModelViolation("swap maintainer handles arrivals only")
        return stabilize.swap_step(self.state, self.adapter, g, ev.vertex)

    def solution(self):
        return self.state.solution

    def check(self, g):
        if not self.adapter.feasible(g, self.state.solution):
            return False, "feasibility"
        return True, ""

    def aux(self):
        return {"iterations": self.state.last_iterations}

    def opt(self, g):
        # the step already solved the current graph exactly
        return self.state.prev_opt if self.state.prev_opt is not None else self.adapter.opt(g)


def _require_degree_bound(cfg: RunConfig, stream: EventStream, what: str) -> int:
    d = cfg.d if cfg.d is not None else stream.degree_bound
    if d is None:
        raise ValueError(f"{what} needs a degree bound: stream metadata 'd' or an explicit override")
    return int(d)


def make_algorithm(cfg: RunConfig, stream: EventStream):
    budget = cfg.budget or DOMSET_BUDGET
    if cfg.alg == "directed":
        return _DirectedAlgo(budget)
    if cfg.alg in ("phase2", "phasek"):
        if cfg.target == "oracle":
            target = domset.oracle_target(budget)
        elif cfg.target == "greedy":
            target = domset.greedy_target()
        else:
            target = domset.auto_target(budget)
        if cfg.alg == "phase2":
            return _PhaseDomAlgo("phase2", 2, target, budget)
        d = _require_degree_bound(cfg, stream, "phasek")
        return _PhaseDomAlgo("phasek", 22 * d + 1, target, budget)
    if cfg.alg in ("is2", "is6"):
        d = _require_degree_bound(cfg, stream, cfg.alg)
        budget = cfg.budget or INDSET_BUDGET
        mode = indset.MODE_ARRIVAL if cfg.alg == "is2" else indset.MODE_DYNAMIC
        return _PhaseIndAlgo(cfg.alg, mode, d, budget)
    if cfg.alg == "sas":
        sense = cfg.params.get("sense", "min-ds")
        eps = Fraction(str(cfg.params.get("eps", "1")))
        cap = int(cfg.params.get("f", 2))
        if sense == "min-ds":
            d = _require_degree_bound(cfg, stream, "sas min-ds")
            adapter = stabilize.min_domset_adapter(d, cfg.budget or DOMSET_BUDGET)
        elif sense == "max-is":
            adapter = stabilize.max_indset_adapter(cfg.budget or INDSET_BUDGET)
        else:
            raise ValueError(f"unknown sense {sense!r}")
        return _SwapAlgo(adapter, eps, cap)
    raise ValueError(f"unknown algorithm {cfg.alg!r}")


# -- replay ------------------------------------------------------------------------


def _resolve_stream(source) -> EventStream:
    if isinstance(source, EventStream):
        return source
    return read_stream(source)


def _replay_full(cfg: RunConfig):
    stream = _resolve_stream(cfg.stream)
    alg = make_algorithm(cfg, stream)
    if alg.model == MODEL_ARRIVAL and stream.model == MODEL_DYNAMIC:
        raise ModelViolation(f"{alg.name} accepts arrival-only streams")
    g = DynamicGraph()
    records: list[TraceRecord] = []
    max_opt: int | None = None
    for i, ev in enumerate(stream.events):
        t = g.apply(ev)
        delta = alg.step(g, ev)
        ok, name = alg.check(g)
        if not ok:
            raise InvariantBreached(t, name)
        if cfg.strict and delta.stability > alg.stability_cap:
            raise InvariantBreached(t, "stability-cap", f"{delta.stability} > {alg.stability_cap}")
        opt = None
        if cfg.oracle == "exact" and ((i + 1) % cfg.oracle_every == 0 or i + 1 == len(stream.events)):
            opt = alg.opt(g)
            max_opt = opt if max_opt is None else max(max_opt, opt)
        records.append(
            TraceRecord(
                t=t,
                event=ev.kind,
                n_alive=g.n_alive,
                sol_size=len(alg.solution()),
                opt=opt,
                max_opt=max_opt if opt is not None else None,
                added=len(delta.added),
                removed=len(delta.removed),
                aux=alg.aux(),
            )
        )
    if cfg.out:
        write_trace_csv(records, cfg.out)
    return records, alg, stream


def replay(cfg: RunConfig) -> list[TraceRecord]:
    records, _, _ = _replay_full(cfg)
    return records


def run_batch(configs, workers: int | None = None):
    """Replay many configurations, one worker per replay."""
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(replay, configs))


# -- summaries and trace files --------------------------------------------------------


def summarize(records, sense: str = "min") -> RunSummary:
    if not records:
        raise EmptyTrace("cannot summarize an empty trace")
    worst: Fraction | None = None
    for rec in records:
        if rec.opt is None:
            continue
        if sense == "min":
            if rec.opt > 0:
                ratio = Fraction(rec.sol_size, rec.opt)
            elif rec.sol_size > 0:
                ratio = Fraction(rec.sol_size * 10**9)  # infeasible-opt sentinel
            else:
                continue
        else:
            if rec.sol_size > 0:
                ratio = Fraction(rec.opt, rec.sol_size)
            elif rec.opt > 0:
                ratio = Fraction(rec.opt * 10**9)
            else:
                continue
        worst = ratio if worst is None else max(worst, ratio)
    min_w: Fraction | None = None
    for rec in records:
        if "w" in rec.aux and rec.n_alive > 0:
            r = Fraction(rec.aux["w"], rec.n_alive)
            min_w = r if min_w is None else min(min_w, r)
    exact = all(rec.aux.get("target_exact", 1) for rec in records)
    return RunSummary(
        algorithm="",
        events=len(records),
        max_stability=max(rec.added + rec.removed for rec in records),
        worst_ratio=float(worst) if worst is not None else None,
        min_working_ratio=float(min_w) if min_w is not None else None,
        bounds_guaranteed=exact,
    )


def write_trace_csv(records, path) -> None:
    aux_keys = list(records[0].aux.keys()) if records else []
    for rec in records:
        if list(rec.aux.keys()) != aux_keys:
            raise ValueError("aux columns differ across records")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(BASE_COLUMNS) + [f"aux_{k}" for k in aux_keys])
        for rec in records:
            row = [
                rec.t,
                rec.event,
                rec.n_alive,
                rec.sol_size,
                "" if rec.opt is None else rec.opt,
                "" if rec.max_opt is None else rec.max_opt,
                rec.added,
                rec.removed,
            ]
            row += [rec.aux[k] for k in aux_keys]
            writer.writerow(row)


def read_trace_csv(path) -> list[TraceRecord]:
    records = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            return []
        if tuple(header[: len(BASE_COLUMNS)]) != BASE_COLUMNS:
            raise ValueError(f"unexpected trace columns: {header}")
        aux_keys = [c[len("aux_") :] for c in header[len(BASE_COLUMNS) :]]
        for row in reader:
            base = row[: len(BASE_COLUMNS)]
            aux_vals = row[len(BASE_COLUMNS) :]
            records.append(
                TraceRecord(
                    t=int(base[0]),
                    event=base[1],
                    n_alive=int(base[2]),
                    sol_size=int(base[3]),
                    opt=None if base[4] == "" else int(base[4]),
                    max_opt=None if base[5] == "" else int(base[5]),
                    added=int(base[6]),
                    removed=int(base[7]),
                    aux={k: int(v) for k, v in zip(aux_keys, aux_vals)},
                )
            )
    return records


# -- bound evaluation (shared by the verify subcommand and the acceptance suite) -------


def _observed_arrival_degree(stream: EventStream) -> int:
    return max((len(ev.neighbors) for ev in stream.events if ev.is_arrival), default=0)


def evaluate_bounds(cfg: RunConfig) -> tuple[list[TraceRecord], list[CheckResult]]:
    """Replay a configuration and check every bound applicable to the algorithm."""
    records, alg, stream = _replay_full(cfg)
    checks: list[CheckResult] = []
    max_stab = max((r.added + r.removed for r in records), default=0)
    checks.append(
        CheckResult(
            "stability-cap",
            max_stab <= alg.stability_cap,
            f"max {max_stab} per event, cap {alg.stability_cap}",
        )
    )
    have_opt = any(r.opt is not None for r in records)
    if alg.name == "directed" and have_opt:
        d = max(1, _observed_arrival_degree(stream))
        bad = [r.t for r in records if r.opt and r.sol_size > (d + 1) ** 2 * r.opt]
        checks.append(CheckResult("ratio-(d+1)^2", not bad, f"d={d}" + (f", failed at t={bad[:3]}" if bad else "")))
    if alg.name in ("phase2", "phasek"):
        exact = getattr(alg.state, "all_targets_exact", True)
        if have_opt and exact:
            rep = domset.phase_domset_bounds(records, alg.state.batch)
            checks.append(CheckResult("phase-size-bounds", rep.all_ok, _report_detail(rep)))
        elif have_opt:
            checks.append(CheckResult("phase-size-bounds", True, "skipped: non-exact targets used"))
    if alg.name in ("is2", "is6"):
        mode = indset.MODE_ARRIVAL if alg.name == "is2" else indset.MODE_DYNAMIC
        rep = indset.working_floor_report(records, mode)
        checks.append(CheckResult("working-floors", rep.all_ok, _report_detail(rep)))
        rep = indset.indset_ratio_report(records, alg.state.degree_bound)
        checks.append(CheckResult("working-vs-output", rep.all_ok, _report_detail(rep)))
        grown_ok = all(
            r.aux["grown"] >= 1
            for r in records
            if r.aux["pre_w"] > indset.OUTPUT_RATIO_FACTOR * alg.state.degree_bound * r.aux["pre_i"]
        )
        checks.append(CheckResult("greedy-addition-claim", grown_ok, ""))
    if alg.name == "sas" and have_opt:
        eps = alg.state.epsilon
        bad = []
        for r in records:
            if r.opt is None:
                continue
            if alg.sense == "min" and r.sol_size > (1 + eps) * r.opt:
                bad.append(r.t)
            if alg.sense == "max" and r.opt > (1 + eps) * r.sol_size:
                bad.append(r.t)
        checks.append(CheckResult("approximation-target", not bad, f"failed at t={bad[:3]}" if bad else ""))
    return records, checks


def _report_detail(rep) -> str:
    if rep.all_ok:
        extra = f", worst ratio {rep.worst_ratio:.3f}" if rep.worst_ratio is not None else ""
        return f"{rep.checked} checks{extra}"
    t, name, detail = rep.failures[0]
    return f"{len(rep.failures)} failures, first: {name} at t={t} ({detail})"
