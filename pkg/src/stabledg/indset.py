"""Independent-set maintenance on a bounded-degree working subgraph.

The maintainer keeps a working vertex set whose induced maximum degree stays
below 100 times the stream's average-degree bound, migrating toward a fresh
low-degree target in phases, and grows the output independent set greedily
inside it.  Insertion-only mode moves one working vertex per event and adds
at most one output vertex (2 changes/event); fully-dynamic mode moves two
and adds up to three (6 changes/event, counting the forced removal of a
departed vertex).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import AverageDegreeExceeded, ModelViolation, NotIndependent
from .graph import DynamicGraph, StepDelta, StreamEvent, VertexId

DEGREE_CAP_FACTOR = 100   # induced-degree cap is 100 * d
OUTPUT_RATIO_FACTOR = 102  # |working| never exceeds 102 * d * |independent|

MODE_ARRIVAL = "arrival"
MODE_DYNAMIC = "fully-dynamic"


def select_low_degree_target(g: DynamicGraph, d: int) -> frozenset[VertexId]:
    """The ceil(0.99 * |V|) lowest-degree alive vertices (ties: lowest id).

    Requires the current average degree to be at most d; by a counting
    argument the selection then has induced maximum degree at most 100*d.
    """
    n = g.n_alive
    if n == 0:
        return frozenset()
    if 2 * g.edge_count > d * n:
        raise AverageDegreeExceeded(
            f"average degree {2 * g.edge_count}/{n} exceeds the declared bound {d}"
        )
    keep = n - n // 100
    picked = sorted(g.alive, key=lambda v: (g.degree(v), v))[:keep]
    chosen = frozenset(picked)
    cap = DEGREE_CAP_FACTOR * d
    assert all(len(g.adjacency[v] & chosen) <= cap for v in chosen), "induced degree cap violated"
    return chosen


def greedy_addition(g: DynamicGraph, i_star, w_star, max_adds: int) -> StepDelta:
    """Grow an independent set inside w_star, preferring the largest batch.

    With max_adds=1 the lowest addable vertex is taken.  With max_adds=3 the
    lexicographically first independent triple is tried, then a pair, then a
    single vertex.  Only additions are returned.
    """
    if max_adds not in (1, 3):
        raise ValueError("max_adds must be 1 or 3")
    i_star = set(i_star)
    w_star = set(w_star)
    if not i_star <= w_star:
        raise NotIndependent("the independent set is not contained in the working set")
    for v in i_star:
        if g.adjacency[v] & i_star:
            raise NotIndependent(f"vertex {v} conflicts inside the given independent set")
    candidates = sorted(v for v in w_star - i_star if not (g.adjacency[v] & i_star))
    if not candidates:
        return StepDelta.empty()
    if max_adds == 1:
        return StepDelta(added=frozenset((candidates[0],)))
    adj = g.adjacency
    k = len(candidates)
    for a in range(k):
        va = candidates[a]
        for b in range(a + 1, k):
            vb = candidates[b]
            if vb in adj[va]:
                continue
            for c in range(b + 1, k):
                vc = candidates[c]
                if vc not in adj[va] and vc not in adj[vb]:
                    return StepDelta(added=frozenset((va, vb, vc)))
    for a in range(k):
        va = candidates[a]
        for b in range(a + 1, k):
            if candidates[b] not in adj[va]:
                return StepDelta(added=frozenset((va, candidates[b])))
    return StepDelta(added=frozenset((candidates[0],)))


@dataclass
class PhaseIndState:
    mode: str
    degree_bound: int
    working: set[VertexId] = field(default_factory=set)
    pending_add: set[VertexId] = field(default_factory=set)
    pending_remove: set[VertexId] = field(default_factory=set)
    independent: set[VertexId] = field(default_factory=set)
    # aux bookkeeping for traces and the greedy-addition claim
    phase_started: bool = False
    pre_greedy_working: int = 0
    pre_greedy_independent: int = 0
    greedy_added: int = 0

    def __post_init__(self):
        if self.mode not in (MODE_ARRIVAL, MODE_DYNAMIC):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.degree_bound < 1:
            raise ValueError("degree bound must be at least 1")


def indset_step(state: PhaseIndState, g: DynamicGraph, ev: StreamEvent) -> StepDelta:
    """Process one event (already applied to the graph).

    Departures purge the vertex from every internal set first; insertion-only
    mode rejects them.  Working-set deletions run before additions within a
    step, so the induced-degree cap survives phase transitions.
    """
    before = set(state.independent)
    if ev.kind == "del":
        if state.mode == MODE_ARRIVAL:
            raise ModelViolation("insertion-only maintainer received a departure")
        state.working.discard(ev.vertex)
        state.pending_add.discard(ev.vertex)
        state.pending_remove.discard(ev.vertex)
        state.independent.discard(ev.vertex)
    state.phase_started = False
    if not state.pending_add and not state.pending_remove:
        target = select_low_degree_target(g, state.degree_bound)
        state.pending_add = set(target) - state.working
        state.pending_remove = state.working - set(target)
        state.phase_started = True
    batch = 1 if state.mode == MODE_ARRIVAL else 2
    m_rem = min(batch, len(state.pending_remove))
    for w in sorted(state.pending_remove)[:m_rem]:
        state.pending_remove.remove(w)
        state.working.remove(w)
        state.independent.discard(w)
    m_add = min(batch - m_rem, len(state.pending_add))
    for w in sorted(state.pending_add)[:m_add]:
        state.pending_add.remove(w)
        state.working.add(w)
    state.pre_greedy_working = len(state.working)
    state.pre_greedy_independent = len(state.independent)
    grown = greedy_addition(g, state.independent, state.working, 1 if state.mode == MODE_ARRIVAL else 3)
    state.independent |= grown.added
    state.greedy_added = len(grown.added)
    return StepDelta.diff(before, state.independent)


# -- bound reports -------------------------------------------------------------------


def indset_ratio_report(records, d: int):
    """Check |working| <= 102*d*|output| per step, and the oracle ratio when present.

    The oracle check is opt <= (1000/455) * 102 * d * |output|.  A step with an
    empty output but a non-empty working set trips the first check by itself.
    """
    from .domset import BoundsReport

    failures = []
    checked = 0
    worst: Fraction | None = None
    for rec in records:
        w = rec.aux.get("w")
        if w is None:
            continue
        i = rec.sol_size
        checked += 1
        if w > OUTPUT_RATIO_FACTOR * d * i:
            failures.append((rec.t, "working-vs-output bound", f"|W|={w} > {OUTPUT_RATIO_FACTOR * d} * {i}"))
        if i:
            ratio = Fraction(w, i)
            worst = ratio if worst is None else max(worst, ratio)
        if rec.opt is not None:
            checked += 1
            if 455 * rec.opt > 1000 * OUTPUT_RATIO_FACTOR * d * i:
                failures.append((rec.t, "oracle ratio bound", f"opt={rec.opt}, |I|={i}"))
    return BoundsReport(not failures, checked, failures, float(worst) if worst is not None else None)


def working_floor_report(records, mode: str):
    """Check the working-set size floors along a trace.

    Per step the working set holds at least 455/1000 (insertion-only) or
    89/603 (fully-dynamic) of the alive vertices; at each phase start the
    previous step must satisfy the stronger 495/1000 resp. 98/300 floor.
    """
    from .domset import BoundsReport

    per_num, per_den = (455, 1000) if mode == MODE_ARRIVAL else (89, 603)
    start_num, start_den = (495, 1000) if mode == MODE_ARRIVAL else (98, 300)
    failures = []
    checked = 0
    prev = None
    for rec in records:
        w = rec.aux.get("w")
        if w is None:
            continue
        checked += 1
        if per_den * w < per_num * rec.n_alive:
            failures.append((rec.t, "working floor", f"|W|={w}, |V|={rec.n_alive}"))
        if rec.aux.get("phase_start") and prev is not None:
            checked += 1
            if start_den * prev.aux.get("w", 0) < start_num * prev.n_alive:
                failures.append((rec.t, "phase-start working floor", f"|W|={prev.aux.get('w')}, |V|={prev.n_alive}"))
        prev = rec
    return BoundsReport(not failures, checked, failures, None)
