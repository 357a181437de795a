"""Event streams: the JSON Lines file format, replay helpers, random generators.

File format, one event per line:

    {"meta": {"d": 2, "model": "arrival", "desc": "..."}}   <- optional header
    {"op": "add", "v": 0, "nbrs": []}
    {"op": "add", "v": 1, "nbrs": [0]}
    {"op": "del", "v": 0}
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .errors import ParseError
from .graph import DynamicGraph, StreamEvent

MODEL_ARRIVAL = "arrival"
MODEL_DYNAMIC = "fully-dynamic"


@dataclass
class EventStream:
    events: list[StreamEvent] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def model(self) -> str:
        if "model" in self.meta:
            return self.meta["model"]
        return MODEL_DYNAMIC if any(e.kind == "del" for e in self.events) else MODEL_ARRIVAL

    @property
    def degree_bound(self):
        return self.meta.get("d")

    def __len__(self) -> int:
        return len(self.events)


def write_stream(stream: EventStream, path) -> None:
    with open(path, "w") as fh:
        if stream.meta:
            fh.write(json.dumps({"meta": stream.meta}) + "\n")
        for ev in stream.events:
            if ev.is_arrival:
                fh.write(json.dumps({"op": "add", "v": ev.vertex, "nbrs": list(ev.neighbors)}) + "\n")
            else:
                fh.write(json.dumps({"op": "del", "v": ev.vertex}) + "\n")


def read_stream(path) -> EventStream:
    events: list[StreamEvent] = []
    meta: dict = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: not valid JSON: {exc}") from exc
            if "meta" in obj:
                if lineno != 1:
                    raise ParseError(f"{path}:{lineno}: meta header must be the first line")
                meta = obj["meta"]
                continue
            op = obj.get("op")
            if op == "add":
                try:
                    events.append(StreamEvent("add", int(obj["v"]), tuple(int(u) for u in obj.get("nbrs", ()))))
                except (KeyError, TypeError, ValueError) as exc:
                    raise ParseError(f"{path}:{lineno}: malformed add event") from exc
            elif op == "del":
                try:
                    events.append(StreamEvent("del", int(obj["v"])))
                except (KeyError, TypeError, ValueError) as exc:
                    raise ParseError(f"{path}:{lineno}: malformed del event") from exc
            else:
                raise ParseError(f"{path}:{lineno}: unknown op {op!r}")
    return EventStream(events, meta)


def replay(stream: EventStream) -> DynamicGraph:
    """Apply every event, returning the final graph."""
    g = DynamicGraph()
    for ev in stream.events:
        g.apply(ev)
    return g


def iter_replay(stream: EventStream):
    """Yield (timestamp, event, graph) after applying each event in turn."""
    g = DynamicGraph()
    for ev in stream.events:
        t = g.apply(ev)
        yield t, ev, g


# -- generators used by tests and the harness --------------------------------


def random_arrival_stream(n: int, d: int, seed: int) -> EventStream:
    """Arrival-only stream where every vertex arrives with at most d edges."""
    rng = random.Random(seed)
    events = []
    for v in range(n):
        k = rng.randint(0, min(d, v))
        nbrs = tuple(sorted(rng.sample(range(v), k)))
        events.append(StreamEvent("add", v, nbrs))
    meta = {"d": d, "model": MODEL_ARRIVAL, "desc": f"random arrival n={n} d={d} seed={seed}"}
    return EventStream(events, meta)


def random_low_avg_stream(n: int, d: int, seed: int, departure_rate: float = 0.0) -> EventStream:
    """Stream whose graph keeps average degree at most d after every event.

    With a positive departure_rate it mixes in deletions; the departing vertex
    is chosen among those whose removal cannot push the average above d.
    """
    rng = random.Random(seed)
    g = DynamicGraph()
    events = []
    next_id = 0
    arrivals_done = 0
    while arrivals_done < n:
        do_del = departure_rate > 0 and g.n_alive > 1 and rng.random() < departure_rate
        if do_del:
            edges = g.edge_count
            alive = g.n_alive
            # removal keeps 2E' <= d*(n-1) whenever deg(v) >= E/n
            candidates = sorted(v for v in g.alive if g.degree(v) * alive >= edges)
            v = rng.choice(candidates)
            g.apply_departure(v)
            events.append(StreamEvent("del", v))
            continue
        alive = g.n_alive
        k_max = (d * (alive + 1) - 2 * g.edge_count) // 2
        k = rng.randint(0, max(0, min(alive, k_max, 2 * d + 1)))
        nbrs = tuple(sorted(rng.sample(sorted(g.alive), k)))
        g.apply_arrival(next_id, nbrs)
        events.append(StreamEvent("add", next_id, nbrs))
        next_id += 1
        arrivals_done += 1
    model = MODEL_DYNAMIC if departure_rate > 0 else MODEL_ARRIVAL
    meta = {
        "d": d,
        "model": model,
        "desc": f"random avg<=d n={n} d={d} seed={seed} del={departure_rate}",
    }
    return EventStream(events, meta)


def path_stream(n: int) -> EventStream:
    events = [StreamEvent("add", 0)]
    events += [StreamEvent("add", v, (v - 1,)) for v in range(1, n)]
    return EventStream(events, {"d": 2, "model": MODEL_ARRIVAL, "desc": f"path n={n}"})


def cycle_stream(n: int) -> EventStream:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    events = [StreamEvent("add", 0)]
    events += [StreamEvent("add", v, (v - 1,)) for v in range(1, n - 1)]
    events.append(StreamEvent("add", n - 1, (n - 2, 0)))
    return EventStream(events, {"d": 2, "model": MODEL_ARRIVAL, "desc": f"cycle n={n}"})


def singleton_stream(n: int) -> EventStream:
    events = [StreamEvent("add", v) for v in range(n)]
    return EventStream(events, {"d": 1, "model": MODEL_ARRIVAL, "desc": f"singletons n={n}"})
