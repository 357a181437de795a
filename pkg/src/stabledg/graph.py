"""Dynamic graph under vertex arrivals and departures.

A vertex arrives together with edges to already-present vertices; a departing
vertex takes its incident edges with it.  Timestamps are the 1-based event
counter, so all arrival times are distinct by construction.  Departed vertices
keep their arrival record (time and the neighbor list they arrived with) so
arrival-oriented queries stay answerable after the fact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DuplicateVertex,
    EmptyGraph,
    SelfLoop,
    UnknownNeighbor,
    UnknownVertex,
)

VertexId = int


@dataclass(frozen=True)
class StreamEvent:
    """One update: ``add`` carries the neighbor list, ``del`` only the vertex."""

    kind: str
    vertex: VertexId
    neighbors: tuple[VertexId, ...] = ()

    def __post_init__(self):
        if self.kind not in ("add", "del"):
            raise ValueError(f"unknown event kind {self.kind!r}")

    @property
    def is_arrival(self) -> bool:
        return self.kind == "add"


@dataclass(frozen=True)
class StepDelta:
    """Changes an algorithm made to its output set during one event."""

    added: frozenset[VertexId] = frozenset()
    removed: frozenset[VertexId] = frozenset()

    def __post_init__(self):
        if self.added & self.removed:
            raise ValueError("added and removed sets overlap")

    @property
    def stability(self) -> int:
        return len(self.added) + len(self.removed)

    @staticmethod
    def empty() -> "StepDelta":
        return StepDelta()

    @staticmethod
    def diff(before: set, after: set) -> "StepDelta":
        return StepDelta(frozenset(after - before), frozenset(before - after))


class DynamicGraph:
    def __init__(self):
        self.alive: set[VertexId] = set()
        self.arrival_time: dict[VertexId, int] = {}
        self.current_time: int = 0
        self._adj: dict[VertexId, set[VertexId]] = {}
        self._arrival_nbrs: dict[VertexId, tuple[VertexId, ...]] = {}
        self._edge_count: int = 0

    # -- updates -----------------------------------------------------------

    def apply_arrival(self, v: VertexId, nbrs) -> int:
        nbrs = tuple(nbrs)
        if v in self.arrival_time:
            raise DuplicateVertex(f"vertex {v} was already used in this stream")
        if v in nbrs:
            raise SelfLoop(f"vertex {v} lists itself as a neighbor")
        if len(set(nbrs)) != len(nbrs):
            raise UnknownNeighbor(f"vertex {v} arrives with duplicate neighbors")
        for u in nbrs:
            if u not in self.alive:
                raise UnknownNeighbor(f"vertex {v} arrives with unknown neighbor {u}")
        self.current_time += 1
        self.arrival_time[v] = self.current_time
        self._arrival_nbrs[v] = nbrs
        self.alive.add(v)
        self._adj[v] = set(nbrs)
        for u in nbrs:
            self._adj[u].add(v)
        self._edge_count += len(nbrs)
        return self.current_time

    def apply_departure(self, v: VertexId) -> int:
        if v not in self.alive:
            raise UnknownVertex(f"vertex {v} is not alive")
        self.current_time += 1
        self._edge_count -= len(self._adj[v])
        for u in self._adj[v]:
            self._adj[u].discard(v)
        del self._adj[v]
        self.alive.remove(v)
        return self.current_time

    def apply(self, event: StreamEvent) -> int:
        if event.is_arrival:
            return self.apply_arrival(event.vertex, event.neighbors)
        return self.apply_departure(event.vertex)

    # -- queries -----------------------------------------------------------

    def is_alive(self, v: VertexId) -> bool:
        return v in self.alive

    def neighbors(self, v: VertexId) -> set[VertexId]:
        """Current neighbors of an alive vertex.  Treat as read-only."""
        if v not in self.alive:
            raise UnknownVertex(f"vertex {v} is not alive")
        return self._adj[v]

    @property
    def adjacency(self) -> dict[VertexId, set[VertexId]]:
        """Live adjacency map over alive vertices.  Treat as read-only."""
        return self._adj

    def has_edge(self, u: VertexId, v: VertexId) -> bool:
        return u in self.alive and v in self._adj[u]

    def degree(self, v: VertexId) -> int:
        if v not in self.alive:
            raise UnknownVertex(f"vertex {v} is not alive")
        return len(self._adj[v])

    def arrival_degree(self, v: VertexId) -> int:
        if v not in self.arrival_time:
            raise UnknownVertex(f"vertex {v} never arrived")
        return len(self._arrival_nbrs[v])

    def out_closed_neighborhood(self, v: VertexId) -> frozenset[VertexId]:
        """The vertex itself plus the neighbors it arrived with.

        Works for departed vertices too; the arrival record is retained.
        """
        if v not in self.arrival_time:
            raise UnknownVertex(f"vertex {v} never arrived")
        return frozenset((v, *self._arrival_nbrs[v]))

    @property
    def n_alive(self) -> int:
        return len(self.alive)

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def average_degree(self) -> Fraction:
        if not self.alive:
            raise EmptyGraph("average degree of the empty graph is undefined")
        return Fraction(2 * self._edge_count, len(self.alive))

    def max_degree(self) -> int:
        return max((len(self._adj[v]) for v in self.alive), default=0)
