"""Exact solvers used as ground truth for ratio checks and phase targets.

Three problems are supported: minimum dominating set, minimum directed
dominating set (every vertex must be hit inside its arrival-closed
neighborhood), and maximum independent set.

Each problem is backed by two independently written engines:

* a blind subset-enumeration engine, obviously correct but only viable on
  small instances, kept around to cross-validate the fast path;
* a branch-and-bound engine seeded with a greedy bound, decomposed over
  connected components.

All solvers break ties toward the lexicographically smallest sorted
vertex-id tuple among optimal solutions, so phase algorithms that consume
their output are replayable.  Solvers refuse instances above the configured
vertex budget instead of silently degrading.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import BudgetExceeded
from .graph import DynamicGraph
from .stream import EventStream

PROBLEM_DOMSET = "domset"
PROBLEM_INDSET = "indset"
PROBLEM_DIRECTED = "directed-domset"

_ENUM_COMPONENT_CAP = 14
_ENUM_ENGINE_CAP = 16


@dataclass(frozen=True)
class OracleBudget:
    max_vertices: int = 24
    max_nodes_explored: int = 5_000_000


DOMSET_BUDGET = OracleBudget(max_vertices=24)
INDSET_BUDGET = OracleBudget(max_vertices=40)


# -- independent feasibility checkers ----------------------------------------


def is_dominating_set(g: DynamicGraph, chosen) -> bool:
    chosen = set(chosen)
    if not chosen <= g.alive:
        return False
    for v in g.alive:
        if v not in chosen and not (g.adjacency[v] & chosen):
            return False
    return True


def is_independent_set(g: DynamicGraph, chosen) -> bool:
    chosen = set(chosen)
    if not chosen <= g.alive:
        return False
    return all(not (g.adjacency[v] & chosen) for v in chosen)


def is_directed_dominating_set(g: DynamicGraph, chosen) -> bool:
    chosen = set(chosen)
    if not chosen <= g.alive:
        return False
    return all(g.out_closed_neighborhood(v) & chosen for v in g.alive)


# -- generic minimum-cover machinery ------------------------------------------
#
# Both dominating-set flavors are instances of: pick the fewest vertices such
# that every alive vertex has one of its "coverers" picked.


def _domset_instance(g: DynamicGraph):
    coverers_of = {}
    cover = {}
    for v in g.alive:
        closed = frozenset(g.adjacency[v] | {v})
        coverers_of[v] = closed
        cover[v] = closed  # symmetric: v covers exactly its closed neighborhood
    return coverers_of, cover


def _directed_instance(g: DynamicGraph):
    coverers_of = {}
    cover = {v: set() for v in g.alive}
    for v in g.alive:
        opts = frozenset(g.out_closed_neighborhood(v) & g.alive)
        coverers_of[v] = opts
        for c in opts:
            cover[c].add(v)
    return coverers_of, {c: frozenset(s) for c, s in cover.items()}


def _cover_components(elements, coverers_of):
    seen = set()
    comps = []
    neighbors = {e: set() for e in elements}
    for e in elements:
        for c in coverers_of[e]:
            neighbors[e].add(c)
            neighbors[c].add(e)
    for start in sorted(elements):
        if start in seen:
            continue
        comp = set()
        stack = [start]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            comp.add(x)
            stack.extend(neighbors[x] - seen)
        comps.append(comp)
    return comps


def _greedy_cover(cands, cover, universe):
    uncovered = set(universe)
    chosen = []
    while uncovered:
        best = max(cands, key=lambda c: (len(cover[c] & uncovered), -c))
        gain = cover[best] & uncovered
        if not gain:
            raise AssertionError("uncoverable element; instance is inconsistent")
        chosen.append(best)
        uncovered -= gain
    return chosen


class _NodeCounter:
    __slots__ = ("nodes", "cap")

    def __init__(self, cap):
        self.nodes = 0
        self.cap = cap

    def tick(self):
        self.nodes += 1
        if self.nodes > self.cap:
            raise BudgetExceeded(f"search exceeded {self.cap} explored nodes")


def _bb_cover_size(cands, cover, coverers_of, universe, counter) -> int:
    best = len(_greedy_cover(cands, cover, universe))

    def dfs(count, uncovered, banned):
        nonlocal best
        counter.tick()
        if not uncovered:
            best = min(best, count)
            return
        avail_cov = [len(cover[c] & uncovered) for c in cands if c not in banned]
        max_cov = max(avail_cov, default=0)
        if max_cov == 0:
            return
        if count + -(-len(uncovered) // max_cov) >= best:
            return
        elem = min(uncovered, key=lambda e: (len(coverers_of[e] - banned), e))
        local_ban = set(banned)
        for c in sorted(coverers_of[elem]):
            if c in local_ban:
                continue
            dfs(count + 1, uncovered - cover[c], local_ban)
            local_ban.add(c)

    dfs(0, frozenset(universe), frozenset())
    return best


def _lex_cover_witness(cands_sorted, cover, coverers_of, universe, size, counter):
    """Lexicographically first size-`size` cover, found by ordered backtracking."""
    index = {c: i for i, c in enumerate(cands_sorted)}
    last_chance = {e: max(index[c] for c in coverers_of[e]) for e in universe}
    chosen = []
    n = len(cands_sorted)

    def dfs(start, uncovered):
        counter.tick()
        if not uncovered:
            # covering with fewer picks would contradict `size` being optimal
            assert len(chosen) == size, "covered below the claimed optimum size"
            return True
        if len(chosen) == size:
            return False
        for e in uncovered:
            if last_chance[e] < start:
                return False
        max_cov = max((len(cover[cands_sorted[i]] & uncovered) for i in range(start, n)), default=0)
        if max_cov == 0 or -(-len(uncovered) // max_cov) > size - len(chosen):
            return False
        for i in range(start, n):
            chosen.append(cands_sorted[i])
            if dfs(i + 1, uncovered - cover[cands_sorted[i]]):
                return True
            chosen.pop()
        return False

    if dfs(0, frozenset(universe)):
        return frozenset(chosen)
    raise AssertionError(f"no cover of size {size} found")


def _enum_cover_component(cands_sorted, cover, universe):
    full = frozenset(universe)
    for k in range(len(cands_sorted) + 1):
        for combo in combinations(cands_sorted, k):
            covered = set()
            for c in combo:
                covered |= cover[c]
            if full <= covered:
                return frozenset(combo)
    raise AssertionError("component admits no cover at all")


def _solve_min_cover(g: DynamicGraph, instance_builder, budget: OracleBudget) -> frozenset:
    if g.n_alive > budget.max_vertices:
        raise BudgetExceeded(f"{g.n_alive} vertices exceed the oracle budget of {budget.max_vertices}")
    if not g.alive:
        return frozenset()
    coverers_of, cover = instance_builder(g)
    counter = _NodeCounter(budget.max_nodes_explored)
    result: set[int] = set()
    for comp in _cover_components(g.alive, coverers_of):
        cands = sorted(comp)
        comp_cover = {c: cover[c] & comp for c in cands}
        comp_coverers = {e: frozenset(coverers_of[e] & comp) for e in comp}
        if len(comp) <= _ENUM_COMPONENT_CAP:
            result |= _enum_cover_component(cands, comp_cover, comp)
        else:
            size = _bb_cover_size(cands, comp_cover, comp_coverers, comp, counter)
            result |= _lex_cover_witness(cands, comp_cover, comp_coverers, comp, size, counter)
    return frozenset(result)


# -- maximum independent set ---------------------------------------------------


def _graph_components(g: DynamicGraph):
    seen = set()
    comps = []
    for start in sorted(g.alive):
        if start in seen:
            continue
        comp = set()
        stack = [start]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            comp.add(x)
            stack.extend(g.adjacency[x] - seen)
        comps.append(comp)
    return comps


def _greedy_matching_size(active, adj):
    matched = set()
    size = 0
    for v in sorted(active):
        if v in matched:
            continue
        for u in adj[v]:
            if u in active and u not in matched and u != v:
                matched.add(v)
                matched.add(u)
                size += 1
                break
    return size


def _mis_size_component(comp, adj, counter) -> int:
    best = 0

    def reduce_and_branch(active, count):
        nonlocal best
        counter.tick()
        active = set(active)
        # degree-0 and degree-1 vertices can always be taken
        changed = True
        while changed:
            changed = False
            for v in list(active):
                if v not in active:
                    continue
                live_nbrs = adj[v] & active
                if not live_nbrs:
                    active.remove(v)
                    count += 1
                    changed = True
                elif len(live_nbrs) == 1:
                    u = next(iter(live_nbrs))
                    active.discard(v)
                    active.discard(u)
                    count += 1
                    changed = True
        if not active:
            best = max(best, count)
            return
        if count + len(active) - _greedy_matching_size(active, adj) <= best:
            return
        v = max(active, key=lambda x: (len(adj[x] & active), -x))
        reduce_and_branch(active - {v} - adj[v], count + 1)
        reduce_and_branch(active - {v}, count)

    reduce_and_branch(comp, 0)
    return best


def _lex_mis_witness(comp, adj, size, counter):
    order = sorted(comp)
    chosen = []

    def dfs(start, compatible):
        counter.tick()
        if len(chosen) == size:
            return True
        pool = [v for v in order[start:] if v in compatible]
        need = size - len(chosen)
        if len(pool) - _greedy_matching_size(set(pool), adj) < need:
            return False
        for v in pool:
            chosen.append(v)
            if dfs(order.index(v) + 1, (compatible - {v}) - adj[v]):
                return True
            chosen.pop()
        return False

    if dfs(0, set(comp)):
        return frozenset(chosen)
    raise AssertionError(f"no independent set of size {size} found")


def _enum_mis_component(comp, adj):
    order = sorted(comp)
    for k in range(len(order), -1, -1):
        for combo in combinations(order, k):
            s = set(combo)
            if all(not (adj[v] & s) for v in combo):
                return frozenset(combo)
    return frozenset()


def max_independent_set(g: DynamicGraph, budget: OracleBudget | None = None) -> frozenset:
    budget = budget or INDSET_BUDGET
    if g.n_alive > budget.max_vertices:
        raise BudgetExceeded(f"{g.n_alive} vertices exceed the oracle budget of {budget.max_vertices}")
    counter = _NodeCounter(budget.max_nodes_explored)
    result: set[int] = set()
    for comp in _graph_components(g):
        if len(comp) <= _ENUM_COMPONENT_CAP:
            result |= _enum_mis_component(comp, g.adjacency)
        else:
            size = _mis_size_component(comp, g.adjacency, counter)
            result |= _lex_mis_witness(comp, g.adjacency, size, counter)
    out = frozenset(result)
    assert is_independent_set(g, out)
    return out


def independence_number(g: DynamicGraph, budget: OracleBudget | None = None) -> int:
    budget = budget or INDSET_BUDGET
    if g.n_alive > budget.max_vertices:
        raise BudgetExceeded(f"{g.n_alive} vertices exceed the oracle budget of {budget.max_vertices}")
    counter = _NodeCounter(budget.max_nodes_explored)
    total = 0
    for comp in _graph_components(g):
        total += _mis_size_component(comp, g.adjacency, counter)
    return total


# -- public dominating-set API --------------------------------------------------


def min_dominating_set(g: DynamicGraph, budget: OracleBudget | None = None) -> frozenset:
    out = _solve_min_cover(g, _domset_instance, budget or DOMSET_BUDGET)
    assert is_dominating_set(g, out)
    return out


def min_directed_dominating_set(g: DynamicGraph, budget: OracleBudget | None = None) -> frozenset:
    out = _solve_min_cover(g, _directed_instance, budget or DOMSET_BUDGET)
    assert is_directed_dominating_set(g, out)
    return out


def domination_number(g: DynamicGraph, budget: OracleBudget | None = None) -> int:
    return len(min_dominating_set(g, budget))


def directed_domination_number(g: DynamicGraph, budget: OracleBudget | None = None) -> int:
    return len(min_directed_dominating_set(g, budget))


# -- blind enumeration engines (cross-validation oracles) -----------------------
#
# No components, no pruning, no shared machinery beyond the checkers; first
# covering subset in (size, lexicographic) order is returned.


def min_dominating_set_by_enumeration(g: DynamicGraph, cap: int = _ENUM_ENGINE_CAP) -> frozenset:
    if g.n_alive > cap:
        raise BudgetExceeded(f"enumeration engine capped at {cap} vertices")
    verts = sorted(g.alive)
    for k in range(len(verts) + 1):
        for combo in combinations(verts, k):
            if is_dominating_set(g, combo):
                return frozenset(combo)
    return frozenset()


def min_directed_dominating_set_by_enumeration(g: DynamicGraph, cap: int = _ENUM_ENGINE_CAP) -> frozenset:
    if g.n_alive > cap:
        raise BudgetExceeded(f"enumeration engine capped at {cap} vertices")
    verts = sorted(g.alive)
    for k in range(len(verts) + 1):
        for combo in combinations(verts, k):
            if is_directed_dominating_set(g, combo):
                return frozenset(combo)
    return frozenset()


def max_independent_set_by_enumeration(g: DynamicGraph, cap: int = _ENUM_ENGINE_CAP) -> frozenset:
    if g.n_alive > cap:
        raise BudgetExceeded(f"enumeration engine capped at {cap} vertices")
    verts = sorted(g.alive)
    for k in range(len(verts), -1, -1):
        for combo in combinations(verts, k):
            if is_independent_set(g, combo):
                return frozenset(combo)
    return frozenset()


# -- per-event optimum traces ----------------------------------------------------


@dataclass
class OptTrace:
    values: list[int]
    running_max: list[int]


_VALUE_FN = {
    PROBLEM_DOMSET: domination_number,
    PROBLEM_DIRECTED: directed_domination_number,
    PROBLEM_INDSET: independence_number,
}


def opt_trace(stream: EventStream, problem: str, budget: OracleBudget | None = None) -> OptTrace:
    """Exact optimum after every event, together with its running maximum.

    Raises BudgetExceeded as soon as a prefix graph outgrows the budget; the
    exception carries the values solved so far in its ``partial`` attribute.
    """
    if problem not in _VALUE_FN:
        raise ValueError(f"unknown problem {problem!r}")
    fn = _VALUE_FN[problem]
    g = DynamicGraph()
    values: list[int] = []
    running: list[int] = []
    for ev in stream.events:
        g.apply(ev)
        try:
            val = fn(g, budget)
        except BudgetExceeded as exc:
            exc.partial = OptTrace(values, running)
            raise
        values.append(val)
        running.append(val if not running else max(running[-1], val))
    return OptTrace(values, running)
