"""Generic bounded-swap maintainer for continuous vertex-selection problems.

Given a feasibility predicate, an exact-optimum hook, and a continuity
constant (how much the optimum can move per arrival), the maintainer repairs
feasibility on arrival and then applies size-capped replacement swaps until
the solution is a (1+epsilon)-approximation again.  Per-event changes are
bounded by (ceil((1+eps)*c)+1)*(2f-1) for minimization and c*(2f+1) for
maximization, where c is the continuity constant and f the swap size cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable

from .errors import ContinuityViolated, NoImprovingSwap
from .graph import DynamicGraph, StepDelta, VertexId
from .oracle import (
    OracleBudget,
    domination_number,
    independence_number,
    is_dominating_set,
    is_independent_set,
)

SENSE_MIN = "min"
SENSE_MAX = "max"


@dataclass(frozen=True)
class ProblemAdapter:
    name: str
    sense: str
    feasible: Callable[[DynamicGraph, set], bool]
    opt: Callable[[DynamicGraph], int]
    continuity: int


def min_domset_adapter(arrival_degree: int, budget: OracleBudget | None = None) -> ProblemAdapter:
    # optimum can rise by 1 or fall by arrival_degree - 1 per arrival
    return ProblemAdapter(
        name="min-ds",
        sense=SENSE_MIN,
        feasible=is_dominating_set,
        opt=lambda g: domination_number(g, budget),
        continuity=max(1, arrival_degree - 1),
    )


def max_indset_adapter(budget: OracleBudget | None = None) -> ProblemAdapter:
    return ProblemAdapter(
        name="max-is",
        sense=SENSE_MAX,
        feasible=is_independent_set,
        opt=lambda g: independence_number(g, budget),
        continuity=1,
    )


@dataclass
class SwapState:
    epsilon: Fraction
    swap_cap: int
    solution: set[VertexId] = field(default_factory=set)
    prev_opt: int | None = None
    last_iterations: int = 0

    def __post_init__(self):
        self.epsilon = Fraction(self.epsilon)
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.swap_cap < 1:
            raise ValueError("the swap size cap must be at least 1")


def stability_bound(adapter: ProblemAdapter, epsilon, swap_cap: int) -> int:
    """Worst-case changes per event for the configured parameters."""
    eps = Fraction(epsilon)
    if adapter.sense == SENSE_MIN:
        return (math.ceil((1 + eps) * adapter.continuity) + 1) * (2 * swap_cap - 1)
    return adapter.continuity * (2 * swap_cap + 1)


def _approx_ok(sense: str, size: int, opt: int, eps: Fraction) -> bool:
    if sense == SENSE_MIN:
        return size <= (1 + eps) * opt
    return opt <= (1 + eps) * size


def _find_swap(state: SwapState, adapter: ProblemAdapter, g: DynamicGraph):
    """First feasible improving swap, scanning by |S_old| then lexicographically."""
    sol = state.solution
    inside = sorted(sol)
    outside = sorted(g.alive - sol)
    lo = 1 if adapter.sense == SENSE_MIN else 0
    for size_old in range(lo, state.swap_cap + 1):
        size_new = size_old - 1 if adapter.sense == SENSE_MIN else size_old + 1
        if size_new > len(outside):
            continue
        for olds in combinations(inside, size_old):
            base = sol - set(olds)
            for news in combinations(outside, size_new):
                candidate = base | set(news)
                if adapter.feasible(g, candidate):
                    return frozenset(olds), frozenset(news)
    return None


def swap_step(state: SwapState, adapter: ProblemAdapter, g: DynamicGraph, v: VertexId) -> StepDelta:
    """Process one arrival: repair feasibility, then swap until approximate.

    Raises NoImprovingSwap when the approximation target is missed and no
    swap within the size cap restores it (the honest failure mode when the
    cap is too small for the instance class), and ContinuityViolated when
    the optimum jumps by more than the adapter's continuity constant.
    """
    before = set(state.solution)
    if adapter.sense == SENSE_MIN:
        state.solution.add(v)
    opt = adapter.opt(g)
    if state.prev_opt is not None and abs(opt - state.prev_opt) > adapter.continuity:
        raise ContinuityViolated(
            f"optimum moved from {state.prev_opt} to {opt}, continuity constant is {adapter.continuity}"
        )
    state.prev_opt = opt
    state.last_iterations = 0
    while not _approx_ok(adapter.sense, len(state.solution), opt, state.epsilon):
        swap = _find_swap(state, adapter, g)
        if swap is None:
            raise NoImprovingSwap(
                f"no feasible swap of size <= {state.swap_cap} improves a solution of size {len(state.solution)}"
            )
        olds, news = swap
        state.solution -= olds
        state.solution |= news
        state.last_iterations += 1
    return StepDelta.diff(before, state.solution)
