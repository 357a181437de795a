"""Bounded-recourse dominating-set and independent-set maintenance over
vertex-arrival (and fully-dynamic) graph streams, with exact oracles,
adversarial stream generators, and a replay harness that checks every
stability and size bound per event.
"""

from .adversary import (
    BipartiteExpander,
    ExpanderParams,
    ExpansionResult,
    LowerBoundStream,
    directed_domset_tight_stream,
    domset_lowerbound_stream,
    generate_expander_candidate,
    is_lowerbound_stream,
    star_adversary_stream,
    verify_expansion,
)
from .domset import (
    DirectedDomState,
    PhaseDomState,
    auto_target,
    directed_step,
    greedy_dominating_set,
    greedy_target,
    oracle_target,
    phase_domset_bounds,
    phase_step,
)
from .graph import DynamicGraph, StepDelta, StreamEvent, VertexId
from .harness import (
    RunConfig,
    RunSummary,
    TraceRecord,
    evaluate_bounds,
    read_trace_csv,
    replay,
    run_batch,
    summarize,
    write_trace_csv,
)
from .indset import (
    PhaseIndState,
    greedy_addition,
    indset_ratio_report,
    indset_step,
    select_low_degree_target,
    working_floor_report,
)
from .oracle import (
    DOMSET_BUDGET,
    INDSET_BUDGET,
    OptTrace,
    OracleBudget,
    directed_domination_number,
    domination_number,
    independence_number,
    is_directed_dominating_set,
    is_dominating_set,
    is_independent_set,
    max_independent_set,
    max_independent_set_by_enumeration,
    min_directed_dominating_set,
    min_directed_dominating_set_by_enumeration,
    min_dominating_set,
    min_dominating_set_by_enumeration,
    opt_trace,
)
from .stabilize import (
    ProblemAdapter,
    SwapState,
    max_indset_adapter,
    min_domset_adapter,
    stability_bound,
    swap_step,
)
from .stream import (
    EventStream,
    cycle_stream,
    path_stream,
    random_arrival_stream,
    random_low_avg_stream,
    read_stream,
    replay as replay_stream,
    singleton_stream,
    write_stream,
)

__version__ = "0.1.0"
