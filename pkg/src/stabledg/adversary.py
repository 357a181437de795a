"""Adversarial stream constructions and expander building blocks.

The generators here produce the hard instances used to probe maintenance
algorithms: a bipartite expander pipeline (random 3-regular bipartite graphs
with a spread-out deleted transversal), the layered arrival stream on which
any low-recourse dominating-set maintainer must pay, the two-wave arrival
stream that forces independent-set maintainers to migrate across the
bipartition, the arrival order on which the 1-stable dominating-set
maintainer ends a factor d^2 away from optimal, and the star stream that
separates one change per event from two.

Everything is deterministic for a fixed seed; structural properties
(degree caps, transversal spacing, expansion up to an enumerable subset
size) are verified by brute force rather than assumed.
"""

from __future__ import annotations

import logging
import math
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConfigModelStuck, SelectionFailed, TooLarge, WiringInfeasible
from .graph import StreamEvent
from .stream import MODEL_ARRIVAL, EventStream

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

_CONFIG_MODEL_ATTEMPTS = 5000
_VERIFY_NODE_CAP = 2_000_000


@dataclass(frozen=True)
class ExpanderParams:
    n: int
    epsilon: float
    mu: float
    delta: float
    t_radius: int


@dataclass
class BipartiteExpander:
    """Bipartite graph with the larger side `left` and expansion left-to-right."""

    left: list[int]
    right: list[int]
    edges: list[tuple[int, int]]
    params: ExpanderParams
    provenance: dict = field(default_factory=dict)

    def left_neighbors(self) -> dict[int, set[int]]:
        nbrs = {l: set() for l in self.left}
        for l, r in self.edges:
            nbrs[l].add(r)
        return nbrs

    def right_neighbors(self) -> dict[int, set[int]]:
        nbrs = {r: set() for r in self.right}
        for l, r in self.edges:
            nbrs[r].add(l)
        return nbrs

    def max_degree(self) -> int:
        deg: dict[int, int] = {}
        for l, r in self.edges:
            deg[l] = deg.get(l, 0) + 1
            deg[r] = deg.get(r, 0) + 1
        return max(deg.values(), default=0)


@dataclass
class ExpansionResult:
    certified: bool
    counterexample: tuple[frozenset, frozenset] | None
    subsets_checked: int

    def __bool__(self) -> bool:
        return self.certified


@dataclass
class LowerBoundStream:
    stream: EventStream
    landmarks: dict[str, int]
    layers: dict[int, str]


# -- expander generation ---------------------------------------------------------


def _ceil_frac(num: int, den: int) -> int:
    return -(-num // den)


def _ball_in_parent(a_adj, b_adj, start_a: int, radius: int) -> set[int]:
    """A-side vertices within the given distance of an A-side start vertex."""
    seen = {("A", start_a)}
    frontier = deque([(("A", start_a), 0)])
    reach = {start_a}
    while frontier:
        (side, x), dist = frontier.popleft()
        if dist == radius:
            continue
        nxt = a_adj[x] if side == "A" else b_adj[x]
        other = "B" if side == "A" else "A"
        for y in nxt:
            key = (other, y)
            if key not in seen:
                seen.add(key)
                if other == "A":
                    reach.add(y)
                frontier.append((key, dist + 1))
    return reach


def _select_spread_transversal(a_adj, b_adj, m: int, count: int, radius: int):
    """Greedily pick `count` A-vertices pairwise further than 2*radius apart."""
    chosen: list[int] = []
    forbidden: set[int] = set()
    for a in range(m):
        if a in forbidden:
            continue
        chosen.append(a)
        if len(chosen) == count:
            return chosen
        forbidden |= _ball_in_parent(a_adj, b_adj, a, 2 * radius)
    return None


def generate_expander_candidate(
    n: int,
    epsilon,
    mu: float,
    seed: int,
    delta: float = 0.1,
    t_radius: int | None = None,
) -> BipartiteExpander:
    """Random candidate for a degree-3 bipartite expander.

    Builds a 3-regular bipartite parent graph on two sides of n + ceil(eps*n)
    vertices from three rejection-sampled permutations, then removes a
    transversal of ceil(eps*n) spread-out vertices from one side.  The spacing
    radius defaults to ceil(1/mu)+1; when that is infeasible at the given
    size (it usually is, far below asymptotic scales) the radius is halved
    deterministically until selection succeeds, and the effective value is
    recorded in the returned params.  Passing t_radius explicitly disables
    the fallback and raises SelectionFailed instead.
    """
    if n < 4:
        raise ValueError("need n >= 4")
    eps = Fraction(str(epsilon)) if isinstance(epsilon, float) else Fraction(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    t_count = _ceil_frac(eps.numerator * n, eps.denominator)
    m = n + t_count
    rng = random.Random(seed)

    perms = None
    for _ in range(_CONFIG_MODEL_ATTEMPTS):
        cand = []
        for _ in range(3):
            p = list(range(m))
            rng.shuffle(p)
            cand.append(p)
        simple = all(
            cand[0][i] != cand[1][i] and cand[0][i] != cand[2][i] and cand[1][i] != cand[2][i]
            for i in range(m)
        )
        if simple:
            perms = cand
            break
    if perms is None:
        raise ConfigModelStuck(f"no simple 3-regular bipartite graph after {_CONFIG_MODEL_ATTEMPTS} attempts")

    a_adj = {a: {perms[k][a] for k in range(3)} for a in range(m)}
    b_adj: dict[int, set[int]] = {b: set() for b in range(m)}
    for a in range(m):
        for b in a_adj[a]:
            b_adj[b].add(a)

    t_requested = t_radius if t_radius is not None else math.ceil(1 / mu) + 1
    radii = [t_requested] if t_radius is not None else _halving(t_requested)
    transversal = None
    t_effective = None
    for radius in radii:
        transversal = _select_spread_transversal(a_adj, b_adj, m, t_count, radius)
        if transversal is not None:
            t_effective = radius
            break
    if transversal is None:
        raise SelectionFailed(
            f"could not pick {t_count} vertices pairwise further than 2*{t_requested} apart; retry with a new seed"
        )
    if math.log(float(eps)) > -(2 * t_effective + 1) * math.log(3):
        log.warning(
            "epsilon=%s exceeds the asymptotic guideline 3^-(2t+1) for t=%d; desk-scale candidate only",
            epsilon,
            t_effective,
        )

    kept = sorted(set(range(m)) - set(transversal))
    right_id = {a: m + i for i, a in enumerate(kept)}
    edges = [(b, right_id[a]) for a in kept for b in sorted(a_adj[a])]
    exp = BipartiteExpander(
        left=list(range(m)),
        right=[m + i for i in range(len(kept))],
        edges=sorted(edges),
        params=ExpanderParams(n=n, epsilon=float(eps), mu=mu, delta=delta, t_radius=t_effective),
        provenance={
            "seed": seed,
            "t_requested": t_requested,
            "t_effective": t_effective,
            "transversal": transversal,
            "parent_edges": sorted((a, b) for a in range(m) for b in a_adj[a]),
        },
    )
    assert len(exp.left) == m and len(exp.right) == n
    assert exp.max_degree() <= 3
    return exp


def _halving(t0: int) -> list[int]:
    out = []
    t = max(t0, 1)
    while t >= 1:
        out.append(t)
        if t == 1:
            break
        t //= 2
    out.append(0)
    return out


def transversal_spacing_ok(exp: BipartiteExpander) -> bool:
    """Brute-force check that the removed transversal respects its spacing."""
    prov = exp.provenance
    if not prov:
        return False
    m = len(exp.left)
    a_adj: dict[int, set[int]] = {a: set() for a in range(m)}
    b_adj: dict[int, set[int]] = {b: set() for b in range(m)}
    for a, b in prov["parent_edges"]:
        a_adj[a].add(b)
        b_adj[b].add(a)
    radius = prov["t_effective"]
    members = prov["transversal"]
    for a in members:
        ball = _ball_in_parent(a_adj, b_adj, a, 2 * radius)
        if any(other != a and other in ball for other in members):
            return False
    return True


# -- expansion verification --------------------------------------------------------


def verify_expansion(exp: BipartiteExpander, size_cap: int, factor) -> ExpansionResult:
    """Exhaustively certify |N(S)| >= factor * |S| for all S in the left side
    with 1 <= |S| <= size_cap, or return the first violating subset.

    Only subsets connected through shared right-neighbors need checking: the
    neighborhood of a subset splits additively over such components, so a
    minimal violator is always connected in that sense.
    """
    if size_cap < 1:
        raise ValueError("size_cap must be at least 1")
    if size_cap > 12:
        raise TooLarge("subset enumeration is limited to size_cap <= 12")
    frac = Fraction(str(factor)) if isinstance(factor, float) else Fraction(factor)
    lnbrs = exp.left_neighbors()
    rnbrs = exp.right_neighbors()
    square: dict[int, set[int]] = {l: set() for l in exp.left}
    for r, incident in rnbrs.items():
        inc = sorted(incident)
        for i, a in enumerate(inc):
            for b in inc[i + 1 :]:
                square[a].add(b)
                square[b].add(a)

    checked = 0
    counterexample = None

    def violates(size: int, nbr_count: int) -> bool:
        return nbr_count * frac.denominator < frac.numerator * size

    def grow(start, members, nbrs, banned):
        nonlocal checked, counterexample
        checked += 1
        if checked > _VERIFY_NODE_CAP:
            raise TooLarge(f"expansion check exceeded {_VERIFY_NODE_CAP} subsets")
        if violates(len(members), len(nbrs)):
            counterexample = (frozenset(members), frozenset(nbrs))
            return True
        if len(members) == size_cap:
            return False
        if not violates(size_cap, len(nbrs)):
            return False  # neighborhoods only grow; no extension can violate
        ext = sorted(
            {v for u in members for v in square[u] if v > start and v not in members and v not in banned}
        )
        local_ban = set(banned)
        for v in ext:
            if grow(start, members | {v}, nbrs | lnbrs[v], local_ban):
                return True
            local_ban.add(v)
        return False

    for start in sorted(exp.left):
        if grow(start, {start}, set(lnbrs[start]), set()):
            return ExpansionResult(False, counterexample, checked)
    return ExpansionResult(True, None, checked)


# -- lower-bound streams ----------------------------------------------------------


def is_lowerbound_stream(exp: BipartiteExpander) -> LowerBoundStream:
    """Two-wave arrival order for independent set: the small side arrives as
    singletons, then the large side arrives carrying its expander edges."""
    lnbrs = exp.left_neighbors()
    events = [StreamEvent("add", r) for r in sorted(exp.right)]
    for l in sorted(exp.left):
        events.append(StreamEvent("add", l, tuple(sorted(lnbrs[l]))))
    layers = {r: "R" for r in exp.right}
    layers.update({l: "L" for l in exp.left})
    d = max((len(ev.neighbors) for ev in events), default=0)
    stream = EventStream(
        events,
        {"d": max(d, 1), "model": MODEL_ARRIVAL, "desc": f"is lower bound |L|={len(exp.left)} |R|={len(exp.right)}"},
    )
    return LowerBoundStream(stream, {"t_final": len(events)}, layers)


def domset_lowerbound_stream(exp: BipartiteExpander) -> LowerBoundStream:
    """Five-wave arrival order for dominating set.

    Three chains of anchor vertices (one chain cell per left expander vertex),
    then per left vertex a bag with one vertex per expander edge hanging off
    the chain, then the right side arrives: each right vertex picks up, for
    every incident expander edge, one still-unclaimed vertex of that bag, so
    every bag vertex ends with exactly one last-wave neighbor; each right
    vertex also attaches to the chain cell of its own index.
    """
    left_sorted = sorted(exp.left)
    right_sorted = sorted(exp.right)
    lnbrs = exp.left_neighbors()
    rnbrs = exp.right_neighbors()
    big = len(left_sorted)
    n_right = len(right_sorted)
    left_index = {l: i for i, l in enumerate(left_sorted)}

    u_id = list(range(big))
    v_id = list(range(big, 2 * big))
    w_id = list(range(2 * big, 3 * big))
    events = [StreamEvent("add", u_id[i]) for i in range(big)]
    events += [StreamEvent("add", v_id[i], (u_id[i],)) for i in range(big)]
    events += [StreamEvent("add", w_id[i], (v_id[i],)) for i in range(big)]
    layers = {u_id[i]: "u" for i in range(big)}
    layers.update({v_id[i]: "v" for i in range(big)})
    layers.update({w_id[i]: "w" for i in range(big)})

    next_id = 3 * big
    bags: list[list[int]] = []
    for i, l in enumerate(left_sorted):
        bag = []
        for _ in range(len(lnbrs[l])):
            events.append(StreamEvent("add", next_id, (w_id[i],)))
            layers[next_id] = "bag"
            bag.append(next_id)
            next_id += 1
        bags.append(bag)
    t1 = len(events)

    unclaimed = [deque(bag) for bag in bags]
    for j, r in enumerate(right_sorted):
        picked = []
        for l in sorted(rnbrs[r], key=left_index.get):
            pool = unclaimed[left_index[l]]
            if not pool:
                raise WiringInfeasible(f"bag of left vertex {l} ran out of unclaimed vertices")
            picked.append(pool.popleft())
        events.append(StreamEvent("add", next_id, tuple(sorted(picked + [v_id[j]]))))
        layers[next_id] = "r"
        next_id += 1
    if any(pool for pool in unclaimed):
        raise WiringInfeasible("some bag vertices never received a last-wave neighbor")
    t2 = len(events)

    d = max(len(ev.neighbors) for ev in events)
    stream = EventStream(
        events,
        {"d": d, "model": MODEL_ARRIVAL, "desc": f"domset lower bound |L|={big} |R|={n_right}"},
    )
    return LowerBoundStream(stream, {"t1": t1, "t2": t2}, layers)


def directed_domset_tight_stream(d: int) -> EventStream:
    """Arrival order on which the 1-stable maintainer ends at d^2+2 vertices
    while three vertices dominate everything.

    Wiring: two anchors arrive first; d^2 spoke vertices attach to the first
    anchor; d hub vertices claim disjoint d-blocks of spokes; d(d-1) prod
    vertices attach to one fresh spoke each plus the second anchor; one cover
    vertex attaches to all hubs (it arrives dominated, so the maintainer
    ignores it); a final trigger vertex attaches to the second anchor only.
    Every arrival degree is at most d.
    """
    if d < 2:
        raise ValueError("need d >= 2")
    a1, a2 = 0, 1
    v_ids = list(range(2, 2 + d * d))
    w_ids = list(range(2 + d * d, 2 + d * d + d))
    x_base = 2 + d * d + d
    x_ids = list(range(x_base, x_base + d * (d - 1)))
    y_id = x_base + d * (d - 1)
    z_id = y_id + 1

    events = [StreamEvent("add", a1), StreamEvent("add", a2, (a1,))]
    events += [StreamEvent("add", v, (a1,)) for v in v_ids]
    for j in range(d):
        block = tuple(v_ids[j * d : (j + 1) * d])
        events.append(StreamEvent("add", w_ids[j], block))
    for k, x in enumerate(x_ids):
        events.append(StreamEvent("add", x, (a2, v_ids[k])))
    events.append(StreamEvent("add", y_id, tuple(w_ids)))
    events.append(StreamEvent("add", z_id, (a2,)))
    return EventStream(
        events,
        {"d": d, "model": MODEL_ARRIVAL, "desc": f"directed-domset tight example d={d}"},
    )


def star_adversary_stream(n: int) -> EventStream:
    """A growing star: the center arrives first, then n-1 leaves attach to it."""
    if n < 2:
        raise ValueError("need n >= 2")
    events = [StreamEvent("add", 0)]
    events += [StreamEvent("add", v, (0,)) for v in range(1, n)]
    return EventStream(events, {"d": 2, "model": MODEL_ARRIVAL, "desc": f"star n={n}"})
