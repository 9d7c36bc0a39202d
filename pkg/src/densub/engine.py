"""Round-synchronous execution of per-vertex programs in LOCAL or CONGEST.

The generic `run` loop delivers messages edge by edge with exact bit
accounting and deterministic results regardless of the order vertices are
stepped in. LOCAL-model neighborhood gossip and spanning-tree aggregates are
provided as engine primitives: their per-vertex results are computed
directly from the graph while rounds and bits are charged according to the
fixed protocol they stand for (see the respective docstrings).
"""

from __future__ import annotations

import os
import random as _random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .graphs import Graph

__all__ = [
    "SimConfig",
    "RoundTrace",
    "VertexContext",
    "VertexProgram",
    "CongestViolation",
    "MaxRoundsExceeded",
    "msg_bits",
    "run",
    "knowledge_states",
    "collect_ball",
    "component_min",
    "component_or",
    "component_sum",
    "component_aggregate",
]

LOCAL = "LOCAL"
CONGEST = "CONGEST"

_MIX1 = 0x9E3779B97F4A7C15
_MIX2 = 0xBF58476D1CE4E5B9
_MIX3 = 0x94D049BB133111EB
_MASK64 = (1 << 64) - 1


def _default_max_rounds() -> int:
    env = os.environ.get("SIM_MAX_ROUNDS")
    return int(env) if env else 1_000_000


@dataclass
class SimConfig:
    """Execution parameters for the simulator.

    The CONGEST cap is congest_cap_words * ceil(log2 n) bits per edge per
    direction per round; `cap_bits` overrides it (used when an algorithm
    runs on an induced subgraph but must respect the full network's cap).
    """

    model: str = LOCAL
    bits_per_word: int = 64
    congest_cap_words: int = 2
    enforcement: str = "strict"
    max_rounds: int = field(default_factory=_default_max_rounds)
    seed: int = 0
    cap_bits: int | None = None

    def cap_for(self, n: int) -> int:
        if self.cap_bits is not None:
            return self.cap_bits
        logn = max(n - 1, 1).bit_length() if n > 1 else 0
        return self.congest_cap_words * logn


@dataclass
class RoundTrace:
    rounds_executed: int = 0
    max_message_bits: int = 0
    total_bits: int = 0
    violations: list[tuple[int, int, int]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "rounds": self.rounds_executed,
            "max_message_bits": self.max_message_bits,
            "total_bits": self.total_bits,
            "violations": [list(v) for v in self.violations],
        }

    def merged_after(self, prior: "RoundTrace") -> "RoundTrace":
        """This trace re-based to start after `prior` finished (sequential)."""
        return RoundTrace(
            rounds_executed=prior.rounds_executed + self.rounds_executed,
            max_message_bits=max(prior.max_message_bits, self.max_message_bits),
            total_bits=prior.total_bits + self.total_bits,
            violations=prior.violations
            + [
                (r + prior.rounds_executed, e, b)
                for (r, e, b) in self.violations
            ],
        )


def merge_sequential(traces: Sequence[RoundTrace]) -> RoundTrace:
    out = RoundTrace()
    for t in traces:
        out = t.merged_after(out)
    return out


def merge_parallel(traces: Sequence[RoundTrace]) -> RoundTrace:
    """Combine traces of runs that execute side by side on disjoint parts."""
    out = RoundTrace()
    for t in traces:
        out.rounds_executed = max(out.rounds_executed, t.rounds_executed)
        out.max_message_bits = max(out.max_message_bits, t.max_message_bits)
        out.total_bits += t.total_bits
        out.violations += t.violations
    out.violations.sort()
    return out


class CongestViolation(RuntimeError):
    def __init__(self, rnd: int, edge: int, bits: int, cap: int):
        super().__init__(
            f"message of {bits} bits on edge {edge} in round {rnd} "
            f"exceeds the {cap}-bit CONGEST cap"
        )
        self.round = rnd
        self.edge = edge
        self.bits = bits


class MaxRoundsExceeded(RuntimeError):
    pass


def msg_bits(m) -> int:
    """Serialized size of a message in bits.

    Integers cost their minimal two's-complement width, at least 8 bits.
    Tuples cost the sum of their parts plus a 4-bit tag. Bytes cost 8 bits
    per byte. The convention is fixed so traces are reproducible.
    """
    if isinstance(m, bool):
        return 8
    if isinstance(m, int):
        width = (m.bit_length() + 1) if m >= 0 else ((-m - 1).bit_length() + 1)
        return max(8, width)
    if isinstance(m, tuple):
        return 4 + sum(msg_bits(x) for x in m)
    if isinstance(m, (bytes, bytearray)):
        return 8 * len(m)
    if isinstance(m, str):
        return 8 * len(m.encode("utf-8"))
    raise TypeError(f"unsupported message type {type(m).__name__}")


class VertexContext:
    """Local view handed to a vertex program: ids, incident edges, PRNG."""

    __slots__ = ("vertex", "n", "incident", "neighbors", "_seed")

    def __init__(self, vertex, n, incident, neighbors, seed):
        self.vertex = vertex
        self.n = n
        self.incident = incident
        self.neighbors = neighbors
        self._seed = seed

    @property
    def degree(self) -> int:
        return len(self.incident)

    def rand(self, rnd: int):
        """Counter-based PRNG keyed by (global seed, vertex, round)."""
        key = (
            self._seed * _MIX1 + self.vertex * _MIX2 + rnd * _MIX3
        ) & _MASK64
        return _random.Random(key)


class VertexProgram:
    """Behavior contract: init/step/output.

    step receives the inbox as a dict keyed by incident edge id and returns
    (state, outbox, halted) with the outbox in the same keying; a halted
    vertex is never stepped again, though its final outbox is delivered.
    """

    def init(self, ctx: VertexContext):
        raise NotImplementedError

    def step(self, ctx: VertexContext, state, rnd: int, inbox: dict):
        raise NotImplementedError

    def output(self, ctx: VertexContext, state):
        return state


def run(
    g: Graph,
    program: VertexProgram,
    cfg: SimConfig,
    schedule: str = "forward",
    round_hook: Callable[[int, list], bool] | None = None,
):
    """Execute synchronized rounds until every vertex halts.

    Returns (outputs, RoundTrace). `schedule` permutes the order vertices
    are stepped within a round; results are identical for any schedule
    because all inboxes of a round are materialized before any step runs.
    `round_hook(rnd, states)`, if given, runs after each round and may
    return True to stop the simulation (used by globally-coordinated
    algorithms whose aggregation rounds are charged separately).
    """
    if cfg.max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    n = g.n
    cap = cfg.cap_for(n)
    strict = cfg.enforcement == "strict"
    congest = cfg.model == CONGEST
    ctxs = [
        VertexContext(v, n, g.adj[v], g.neighbors(v), cfg.seed)
        for v in range(n)
    ]
    states = [program.init(ctxs[v]) for v in range(n)]
    halted = [False] * n
    inboxes: list[dict | None] = [None] * n
    trace = RoundTrace()
    order = list(range(n))
    if schedule == "reverse":
        order.reverse()
    elif schedule == "shuffled":
        _random.Random(cfg.seed ^ _MIX2).shuffle(order)
    elif schedule != "forward":
        raise ValueError(f"unknown schedule {schedule!r}")

    rnd = 0
    while rnd < cfg.max_rounds:
        rnd += 1
        any_live_delivery = any(
            inboxes[v] is not None and not halted[v] for v in range(n)
        )
        if all(halted):
            rnd -= 1
            break
        next_inboxes: list[dict | None] = [None] * n
        stepped = False
        for v in order:
            if halted[v]:
                continue
            stepped = True
            inbox = inboxes[v] or {}
            states[v], outbox, is_halted = program.step(
                ctxs[v], states[v], rnd, inbox
            )
            halted[v] = bool(is_halted)
            if not outbox:
                continue
            for eid, m in outbox.items():
                bits = msg_bits(m)
                if congest:
                    if bits > cap:
                        if strict:
                            raise CongestViolation(rnd, eid, bits, cap)
                        trace.violations.append((rnd, eid, bits))
                trace.total_bits += bits
                if bits > trace.max_message_bits:
                    trace.max_message_bits = bits
                dest = g.other(eid, v)
                box = next_inboxes[dest]
                if box is None:
                    box = {}
                    next_inboxes[dest] = box
                box[eid] = m
        if stepped or any_live_delivery:
            trace.rounds_executed = rnd
        inboxes = next_inboxes
        if round_hook is not None and round_hook(rnd, states):
            break
        if all(halted) and all(b is None for b in next_inboxes):
            break
    else:
        raise MaxRoundsExceeded(
            f"no global halt within {cfg.max_rounds} rounds"
        )
    trace.violations.sort()
    outputs = [program.output(ctxs[v], states[v]) for v in range(n)]
    return outputs, trace


# ---------------------------------------------------------------------------
# LOCAL-model knowledge primitives


def knowledge_states(g: Graph, rounds: int):
    """Per-vertex knowledge after `rounds` rounds of neighborhood gossip.

    Vertices start knowing only their own id (plus ports); in each round
    every vertex forwards everything it knows over every incident edge.
    After k rounds a vertex knows exactly the edges with an endpoint at
    distance <= k-1 and the vertices mentioned by those edges. Returned as
    a canonical (sorted vertex tuple, sorted edge tuple) pair per vertex.
    """
    if rounds < 0:
        raise ValueError("rounds must be >= 0")
    out = []
    for v in range(g.n):
        dist = g.distances_from(v)
        known_edges = tuple(
            e
            for e in g.edges
            if 0 <= dist[e[0]] <= rounds - 1 or 0 <= dist[e[1]] <= rounds - 1
        )
        verts = {v}
        for a, b in known_edges:
            verts.add(a)
            verts.add(b)
        if rounds >= 1:
            verts.update(u for u in g.neighbors(v))
        out.append((tuple(sorted(verts)), known_edges))
    return out


def _id_width(n: int) -> int:
    return max(8, (max(n - 1, 1)).bit_length() + 1)


def collect_ball(g: Graph, r: int, cfg: SimConfig | None = None):
    """Exact induced subgraph on every r-ball, via r+1 gossip rounds.

    Only meaningful with unbounded messages; under strict CONGEST this is
    an error. Rounds charged: r+1. Bits charged: every vertex forwards its
    current knowledge to each neighbor each round, every id costing the
    uniform width max(8, bitlen(n-1)+1).

    Returns (balls, trace) where balls[v] = (vertex tuple, edge tuple) of
    the subgraph induced by {u : dist(v, u) <= r}.
    """
    if r < 0:
        raise ValueError("radius must be >= 0")
    if cfg is not None and cfg.model == CONGEST and cfg.enforcement == "strict":
        raise ValueError(
            "collect_ball sends unbounded messages; not available under "
            "strict CONGEST enforcement"
        )
    w = _id_width(g.n)
    trace = RoundTrace(rounds_executed=r + 1)
    balls = []
    for v in range(g.n):
        dist = g.distances_from(v)
        inside = [u for u in range(g.n) if 0 <= dist[u] <= r]
        inside_set = set(inside)
        ball_edges = tuple(
            e for e in g.edges if e[0] in inside_set and e[1] in inside_set
        )
        balls.append((tuple(inside), ball_edges))
        deg = g.degree(v)
        if deg == 0:
            continue
        # knowledge after k rounds = edges with an endpoint at dist <= k-1;
        # histogram over each edge's nearer-endpoint distance, then prefix
        hist: dict[int, int] = {}
        for a, b in g.edges:
            da, db = dist[a], dist[b]
            med = min(d for d in (da, db) if d >= 0) if (da >= 0 or db >= 0) else -1
            if med >= 0:
                hist[med] = hist.get(med, 0) + 1
        known = 0
        cum: list[int] = []
        for d in range(0, r + 2):
            known += hist.get(d, 0)
            cum.append(known)
        for k in range(1, r + 2):
            known_k = cum[min(k - 1, r + 1)] if k - 1 >= 0 else 0
            payload = 4 + w + 2 * w * known_k  # own id + known edges
            trace.total_bits += deg * payload
            if payload > trace.max_message_bits:
                trace.max_message_bits = payload
    return balls, trace


def component_aggregate(g: Graph, values: Sequence, op: str):
    """Every vertex learns an aggregate of `values` over its component.

    Stands for a convergecast plus broadcast on a BFS tree rooted at each
    component's minimum-id vertex: rounds charged are 2*diameter+2 (max
    over components); each tree edge carries one value-sized word up and
    one down.

    op is one of "min", "or", "sum". Returns (per-vertex result, trace).
    """
    if len(values) != g.n:
        raise ValueError("need one value per vertex")
    if op not in ("min", "or", "sum"):
        raise ValueError(f"unsupported aggregate {op!r}")
    result = [None] * g.n
    trace = RoundTrace()
    for comp in g.components():
        vals = [values[v] for v in comp]
        if op == "min":
            agg = min(vals)
        elif op == "or":
            agg = any(vals)
        else:
            agg = sum(vals)
        for v in comp:
            result[v] = agg
        diam = _component_diameter(g, comp)
        trace.rounds_executed = max(trace.rounds_executed, 2 * diam + 2)
        tree_edges = len(comp) - 1
        up = msg_bits(int(agg) if isinstance(agg, bool) else agg)
        trace.total_bits += tree_edges * 2 * up
        trace.max_message_bits = max(trace.max_message_bits, up)
    return result, trace


def _component_diameter(g: Graph, comp: list[int]) -> int:
    best = 0
    for v in comp:
        dist = g.distances_from(v)
        best = max(best, max(dist[u] for u in comp))
    return best


def component_min(g: Graph, values: Sequence):
    return component_aggregate(g, values, "min")


def component_or(g: Graph, values: Sequence):
    return component_aggregate(g, values, "or")


def component_sum(g: Graph, values: Sequence):
    return component_aggregate(g, values, "sum")
