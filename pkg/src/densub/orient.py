"""Deterministic low-outdegree orientation and its splitting subroutines.

The ladder, bottom to top:

* weak orientation: split every vertex into degree-3 copies; a copy with
  three incoming edges is a sink. Sinks launch waves backwards along
  incoming edges through out-degree-1 copies until a copy with spare
  capacity is found; flipping the discovered paths retires at least a
  third of the sinks per phase and never creates new ones. The result
  orients at least floor(deg/3) edges out of every vertex.
* path decomposition: repeatedly orient the virtual graph whose edges are
  the current paths, then at every vertex pair up outgoing paths and
  splice each pair into one (reversing the first); one round of this cuts
  the per-vertex path-end count to 2/3 of itself plus a constant while
  doubling the length cap. Splices that close a cycle are set aside, done.
* directed split: run the decomposition until the per-vertex end count is
  at most eps*deg + 12 and orient every path consistently; interior visits
  cancel, so each vertex's out/in imbalance is at most its end count.
* dual rounding: start from the fractional orientation produced by the
  multiplicative-weights dual solver, snap it to t fractional bits, then
  clear one bit position per iteration: edges where either endpoint shows
  a zero bit round both sides down; the remaining edges get a directed
  split, the tail rounds up and the head rounds down. Edge covers survive
  every step exactly, per-vertex sums grow by at most the split
  imbalance at that bit's weight, and after the last iteration the values
  are integers in {0, 1} that dictate the orientation.

The splitting subroutines run their combinatorics centrally while rounds
and message bits are charged per the relay protocol they stand for: a
virtual-graph round costs (path length + 1) real rounds, wave/designate
words carry one copy id each, and sub-phases are padded to the worst wave
depth of the phase.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .engine import RoundTrace, msg_bits
from .graphs import Graph, ceil_log2, format_ratio, frac_ceil, is_neg_pow2
from .mwu import (
    alpha_bit_width,
    alpha_fraction_bits,
    default_iterations,
    fractional_dual,
)

__all__ = [
    "Orientation",
    "PathDecomposition",
    "WeakOrientationResult",
    "weak_orientation",
    "weak_orientation_detailed",
    "path_decompose",
    "directed_split",
    "split_levels",
    "orient_low_outdegree",
    "orient_low_outdegree_detailed",
    "OrientReport",
]


@dataclass(frozen=True)
class Orientation:
    """One direction per canonical edge of a Graph.

    dir_bits[e] = 1 orients edge e toward its larger endpoint.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    dir_bits: tuple[int, ...]

    def head_of(self, eid: int) -> int:
        u, v = self.edges[eid]
        return v if self.dir_bits[eid] else u

    def tail_of(self, eid: int) -> int:
        u, v = self.edges[eid]
        return u if self.dir_bits[eid] else v

    def outdegs(self) -> list[int]:
        out = [0] * self.n
        for eid in range(len(self.edges)):
            out[self.tail_of(eid)] += 1
        return out

    def indegs(self) -> list[int]:
        ind = [0] * self.n
        for eid in range(len(self.edges)):
            ind[self.head_of(eid)] += 1
        return ind

    def max_outdeg(self) -> int:
        return max(self.outdegs(), default=0)

    def to_text(self) -> str:
        lines = []
        for eid, (u, v) in enumerate(self.edges):
            arrow = "->" if self.dir_bits[eid] else "<-"
            lines.append(f"{u} {v} {arrow}")
        return "\n".join(lines) + ("\n" if lines else "")


@dataclass(frozen=True)
class PathDecomposition:
    """Edge partition into vertex sequences; closed ones have
    first == last and no endpoint slots."""

    n: int
    paths: tuple[tuple[int, ...], ...]

    def endpoint_counts(self) -> list[int]:
        cnt = [0] * self.n
        for p in self.paths:
            if p[0] != p[-1]:
                cnt[p[0]] += 1
                cnt[p[-1]] += 1
        return cnt

    def max_length(self) -> int:
        return max((len(p) - 1 for p in self.paths), default=0)

    def edge_multiset(self) -> list[tuple[int, int]]:
        out = []
        for p in self.paths:
            for a, b in zip(p, p[1:]):
                out.append((a, b) if a < b else (b, a))
        return out


@dataclass
class _Charge:
    """Round/bit account for the relay protocols the splitters stand for."""

    rounds: int = 0
    total_bits: int = 0
    max_bits: int = 0

    def words(self, value: int, copies: int, relay: int = 1) -> None:
        bits = msg_bits(value)
        self.total_bits += bits * copies * relay
        if bits > self.max_bits:
            self.max_bits = bits

    def inflate(self, other: "_Charge", relay: int) -> None:
        self.rounds += other.rounds * relay
        self.total_bits += other.total_bits * relay
        self.max_bits = max(self.max_bits, other.max_bits)

    def as_trace(self) -> RoundTrace:
        return RoundTrace(self.rounds, self.max_bits, self.total_bits, [])


@dataclass
class WeakOrientationResult:
    head: list[int]  # per edge: 1 orients toward the second stored endpoint
    phases: int
    sink_history: list[int]  # sink count entering each phase
    charge: _Charge


def _weak_orient_edges(
    n: int, edges: list[tuple[int, int]], phase_budget: int | None = None
) -> WeakOrientationResult:
    """Sinkless orientation of the degree-3 split multigraph.

    Works on an arbitrary multigraph without self-loops. head[e] = 1
    orients edge e from edges[e][0] toward edges[e][1].
    """
    m = len(edges)
    head = [1 if v > u else 0 for (u, v) in edges]
    # vertex slots in edge order; copy = block of three slots
    slots: list[list[int]] = [[] for _ in range(n)]
    for eid, (u, v) in enumerate(edges):
        slots[u].append(eid)
        slots[v].append(eid)
    offset = [0] * (n + 1)
    for v in range(n):
        offset[v + 1] = offset[v] + (len(slots[v]) + 2) // 3
    num_copies = offset[n]
    copy_edges: list[list[int]] = [[] for _ in range(num_copies)]
    edge_copy = [[-1, -1] for _ in range(m)]  # copy id per endpoint side
    for v in range(n):
        for j, eid in enumerate(slots[v]):
            c = offset[v] + j // 3
            copy_edges[c].append(eid)
            if edges[eid][0] == v and edge_copy[eid][0] < 0:
                edge_copy[eid][0] = c
            else:
                edge_copy[eid][1] = c
    indeg = [0] * num_copies
    for eid in range(m):
        indeg[edge_copy[eid][head[eid]]] += 1

    def head_copy(eid: int) -> int:
        return edge_copy[eid][head[eid]]

    def tail_copy(eid: int) -> int:
        return edge_copy[eid][1 - head[eid]]

    def is_sink(c: int) -> bool:
        return len(copy_edges[c]) == 3 and indeg[c] == 3

    def is_type2(c: int) -> bool:
        return len(copy_edges[c]) == 3 and indeg[c] == 2

    if phase_budget is None:
        phase_budget = 8 * max(max(n, 2) - 1, 1).bit_length()
    charge = _Charge()
    sink_history: list[int] = []
    sinks = [c for c in range(num_copies) if is_sink(c)]
    phases = 0
    while sinks:
        phases += 1
        if phases > phase_budget:
            raise RuntimeError(
                f"sink elimination exceeded its {phase_budget}-phase budget"
            )
        sink_history.append(len(sinks))
        # wave sub-phase: every sink explores backwards along incoming
        # edges through out-degree-1 copies; each copy is reached at most
        # once because its single out-edge pins it to one sink's chain
        waved: dict[int, tuple[int, int]] = {}  # copy -> (sink, via edge)
        hits: dict[int, tuple[int, int, int]] = {}  # sink -> (layer, w, e)
        frontier = [(c, c) for c in sinks]
        layer = 0
        wave_messages = 0
        while frontier:
            layer += 1
            nxt = []
            for c, origin in frontier:
                for eid in copy_edges[c]:
                    if head_copy(eid) != c:
                        continue
                    w = tail_copy(eid)
                    wave_messages += 1
                    if is_type2(w):
                        if w not in waved:
                            waved[w] = (origin, eid)
                            nxt.append((w, origin))
                    elif not is_sink(w):
                        best = hits.get(origin)
                        cand = (layer, w, eid)
                        if best is None or cand < best:
                            hits[origin] = cand
            frontier = nxt
        for s in sinks:
            if s not in hits:
                raise RuntimeError(
                    "a sink found no augmenting path; split-graph invariant broken"
                )
        # designation already filtered to one path per sink (hits);
        # endpoints accept the smallest designating sink id
        accept: dict[int, int] = {}
        for s in sorted(hits):
            _layer, w, _e = hits[s]
            if w not in accept or s < accept[w]:
                accept[w] = s
        flipped_paths = 0
        path_len_total = 0
        for w, s in sorted(accept.items()):
            layer_s, _w, eid = hits[s]
            # walk from the endpoint back to the sink, flipping
            path = [eid]
            c = head_copy(eid)
            while c != s:
                origin, via = waved[c]
                path.append(via)
                c = head_copy(via)
            for e in path:
                hc, tc = head_copy(e), tail_copy(e)
                head[e] ^= 1
                indeg[hc] -= 1
                indeg[tc] += 1
            flipped_paths += 1
            path_len_total += len(path)
        new_sinks = [c for c in range(num_copies) if is_sink(c)]
        if not set(new_sinks) <= set(sinks):
            raise RuntimeError("an augmenting-path flip created a new sink")
        if len(sinks) - len(new_sinks) < -(-len(sinks) // 3):
            raise RuntimeError(
                "fewer than a third of the sinks were retired in a phase"
            )
        # four relay sub-phases (wave, report, designate, accept+flip),
        # each padded to the deepest wave of this phase
        charge.rounds += 4 * layer + 2
        charge.words(num_copies - 1, wave_messages)  # copy-id wave words
        charge.words(layer, path_len_total)  # report words
        charge.words(num_copies - 1, 2 * path_len_total)  # designate+accept
        sinks = new_sinks
    return WeakOrientationResult(head, phases, sink_history, charge)


def weak_orientation_detailed(g: Graph) -> WeakOrientationResult:
    return _weak_orient_edges(g.n, list(g.edges))


def weak_orientation(g: Graph) -> tuple[Orientation, int]:
    """Orientation with outdeg(v) >= floor(deg(v)/3) for every vertex."""
    res = weak_orientation_detailed(g)
    return (
        Orientation(g.n, g.edges, tuple(res.head)),
        res.phases,
    )


def _decompose_edges(
    n: int, edges: list[tuple[int, int]], levels: int
) -> tuple[list[list[int]], _Charge]:
    """Boosted path decomposition of an edge list.

    Returns vertex sequences covering every input edge exactly once, with
    per-vertex open-end count at most (2/3)^levels * deg + 12 and length
    at most 2^levels.
    """
    paths: list[list[int]] = [[u, v] for (u, v) in edges]
    cycles: list[list[int]] = []
    charge = _Charge()
    max_len = 1
    for level in range(levels):
        open_idx = [i for i, p in enumerate(paths) if p[0] != p[-1]]
        virt_edges = [(paths[i][0], paths[i][-1]) for i in open_idx]
        if not virt_edges:
            break
        res = _weak_orient_edges(n, virt_edges)
        charge.inflate(res.charge, max_len + 1)
        out_at: dict[int, list[int]] = {}
        for k, (a, b) in enumerate(virt_edges):
            tail = a if res.head[k] == 1 else b
            out_at.setdefault(tail, []).append(k)
        merged: set[int] = set()
        new_paths: list[list[int]] = []
        for u in sorted(out_at):
            ks = out_at[u]
            for first, second in zip(ks[::2], ks[1::2]):
                pa = paths[open_idx[first]]
                pb = paths[open_idx[second]]
                seq_a = pa if pa[0] == u else pa[::-1]
                seq_b = pb if pb[0] == u else pb[::-1]
                joined = seq_a[::-1] + seq_b[1:]
                merged.add(open_idx[first])
                merged.add(open_idx[second])
                if joined[0] == joined[-1]:
                    cycles.append(joined)
                else:
                    new_paths.append(joined)
        for i, p in enumerate(paths):
            if i not in merged and p[0] != p[-1]:
                new_paths.append(p)
        # reversals and appends are coordinated along the paths themselves
        charge.rounds += max_len + 1
        paths = new_paths
        max_len = min(2 * max_len, max((len(p) - 1 for p in paths), default=1))
    return paths + cycles, charge


def path_decompose(g: Graph, levels: int) -> PathDecomposition:
    """(2/3)^levels damping of path-end counts, lengths up to 2^levels."""
    if levels < 0:
        raise ValueError("levels must be >= 0")
    paths, _ = _decompose_edges(g.n, list(g.edges), levels)
    return PathDecomposition(g.n, tuple(tuple(p) for p in paths))


def split_levels(eps: Fraction) -> int:
    """Smallest i with (2/3)^i <= eps."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    i = 0
    val = Fraction(1)
    while val > eps:
        val = val * 2 / 3
        i += 1
    return i


def _split_edge_list(
    n: int, edges: list[tuple[int, int]], eps: Fraction
) -> tuple[list[int], _Charge]:
    """Directions with per-vertex |out - in| <= eps*deg + 12.

    head[e] = 1 orients edges[e] from its first stored endpoint to its
    second. Paths are oriented along their traversal; a vertex's imbalance
    comes only from path ends.
    """
    levels = split_levels(eps)
    paths, charge = _decompose_edges(n, edges, levels)
    remaining: dict[tuple[int, int], list[int]] = {}
    for eid, (u, v) in enumerate(edges):
        remaining.setdefault((u, v) if u < v else (v, u), []).append(eid)
    head = [0] * len(edges)
    for p in paths:
        for a, b in zip(p, p[1:]):
            key = (a, b) if a < b else (b, a)
            eid = remaining[key].pop()
            head[eid] = 1 if (edges[eid][0], edges[eid][1]) == (a, b) else 0
    charge.rounds += 1  # announcing the final direction of each edge
    return head, charge


def directed_split(g: Graph, eps: Fraction) -> Orientation:
    """Orientation with |outdeg(v) - indeg(v)| <= eps*deg(v) + 12."""
    head, _ = _split_edge_list(g.n, list(g.edges), Fraction(eps))
    return Orientation(g.n, g.edges, tuple(head))


@dataclass
class IterationRecord:
    k: int
    split_edges: int
    min_edge_cover: Fraction
    max_vertex_sum: Fraction
    bound: Fraction  # the per-vertex recurrence value D_k


@dataclass
class OrientReport:
    orientation: Orientation
    trace: RoundTrace
    dual_feasible: bool
    fraction_bits: int
    iterations: list[IterationRecord] = field(default_factory=list)
    guaranteed_bound: Fraction | None = None

    def to_json(self) -> dict:
        return {
            "max_outdeg": self.orientation.max_outdeg(),
            "bound": format_ratio(self.guaranteed_bound)
            if self.guaranteed_bound is not None
            else None,
            "rounds": self.trace.rounds_executed,
        }


def orient_low_outdegree_detailed(
    g: Graph,
    dtilde: int,
    eps: Fraction,
    T_override: int | None = None,
    seed: int = 0,
) -> OrientReport:
    """Full pipeline: dual solve, bit snap, per-bit split rounding.

    Requires an integer dtilde >= D, eps a negative power of two with
    32/dtilde <= eps <= 1/4. The resulting orientation has max outdegree
    at most (1+eps)*dtilde (the exact recurrence value is reported).
    """
    eps = Fraction(eps)
    if dtilde < 1 or Fraction(dtilde).denominator != 1:
        raise ValueError("dtilde must be a positive integer")
    if not is_neg_pow2(eps):
        raise ValueError("eps must be a negative power of 2")
    if not (Fraction(32, dtilde) <= eps <= Fraction(1, 4)):
        raise ValueError("need 32/dtilde <= eps <= 1/4")
    if g.m == 0:
        o = Orientation(g.n, g.edges, ())
        return OrientReport(o, RoundTrace(), True, 0, [], Fraction(dtilde))
    eps1 = eps / 8
    eps2 = eps / 8
    eps_dual = eps1 / 2
    T = T_override or default_iterations(g.n, eps_dual)
    sol, trace = fractional_dual(
        g, Fraction(dtilde), eps_dual, T_override=T, seed=seed
    )
    if not sol.feasible:
        raise RuntimeError(
            "fractional solution infeasible; raise the iteration count "
            "or check that dtilde is at least the maximum density"
        )
    alpha_bit_width(sol)  # asserts the serialized-width guarantee
    frac_bits = alpha_fraction_bits(sol)
    delta = g.max_degree()
    t = min(frac_bits, ceil_log2(Fraction(delta) / eps2))
    scale = 1 << t
    nu = [0] * g.m
    nv = [0] * g.m
    for eid, (u, v) in enumerate(g.edges):
        nu[eid] = frac_ceil(sol.alpha[(eid, u)] * scale)
        nv[eid] = frac_ceil(sol.alpha[(eid, v)] * scale)
    records: list[IterationRecord] = []
    bound = (1 + eps1) * (1 + eps2) * dtilde
    if t > 0:
        eps3 = eps / (4 * t)
        for k in range(1, t + 1):
            bit = 1 << (k - 1)
            in_split = []
            for eid in range(g.m):
                bu = nu[eid] & bit
                bv = nv[eid] & bit
                if bu and bv:
                    in_split.append(eid)
                else:
                    if bu:
                        nu[eid] -= bit
                    if bv:
                        nv[eid] -= bit
            if in_split:
                sub_edges = [g.edges[eid] for eid in in_split]
                heads, charge = _split_edge_list(g.n, sub_edges, eps3)
                for pos, eid in enumerate(in_split):
                    if heads[pos]:
                        # tail = stored first endpoint = min id = u side
                        nu[eid] += bit
                        nv[eid] -= bit
                    else:
                        nv[eid] += bit
                        nu[eid] -= bit
                step = charge.as_trace()
            else:
                step = RoundTrace()
            # one bit-exchange round precedes the split every iteration
            step.rounds_executed += 1
            step.total_bits += 2 * g.m * 8
            step.max_message_bits = max(step.max_message_bits, 8)
            trace = step.merged_after(trace)
            bound = (1 + eps3) * bound + Fraction(12, 1 << (t - k + 1))
            min_cover = min(
                Fraction(nu[eid] + nv[eid], scale) for eid in range(g.m)
            )
            sums = [0] * g.n
            for eid, (u, v) in enumerate(g.edges):
                sums[u] += nu[eid]
                sums[v] += nv[eid]
            max_sum = Fraction(max(sums), scale)
            records.append(
                IterationRecord(k, len(in_split), min_cover, max_sum, bound)
            )
            if min_cover < 1:
                raise AssertionError("edge cover broke during rounding")
            if max_sum > bound:
                raise AssertionError("per-vertex sum exceeded its recurrence")
    dir_bits = []
    for eid in range(g.m):
        if nu[eid] % scale or nv[eid] % scale:
            raise AssertionError("fractional bits remain after the last pass")
        au = min(nu[eid] // scale, 1)
        av = min(nv[eid] // scale, 1)
        if au + av < 1:
            raise AssertionError("an edge lost its cover")
        if au == 1 and av == 0:
            dir_bits.append(1)  # tail u, head v
        elif av == 1 and au == 0:
            dir_bits.append(0)
        else:
            dir_bits.append(1)  # both at 1: orient toward the larger id
    final = RoundTrace(rounds_executed=1, max_message_bits=8, total_bits=8 * g.m)
    trace = final.merged_after(trace)
    orientation = Orientation(g.n, g.edges, tuple(dir_bits))
    return OrientReport(
        orientation, trace, sol.feasible, frac_bits, records, bound
    )


def orient_low_outdegree(
    g: Graph,
    dtilde: int,
    eps: Fraction,
    T_override: int | None = None,
    seed: int = 0,
) -> tuple[Orientation, RoundTrace]:
    rep = orient_low_outdegree_detailed(g, dtilde, eps, T_override, seed)
    return rep.orientation, rep.trace
