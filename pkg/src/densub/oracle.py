"""Centralized exact ground truth for densities and orientations.

Two independent routes to the maximum subgraph density: an exhaustive search
over vertex subsets (small graphs) and Goldberg's min-cut construction with
an exact rational search over candidate densities. A brute-force directed
densest-pair solver and the minimum achievable max-outdegree round this out.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .graphs import DirectedGraph, Graph, Subset

__all__ = [
    "OracleResult",
    "exact_densest",
    "brute_densest",
    "brute_directed_densest",
    "min_max_outdegree",
    "witness_orientation",
]

BRUTE_VERTEX_CAP = 20
BRUTE_DIRECTED_CAP = 12


@dataclass(frozen=True)
class OracleResult:
    """Certified optimum: the witness attains `value` and nothing beats it."""

    best_subset: object  # Subset, or (Subset, Subset) for directed pairs
    value: Fraction
    method: str


class _Dinic:
    """Integer max-flow (adjacency-array Dinic's algorithm)."""

    def __init__(self, num_nodes: int):
        self.n = num_nodes
        self.head: list[list[int]] = [[] for _ in range(num_nodes)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, u: int, v: int, c: int) -> None:
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def max_flow(self, s: int, t: int) -> int:
        head, to, cap = self.head, self.to, self.cap
        INF = 1 << 400
        flow = 0
        while True:
            level = [-1] * self.n
            level[s] = 0
            q = deque([s])
            while q:
                v = q.popleft()
                lv = level[v] + 1
                for i in head[v]:
                    u = to[i]
                    if cap[i] > 0 and level[u] < 0:
                        level[u] = lv
                        q.append(u)
            if level[t] < 0:
                return flow
            it = [0] * self.n

            def dfs(v: int, pushed: int) -> int:
                if v == t:
                    return pushed
                res = 0
                edges = head[v]
                lv = level[v] + 1
                while it[v] < len(edges):
                    i = edges[it[v]]
                    u = to[i]
                    if cap[i] > 0 and level[u] == lv:
                        got = dfs(u, min(pushed - res, cap[i]))
                        if got:
                            cap[i] -= got
                            cap[i ^ 1] += got
                            res += got
                            if res == pushed:
                                return res
                    it[v] += 1
                if res == 0:
                    level[v] = -1  # dead end for the rest of this phase
                return res

            flow += dfs(s, INF)

    def min_cut_side(self, s: int) -> set[int]:
        """Vertices reachable from s in the residual graph (minimal cut side)."""
        side = {s}
        q = deque([s])
        while q:
            v = q.popleft()
            for i in self.head[v]:
                if self.cap[i] > 0 and self.to[i] not in side:
                    side.add(self.to[i])
                    q.append(self.to[i])
        return side


def _denser_than(g: Graph, guess: Fraction) -> set[int] | None:
    """Vertices of a subgraph with density > guess, or None if none exists.

    Goldberg's construction: source->v with capacity m, v->sink with capacity
    m + 2*guess - deg(v), each edge with capacity 1 both ways; the min cut is
    m*n - 2*max_S (|E(S)| - guess*|S|). Capacities are scaled by the guess's
    denominator to stay integral.
    """
    n, m = g.n, g.m
    b = guess.denominator
    a = guess.numerator
    net = _Dinic(n + 2)
    src, snk = n, n + 1
    for v in range(n):
        net.add_edge(src, v, m * b)
        net.add_edge(v, snk, m * b + 2 * a - g.degree(v) * b)
    for u, v in g.edges:
        net.add_edge(u, v, b)
        net.add_edge(v, u, b)
    flow = net.max_flow(src, snk)
    if flow >= m * n * b:
        return None
    side = net.min_cut_side(src)
    side.discard(src)
    return side


def _simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The fraction with the smallest denominator in the open interval (lo, hi).

    Continued-fraction (Stern-Brocot) descent; requires 0 <= lo < hi.
    """
    if not (0 <= lo < hi):
        raise ValueError("need 0 <= lo < hi")
    w = lo.numerator // lo.denominator
    if w + 1 < hi:
        return Fraction(w + 1)  # floor(lo)+1 > lo always, so it is inside
    lo2, hi2 = lo - w, hi - w  # lo2 in [0, 1), hi2 in (lo2, 1]
    if lo2 == 0:
        inv = 1 / hi2
        k = inv.numerator // inv.denominator + 1  # smallest k with 1/k < hi2
        return w + Fraction(1, k)
    return w + 1 / _simplest_between(1 / hi2, 1 / lo2)


def _peel_lower_bound(g: Graph) -> tuple[Fraction, set[int]]:
    """Best density among the suffixes of a min-degree peel order.

    Every suffix is a genuine subset, so the best one is an achievable
    lower bound on D with its witness in hand.
    """
    import heapq

    deg = [g.degree(v) for v in range(g.n)]
    removed = [False] * g.n
    heap = [(deg[v], v) for v in range(g.n)]
    heapq.heapify(heap)
    remaining_n, remaining_m = g.n, g.m
    best = Fraction(remaining_m, remaining_n)
    best_step = 0
    order = []
    while remaining_n > 0:
        d, v = heapq.heappop(heap)
        if removed[v] or d != deg[v]:
            continue
        removed[v] = True
        order.append(v)
        remaining_n -= 1
        remaining_m -= deg[v]
        for u in g.neighbors(v):
            if not removed[u]:
                deg[u] -= 1
                heapq.heappush(heap, (deg[u], u))
        if remaining_n > 0:
            d_now = Fraction(remaining_m, remaining_n)
            if d_now > best:
                best = d_now
                best_step = len(order)
    witness = set(range(g.n)) - set(order[:best_step])
    return best, witness


def exact_densest(g: Graph) -> OracleResult:
    """Maximum subgraph density via min-cut feasibility tests.

    Forests are resolved directly (the largest tree component is optimal).
    Otherwise a peeling pass supplies an attained lower bound, vertices
    that no denser subgraph can contain are stripped, and the remaining
    core is searched by maintaining an interval [lo, hi] where lo is
    attained by a witness and no subgraph is denser than hi, probing the
    simplest fraction in between. Densities have denominator <= n after
    reduction, so when the simplest candidate between the bounds needs a
    bigger denominator, one final feasibility check at lo settles the
    optimum exactly.
    """
    if g.m == 0:
        if g.n == 0:
            raise ValueError("graph has no vertices")
        return OracleResult(Subset(g.n, [0]), Fraction(0), "flow")
    comps = g.components()
    if all(
        g.induced_edge_count(c) == len(c) - 1 or g.induced_edge_count(c) == 0
        for c in comps
    ):
        # forest: within one tree the whole tree is densest, and a union of
        # trees is a mediant of their densities, never above the best
        best = max(
            (Fraction(len(c) - 1, len(c)), c) for c in comps if len(c) > 1
        )
        return OracleResult(Subset(g.n, best[1]), best[0], "flow")
    lo, witness = _peel_lower_bound(g)
    # only vertices of degree > lo can belong to a subgraph denser than lo
    core_deg = [g.degree(v) for v in range(g.n)]
    from collections import deque as _dq

    doomed = _dq(v for v in range(g.n) if core_deg[v] <= lo)
    in_core = [True] * g.n
    while doomed:
        v = doomed.popleft()
        if not in_core[v]:
            continue
        in_core[v] = False
        for u in g.neighbors(v):
            if in_core[u]:
                core_deg[u] -= 1
                if core_deg[u] <= lo:
                    doomed.append(u)
    core_ids = [v for v in range(g.n) if in_core[v]]
    if not core_ids:
        return OracleResult(Subset(g.n, sorted(witness)), lo, "flow")
    sub, old_ids = g.induced(core_ids)
    hi = Fraction(g.n)  # density never exceeds (n-1)/2 < n
    while True:
        if lo == hi:
            break
        probe = _simplest_between(lo, hi)
        if probe.denominator > sub.n:
            # no remaining candidate strictly inside; certify lo or jump
            better = _denser_than(sub, lo)
            if better is None:
                break
            witness = {old_ids[i] for i in better}
            lo = Fraction(sub.induced_edge_count(better), len(better))
            continue
        better = _denser_than(sub, probe)
        if better is None:
            hi = probe
        else:
            witness = {old_ids[i] for i in better}
            lo = Fraction(sub.induced_edge_count(better), len(better))
    return OracleResult(Subset(g.n, sorted(witness)), lo, "flow")


def brute_densest(g: Graph) -> OracleResult:
    """Exhaustive maximum over all nonempty subsets (n <= 20).

    Ties are broken toward the lexicographically smallest sorted vertex
    tuple.
    """
    if g.n > BRUTE_VERTEX_CAP:
        raise ValueError(f"brute_densest refuses n > {BRUTE_VERTEX_CAP}")
    if g.n == 0:
        raise ValueError("graph has no vertices")
    adj_mask = [0] * g.n
    for u, v in g.edges:
        adj_mask[u] |= 1 << v
        adj_mask[v] |= 1 << u
    total = 1 << g.n
    edge_count = [0] * total
    best_mask = 1
    best = Fraction(0)
    for mask in range(1, total):
        low = mask & (-mask)
        v = low.bit_length() - 1
        rest = mask ^ low
        cnt = edge_count[rest] + (adj_mask[v] & rest).bit_count()
        edge_count[mask] = cnt
        d = Fraction(cnt, mask.bit_count())
        if d > best or (
            d == best and _mask_ids(mask) < _mask_ids(best_mask)
        ):
            best = d
            best_mask = mask
    return OracleResult(Subset(g.n, _mask_ids(best_mask)), best, "brute")


def _mask_ids(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def brute_directed_densest(g: DirectedGraph) -> OracleResult:
    """Exact maximum of |E(S,T)| / sqrt(|S||T|) over nonempty S, T (n <= 12).

    For each T, the best S of each cardinality k consists of the k vertices
    with the most arcs into T, so scanning prefix sums of the sorted arc
    counts covers every (S, T) pair exactly. Comparisons use the squared
    density; the result's `value` is the squared density.
    """
    if g.n > BRUTE_DIRECTED_CAP:
        raise ValueError(f"brute_directed_densest refuses n > {BRUTE_DIRECTED_CAP}")
    if g.n == 0:
        raise ValueError("graph has no vertices")
    out_mask = [0] * g.n
    for u, v in g.arcs:
        out_mask[u] |= 1 << v
    best_sq = Fraction(0)
    best_pair = (Subset(g.n, [0]), Subset(g.n, [0]))
    for t_mask in range(1, 1 << g.n):
        t_size = t_mask.bit_count()
        weights = sorted(
            (((out_mask[u] & t_mask).bit_count(), -u) for u in range(g.n)),
            reverse=True,
        )
        prefix = 0
        for k, (w, neg_u) in enumerate(weights, start=1):
            prefix += w
            sq = Fraction(prefix * prefix, k * t_size)
            if sq > best_sq:
                best_sq = sq
                s_ids = sorted(-nu for _, nu in weights[:k])
                best_pair = (
                    Subset(g.n, s_ids),
                    Subset(g.n, _mask_ids(t_mask)),
                )
    return OracleResult(best_pair, best_sq, "brute")


def witness_orientation(g: Graph, alpha: int) -> list[int] | None:
    """An orientation with max outdegree <= alpha, or None if impossible.

    Repeatedly reverses a directed path from an overloaded vertex to one
    with spare capacity; such a path always exists while alpha >= ceil(D).
    Returns head[] per edge id (the endpoint the edge points at).
    """
    head = [v for (_, v) in g.edges]  # start toward the larger id
    outdeg = [0] * g.n
    for eid, (u, v) in enumerate(g.edges):
        outdeg[u if head[eid] == v else v] += 1
    overloaded = deque(v for v in range(g.n) if outdeg[v] > alpha)
    while overloaded:
        v = overloaded.popleft()
        if outdeg[v] <= alpha:
            continue
        # BFS along current out-edges to a vertex with outdeg < alpha
        parent_edge: dict[int, int] = {v: -1}
        q = deque([v])
        target = -1
        while q and target < 0:
            x = q.popleft()
            for eid in g.adj[x]:
                if head[eid] == x:
                    continue  # not an out-edge of x
                y = head[eid]
                if y in parent_edge:
                    continue
                parent_edge[y] = eid
                if outdeg[y] < alpha:
                    target = y
                    break
                q.append(y)
        if target < 0:
            return None
        # reverse the path v -> ... -> target
        y = target
        while y != v:
            eid = parent_edge[y]
            x = g.other(eid, y)
            head[eid] = x
            y = x
        outdeg[v] -= 1
        outdeg[target] += 1
        if outdeg[v] > alpha:
            overloaded.append(v)
    return head


def min_max_outdegree(g: Graph) -> tuple[int, list[int]]:
    """ceil(D) together with an orientation achieving it as head[] per edge."""
    if g.m == 0:
        return 0, []
    d = exact_densest(g).value
    alpha = -((-d.numerator) // d.denominator)  # ceil(D)
    head = witness_orientation(g, alpha)
    if head is None:
        raise AssertionError("an orientation at ceil(D) must exist")
    return alpha, head
