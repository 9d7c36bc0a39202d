"""Graph types, exact density arithmetic, instance generators, edge-list I/O.

All densities and thresholds are `fractions.Fraction`; no floats appear on
any correctness path. Graphs are immutable after construction and safe to
share across threads.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "Graph",
    "DirectedGraph",
    "Subset",
    "DirectedDensity",
    "EdgeListError",
    "density",
    "directed_density",
    "parse_ratio",
    "format_ratio",
    "frac_ceil",
    "frac_floor",
    "ceil_log2",
    "is_neg_pow2",
    "generate",
    "cycle",
    "path",
    "complete",
    "erdos_renyi",
    "planted_dense",
    "barbell",
    "lowerbound_pair",
    "read_edge_list",
    "write_edge_list",
]


def parse_ratio(text: str) -> Fraction:
    """Parse an exact rational from a "p/q" or "p" string."""
    return Fraction(text.strip())


def format_ratio(q: Fraction | int) -> str:
    """Format a rational as "p/q", always including the denominator."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def frac_ceil(q: Fraction | int) -> int:
    q = Fraction(q)
    return -((-q.numerator) // q.denominator)


def frac_floor(q: Fraction | int) -> int:
    q = Fraction(q)
    return q.numerator // q.denominator


def ceil_log2(q: Fraction | int) -> int:
    """Smallest k with 2**k >= q, for q > 0. Exact integer arithmetic."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("ceil_log2 requires a positive argument")
    k = max(q.numerator.bit_length() - q.denominator.bit_length() - 1, 0)
    while Fraction(2) ** k < q:
        k += 1
    return k


def is_neg_pow2(q: Fraction) -> bool:
    """True iff q = 2**(-k) for some integer k >= 1."""
    q = Fraction(q)
    den = q.denominator
    return q.numerator == 1 and den > 1 and (den & (den - 1)) == 0


class Graph:
    """Immutable simple undirected graph with dense vertex/edge ids.

    Vertices are 0..n-1. Edges are stored canonically as (min, max) pairs in
    lexicographic order; the edge id of a pair is its index in that order.
    Degree-0 vertices are allowed.
    """

    __slots__ = ("n", "edges", "adj", "_nbrs", "_edge_index")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        canon = []
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            canon.append((u, v) if u < v else (v, u))
        canon.sort()
        for i in range(1, len(canon)):
            if canon[i] == canon[i - 1]:
                raise ValueError(f"duplicate edge {canon[i]}")
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(canon)
        adj: list[list[int]] = [[] for _ in range(n)]
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for eid, (u, v) in enumerate(self.edges):
            adj[u].append(eid)
            adj[v].append(eid)
            nbrs[u].append(v)
            nbrs[v].append(u)
        # adjacency lists are sorted by edge id (construction order is sorted)
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(a) for a in adj)
        self._nbrs: tuple[tuple[int, ...], ...] = tuple(tuple(a) for a in nbrs)
        self._edge_index = {e: i for i, e in enumerate(self.edges)}

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._nbrs[v]

    def incident(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def endpoints(self, eid: int) -> tuple[int, int]:
        return self.edges[eid]

    def other(self, eid: int, v: int) -> int:
        u, w = self.edges[eid]
        return w if v == u else u

    def edge_id(self, u: int, v: int) -> int:
        return self._edge_index[(u, v) if u < v else (v, u)]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edge_index

    def distances_from(self, src: int) -> list[int]:
        """BFS distances from src; -1 for unreachable vertices."""
        dist = [-1] * self.n
        dist[src] = 0
        q = deque([src])
        while q:
            v = q.popleft()
            d = dist[v] + 1
            for u in self._nbrs[v]:
                if dist[u] < 0:
                    dist[u] = d
                    q.append(u)
        return dist

    def components(self) -> list[list[int]]:
        """Connected components as sorted vertex lists, ordered by min vertex."""
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            q = deque([s])
            while q:
                v = q.popleft()
                for u in self._nbrs[v]:
                    if not seen[u]:
                        seen[u] = True
                        comp.append(u)
                        q.append(u)
            comps.append(sorted(comp))
        return comps

    def induced(self, members: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on `members`, relabeled to 0..k-1.

        Returns (subgraph, old_ids) where old_ids[i] is the original id of
        the subgraph's vertex i.
        """
        old_ids = sorted(set(members))
        pos = {v: i for i, v in enumerate(old_ids)}
        sub_edges = [
            (pos[u], pos[v]) for (u, v) in self.edges if u in pos and v in pos
        ]
        return Graph(len(old_ids), sub_edges), old_ids

    def induced_edge_count(self, members) -> int:
        mem = members if isinstance(members, (set, frozenset)) else set(members)
        return sum(1 for u, v in self.edges if u in mem and v in mem)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


class DirectedGraph:
    """Immutable simple directed graph: no self-loops, no parallel arcs.

    Opposite arcs (u, v) and (v, u) may coexist. Messages travel both ways
    along an arc, so locality is measured on the underlying undirected graph.
    """

    __slots__ = ("n", "arcs", "out_adj", "in_adj", "_arc_set")

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]]):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        canon = []
        for u, v in arcs:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc ({u}, {v}) out of range for n={n}")
            canon.append((u, v))
        canon.sort()
        for i in range(1, len(canon)):
            if canon[i] == canon[i - 1]:
                raise ValueError(f"duplicate arc {canon[i]}")
        self.n = n
        self.arcs: tuple[tuple[int, int], ...] = tuple(canon)
        out_adj: list[list[int]] = [[] for _ in range(n)]
        in_adj: list[list[int]] = [[] for _ in range(n)]
        for aid, (u, v) in enumerate(self.arcs):
            out_adj[u].append(aid)
            in_adj[v].append(aid)
        self.out_adj = tuple(tuple(a) for a in out_adj)
        self.in_adj = tuple(tuple(a) for a in in_adj)
        self._arc_set = frozenset(self.arcs)

    @property
    def m(self) -> int:
        return len(self.arcs)

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self._arc_set

    def underlying(self) -> Graph:
        """Undirected graph ignoring arc directions (opposite arcs merge)."""
        und = {(u, v) if u < v else (v, u) for u, v in self.arcs}
        return Graph(self.n, sorted(und))

    def arcs_between(self, s: Iterable[int], t: Iterable[int]) -> int:
        ss = s if isinstance(s, (set, frozenset)) else set(s)
        tt = t if isinstance(t, (set, frozenset)) else set(t)
        return sum(1 for u, v in self.arcs if u in ss and v in tt)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DirectedGraph)
            and self.n == other.n
            and self.arcs == other.arcs
        )

    def __hash__(self) -> int:
        return hash((self.n, self.arcs))

    def __repr__(self) -> str:
        return f"DirectedGraph(n={self.n}, m={self.m})"


class Subset:
    """A vertex subset tied to a graph of a fixed vertex count."""

    __slots__ = ("n", "members")

    def __init__(self, n: int, members: Iterable[int]):
        mem = frozenset(members)
        for v in mem:
            if not (0 <= v < n):
                raise ValueError(f"vertex {v} out of range for n={n}")
        self.n = n
        self.members = mem

    @classmethod
    def from_indicator(cls, bits: Sequence[int]) -> "Subset":
        return cls(len(bits), [i for i, b in enumerate(bits) if b])

    def indicator(self) -> tuple[int, ...]:
        return tuple(1 if v in self.members else 0 for v in range(self.n))

    def ids(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, v: int) -> bool:
        return v in self.members

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subset)
            and self.n == other.n
            and self.members == other.members
        )

    def __hash__(self) -> int:
        return hash((self.n, self.members))

    def __repr__(self) -> str:
        return f"Subset(n={self.n}, ids={sorted(self.members)})"


def density(g: Graph, s: Subset) -> Fraction:
    """Exact density |E(G[s])| / |s| of the induced subgraph."""
    if s.n != g.n:
        raise ValueError("subset does not belong to this graph")
    if len(s) == 0:
        raise ValueError("density is undefined for the empty subset")
    return Fraction(g.induced_edge_count(s.members), len(s))


@dataclass(frozen=True)
class DirectedDensity:
    """Exact directed density |E(S,T)| / sqrt(|S| |T|).

    The value itself is irrational in general, so comparisons go through the
    exact square |E(S,T)|^2 / (|S| |T|); the raw triple is kept alongside.
    """

    arc_count: int
    s_size: int
    t_size: int

    @property
    def squared(self) -> Fraction:
        return Fraction(self.arc_count * self.arc_count, self.s_size * self.t_size)

    def meets(self, threshold: Fraction | int) -> bool:
        """True iff the density is >= threshold (threshold must be >= 0)."""
        threshold = Fraction(threshold)
        if threshold < 0:
            raise ValueError("threshold must be non-negative")
        return self.squared >= threshold * threshold

    def exact_value(self) -> Fraction | None:
        """The density as a Fraction when it is rational, else None."""
        sq = self.squared
        rn = _isqrt_exact(sq.numerator)
        rd = _isqrt_exact(sq.denominator)
        if rn is None or rd is None:
            return None
        return Fraction(rn, rd)

    def __lt__(self, other: "DirectedDensity") -> bool:
        return self.squared < other.squared

    def __le__(self, other: "DirectedDensity") -> bool:
        return self.squared <= other.squared


def _isqrt_exact(x: int) -> int | None:
    r = math.isqrt(x)
    return r if r * r == x else None


def directed_density(g: DirectedGraph, s: Subset, t: Subset) -> DirectedDensity:
    """Exact directed density of the pair (s, t); the sets may overlap."""
    if s.n != g.n or t.n != g.n:
        raise ValueError("subset does not belong to this graph")
    if len(s) == 0 or len(t) == 0:
        raise ValueError("directed density is undefined for empty sides")
    return DirectedDensity(g.arcs_between(s.members, t.members), len(s), len(t))


# ---------------------------------------------------------------------------
# Instance generators


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs at least 1 vertex")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete graph needs at least 1 vertex")
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def erdos_renyi(n: int, p: float | Fraction, seed: int) -> Graph:
    if n < 1:
        raise ValueError("erdos_renyi needs at least 1 vertex")
    p = float(p)
    if not (0.0 <= p <= 1.0):
        raise ValueError("edge probability must lie in [0, 1]")
    rng = random.Random(seed)
    edges = [
        (i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p
    ]
    return Graph(n, edges)


def planted_dense(n_outer: int, clique_size: int, seed: int) -> Graph:
    """Sparse G(n, 0.05) background with a clique planted on a random subset."""
    if clique_size < 1 or n_outer < clique_size:
        raise ValueError("need 1 <= clique_size <= n_outer")
    rng = random.Random(seed)
    edge_set = set()
    for i in range(n_outer):
        for j in range(i + 1, n_outer):
            if rng.random() < 0.05:
                edge_set.add((i, j))
    core = rng.sample(range(n_outer), clique_size)
    for a in range(clique_size):
        for b in range(a + 1, clique_size):
            u, v = core[a], core[b]
            edge_set.add((u, v) if u < v else (v, u))
    return Graph(n_outer, sorted(edge_set))


def barbell(clique_size: int, path_len: int) -> Graph:
    """Two cliques of `clique_size` joined by a path with `path_len` edges."""
    if clique_size < 1 or path_len < 1:
        raise ValueError("need clique_size >= 1 and path_len >= 1")
    k = clique_size
    inner = path_len - 1
    n = 2 * k + inner
    edges = []
    for i in range(k):
        for j in range(i + 1, k):
            edges.append((i, j))
            edges.append((k + inner + i, k + inner + j))
    chain = [k - 1] + list(range(k, k + inner)) + [k + inner]
    edges.extend((chain[i], chain[i + 1]) for i in range(len(chain) - 1))
    return Graph(n, edges)


def lowerbound_pair(eps: Fraction) -> tuple[Graph, Graph]:
    """The cycle/path pair on l = 4/(10*eps) + 1 vertices.

    Requires 1/(10*eps) to be a positive integer. Vertex floor(l/2) is the
    middle vertex whose small-radius view is identical in both graphs.
    """
    eps = Fraction(eps)
    k = Fraction(1, 10) / eps
    if k.denominator != 1 or k < 1:
        raise ValueError("1/(10*eps) must be a positive integer")
    ell = 4 * int(k) + 1
    return cycle(ell), path(ell)


_GENERATORS = {
    "cycle": lambda params, seed: cycle(int(params["n"])),
    "path": lambda params, seed: path(int(params["n"])),
    "complete": lambda params, seed: complete(int(params["n"])),
    "erdos_renyi": lambda params, seed: erdos_renyi(
        int(params["n"]), Fraction(str(params["p"])), seed
    ),
    "planted_dense": lambda params, seed: planted_dense(
        int(params["n_outer"]), int(params["clique_size"]), seed
    ),
    "barbell": lambda params, seed: barbell(
        int(params["clique_size"]), int(params["path_len"])
    ),
    "lowerbound_pair": lambda params, seed: lowerbound_pair(
        Fraction(str(params["eps"]))
    ),
}


def generate(kind: str, params: dict, seed: int = 0):
    """Generate a named instance; deterministic for a fixed seed.

    Returns a Graph, except kind="lowerbound_pair" which returns the
    (cycle, path) pair.
    """
    if kind not in _GENERATORS:
        raise ValueError(
            f"unknown kind {kind!r}; options: {sorted(_GENERATORS)}"
        )
    return _GENERATORS[kind](params, seed)


# ---------------------------------------------------------------------------
# Edge-list text format


class EdgeListError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"{message} at line {line}")
        self.line = line


def read_edge_list(text: str) -> Graph | DirectedGraph:
    """Parse the edge-list format: header "n m" or "n m directed", then one
    "u v" pair per line."""
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise EdgeListError("missing header", 1)
    head = lines[0].split()
    directed = False
    if len(head) == 3 and head[2] == "directed":
        directed = True
    elif len(head) != 2:
        raise EdgeListError("header must be 'n m' or 'n m directed'", 1)
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise EdgeListError("header must contain integers", 1) from None
    pairs = []
    seen = set()
    lineno = 1
    for raw in lines[1:]:
        lineno += 1
        if not raw.strip():
            continue
        parts = raw.split()
        if len(parts) != 2:
            raise EdgeListError("expected 'u v'", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError("ids must be integers", lineno) from None
        if u == v:
            raise EdgeListError("self-loop", lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise EdgeListError("vertex id out of range", lineno)
        key = (u, v) if directed else ((u, v) if u < v else (v, u))
        if key in seen:
            raise EdgeListError("duplicate edge", lineno)
        seen.add(key)
        pairs.append(key)
    if len(pairs) != m:
        raise EdgeListError(
            f"header promised {m} edges but found {len(pairs)}", lineno
        )
    return DirectedGraph(n, pairs) if directed else Graph(n, pairs)


def write_edge_list(g: Graph | DirectedGraph) -> str:
    """Serialize in canonical sorted order; LF endings, UTF-8 content."""
    if isinstance(g, DirectedGraph):
        head = f"{g.n} {g.m} directed"
        body = [f"{u} {v}" for u, v in g.arcs]
    else:
        head = f"{g.n} {g.m}"
        body = [f"{u} {v}" for u, v in g.edges]
    return "\n".join([head] + body) + "\n"
