"""Randomized low-diameter clustering via exponential start-time shifts.

Every vertex draws a shift from Exp(eps) truncated at the budget
delta = ceil((3/eps) * ln n), wakes at round floor(delta - shift) + 1, and
claims unclaimed territory by a breadth-first race; a vertex joins the
center whose shifted distance reaches it first, ties to the smaller center
id. Truncation makes the radius bound delta hold on every run, not just
with high probability, and each edge is cut with probability about eps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .engine import CONGEST, RoundTrace, SimConfig, VertexProgram, run
from .graphs import Graph

__all__ = ["Clustering", "ldd", "ldd_traced", "shift_budget"]


@dataclass(frozen=True)
class Clustering:
    """Partition into connected clusters keyed by their center vertex."""

    cluster_of: tuple[int, ...]
    centers: tuple[int, ...]
    cut_edges: int
    budget: int  # the start-time budget delta; cluster radius <= budget

    def members(self, center: int) -> list[int]:
        return [v for v, c in enumerate(self.cluster_of) if c == center]

    def clusters(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for v, c in enumerate(self.cluster_of):
            out.setdefault(c, []).append(v)
        return out


def shift_budget(n: int, eps: Fraction) -> int:
    """Start-time budget delta = ceil((3/eps) * ln n)."""
    if n <= 1:
        return 1
    return max(1, math.ceil(3 / float(eps) * math.log(n)))


class _ClusterRace(VertexProgram):
    """Claim wave: each vertex announces its center once, when claimed."""

    def __init__(self, budget: int, eps_float: float):
        self.budget = budget
        self.eps = eps_float

    def init(self, ctx):
        u = (ctx.rand(0).getrandbits(64) + 1) * 2.0**-64
        shift = min(-math.log(u) / self.eps, float(self.budget))
        wake = int(math.floor(self.budget - shift)) + 1
        return {"wake": wake, "center": -1}

    def step(self, ctx, state, rnd, inbox):
        if state["center"] >= 0:
            return state, {}, True
        candidates = sorted(inbox.values())
        if rnd >= state["wake"]:
            candidates.append(ctx.vertex)
        if not candidates:
            return state, {}, False
        center = min(candidates)
        state = {"wake": state["wake"], "center": center}
        return state, {e: center for e in ctx.incident}, True

    def output(self, ctx, state):
        return state["center"]


def ldd_traced(
    g: Graph, eps: Fraction, seed: int, cap_bits: int | None = None
) -> tuple[Clustering, RoundTrace]:
    """Clustering plus the round/bit trace of the claim race."""
    eps = Fraction(eps)
    if not (0 < eps < 1):
        raise ValueError("eps must lie in (0, 1)")
    budget = shift_budget(g.n, eps)
    cfg = SimConfig(
        model=CONGEST,
        enforcement="permissive" if g.n < 16 else "strict",
        max_rounds=budget + 2,
        seed=seed,
        cap_bits=cap_bits,
    )
    centers_of, trace = run(g, _ClusterRace(budget, float(eps)), cfg)
    cut = sum(1 for u, v in g.edges if centers_of[u] != centers_of[v])
    centers = tuple(sorted({c for c in centers_of}))
    return (
        Clustering(tuple(centers_of), centers, cut, budget),
        trace,
    )


def ldd(g: Graph, eps: Fraction, seed: int) -> Clustering:
    """Low-diameter decomposition; deterministic for a fixed seed."""
    return ldd_traced(g, eps, seed)[0]
