"""Randomized dense-subgraph detection and approximation in CONGEST.

Each trial draws a fresh low-diameter clustering and runs the load-guided
primal search inside every cluster that holds no previously marked vertex;
subgraphs it finds are marked for good. Marks from different trials sit in
disjoint clusters, so the union keeps the per-piece density bound. The
clustering makes some cluster contain a nearly-densest subgraph with
constant probability per trial, and the trial count turns that into a
high-probability guarantee.

The approximation wrapper sweeps guesses 1, (1+eps), (1+eps)^2, ... and
keeps, per connected component, the marks of the highest guess that
succeeded anywhere in that component.
"""

from __future__ import annotations

from fractions import Fraction

from .decompose import ldd_traced
from .engine import (
    RoundTrace,
    SimConfig,
    component_min,
    merge_parallel,
    merge_sequential,
)
from .graphs import Graph, Subset, density
from .mwu import integral_primal

__all__ = ["congest_detect", "approx_densest", "default_trials", "phase_count"]

_MIX1 = 0x9E3779B97F4A7C15
_MIX2 = 0xBF58476D1CE4E5B9
_MASK64 = (1 << 64) - 1

DEFAULT_PRIMAL_ITERATIONS = 64


def _mix(seed: int, salt: int) -> int:
    return (seed * _MIX1 + (salt + 1) * _MIX2) & _MASK64


def default_trials(n: int) -> int:
    return max(n - 1, 1).bit_length() + 5 if n > 1 else 6


def congest_detect(
    g: Graph,
    dtilde: Fraction,
    eps: Fraction,
    seed: int,
    trials_override: int | None = None,
    primal_iterations: int = DEFAULT_PRIMAL_ITERATIONS,
) -> tuple[Subset, RoundTrace]:
    """Mark a vertex set of density at least (1-eps)*dtilde, CONGEST model.

    Marking is monotone within a run: once marked, a vertex stays marked,
    and clusters that already contain marked vertices are skipped (checked
    by a cluster-local OR convergecast, charged at the 2*budget diameter
    bound). Per cluster the primal runs with z = (1-eps/2)*dtilde and
    accuracy eps/8; its acceptance threshold (1-3*eps/8)*z exceeds
    (1-eps)*dtilde, so soundness holds on every run regardless of seeds.
    """
    dtilde, eps = Fraction(dtilde), Fraction(eps)
    if not (0 < eps < Fraction(1, 4)):
        raise ValueError("eps must lie in (0, 1/4)")
    if dtilde < 0:
        raise ValueError("dtilde must be non-negative")
    if dtilde == 0:
        return Subset(g.n, range(g.n)), RoundTrace()
    trials = trials_override or default_trials(g.n)
    cap = SimConfig().cap_for(g.n)
    z = (1 - eps / 2) * dtilde
    eps_inner = eps / 8
    marked = [False] * g.n
    trace = RoundTrace()
    for trial in range(trials):
        trial_seed = _mix(seed, trial)
        clustering, ldd_trace = ldd_traced(
            g, eps / 2, trial_seed, cap_bits=cap
        )
        trace = ldd_trace.merged_after(trace)
        # cluster-local OR over marked bits: up+down a BFS tree whose depth
        # is bounded by the clustering budget
        or_rounds = 4 * clustering.budget + 2
        or_trace = RoundTrace(rounds_executed=or_rounds)
        cluster_map = clustering.clusters()
        for members in cluster_map.values():
            or_trace.total_bits += (len(members) - 1) * 2 * 8
        or_trace.max_message_bits = 8 if g.m else 0
        trace = or_trace.merged_after(trace)
        cluster_traces = []
        for center in sorted(cluster_map):
            members = cluster_map[center]
            if any(marked[v] for v in members):
                continue
            sub, old_ids = g.induced(members)
            if sub.m == 0:
                continue
            got, ptrace = integral_primal(
                sub,
                z,
                eps_inner,
                T_override=primal_iterations,
                seed=_mix(trial_seed, center),
                cap_bits=cap,
            )
            cluster_traces.append(ptrace)
            if got is not None:
                for i in got.ids():
                    marked[old_ids[i]] = True
        if cluster_traces:
            trace = merge_parallel(cluster_traces).merged_after(trace)
    out = Subset(g.n, [v for v in range(g.n) if marked[v]])
    return out, trace


def phase_count(n: int, eps: Fraction) -> int:
    """Smallest k with (1+eps)^k >= n."""
    if n <= 1:
        return 0
    k = 0
    val = Fraction(1)
    while val < n:
        val *= 1 + eps
        k += 1
    return k


def approx_densest(
    g: Graph, eps: Fraction, seed: int, **detect_kwargs
) -> tuple[Subset, Fraction, RoundTrace]:
    """(1-eps)-approximate densest subgraph via geometric guessing.

    Runs the detector at guesses (1+eps)^i for i = 0..ceil(log_{1+eps} n);
    every vertex remembers its highest successful phase, each component
    settles on its component-wide best phase by an aggregate, and the
    marks of that phase form the output. Returns (marks, exact density of
    the marks, trace); the density is 0 for an empty output.
    """
    eps = Fraction(eps)
    if not (0 < eps < Fraction(1, 4)):
        raise ValueError("eps must lie in (0, 1/4)")
    phases = phase_count(g.n, eps) + 1
    psi = [-1] * g.n
    phase_marks: list[Subset] = []
    traces = []
    guess = Fraction(1)
    for i in range(phases):
        sub, tr = congest_detect(
            g, guess, eps, _mix(seed, 1000 + i), **detect_kwargs
        )
        traces.append(tr)
        phase_marks.append(sub)
        for v in sub.members:
            psi[v] = i
        guess *= 1 + eps
    neg_best, agg_trace = component_min(g, [-p for p in psi])
    traces.append(agg_trace)
    final = set()
    for v in range(g.n):
        j = -neg_best[v]
        if j >= 0 and psi[v] == j and v in phase_marks[j].members:
            final.add(v)
    out = Subset(g.n, sorted(final))
    dhat = density(g, out) if final else Fraction(0)
    return out, dhat, merge_sequential(traces)
