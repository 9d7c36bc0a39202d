"""Integer-only multiplicative-weights solvers for the density LP pair.

Both solvers run the same load dynamics as a CONGEST vertex program: in
each iteration every vertex hands out z units of budget to its currently
lightest incident edges (two units each to the lightest ceil(z/2)-1, the
remainder rho = z - 2*(ceil(z/2)-1) to the next), and edge loads grow by
the two endpoints' grants. Every load and grant is an integer pair (a, b)
meaning a + b*rho, so a single small integer code per edge per round
suffices on the wire; the exponential weights (1-eps)^load exist only in
the analysis and are never materialized.

The dual solver averages the grants into edge-endpoint values alpha that,
for z at least the maximum subgraph density, form a feasible fractional
orientation of cost (1+2*eps)*z. The primal solver watches the loads and
extracts a subgraph of density at least (1-3*eps)*z as soon as one shows
up among the low-load level sets. At least one of the two always delivers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .engine import (
    CONGEST,
    RoundTrace,
    SimConfig,
    VertexProgram,
    msg_bits,
    run,
)
from .graphs import Graph, Subset, ceil_log2, format_ratio, frac_ceil, is_neg_pow2

__all__ = [
    "DualSolution",
    "fractional_dual",
    "integral_primal",
    "alpha_bit_width",
    "alpha_fraction_bits",
    "default_iterations",
    "load_range_bound",
]


def default_iterations(n: int, eps: Fraction) -> int:
    """ceil((8/eps^2) * ln n), rounded up to a power of 2."""
    raw = math.ceil(8 / float(eps) ** 2 * math.log(max(n, 2)))
    return 1 << max(raw - 1, 1).bit_length()


def load_range_bound(m: int, eps: Fraction) -> int:
    """Integer upper bound on (1/eps) * ln(2m/eps) without floats.

    Uses ln x <= bits(x) * ln 2 < bits(x) * 7/10 where bits is the exact
    ceiling of log2; over-approximation only widens the scanned window.
    """
    if m < 1:
        return 0
    bits = ceil_log2(Fraction(2 * m) / eps)
    return frac_ceil(Fraction(1) / eps * bits * Fraction(7, 10))


@dataclass
class _Budget:
    """Per-iteration grant shape derived from z."""

    z: Fraction
    cz: int  # ceil(z/2)
    rho_num: int
    rho_den: int

    @classmethod
    def for_z(cls, z: Fraction) -> "_Budget":
        cz = frac_ceil(z / 2)
        rho = z - 2 * (cz - 1)
        return cls(z, cz, rho.numerator, rho.denominator)

    def grant_value(self, code: int) -> tuple[int, int]:
        # (a, b) increments meaning a + b*rho
        if code == 2:
            return 2, 0
        if code == 1:
            return 0, 1
        return 0, 0


class _LoadProgram(VertexProgram):
    """Shared load dynamics; grants travel as one small code per edge."""

    def __init__(self, budget: _Budget, iterations: int):
        self.b = budget
        self.T = iterations

    def init(self, ctx):
        deg = ctx.degree
        return {
            "la": [0] * deg,  # load integer part per incident position
            "lb": [0] * deg,  # load rho-multiples per incident position
            "ca": [0] * deg,  # cumulative own grants, integer part
            "cb": [0] * deg,  # cumulative own grants, rho-multiples
            "pend": None,  # codes granted this round, applied next round
            "pos": {eid: i for i, eid in enumerate(ctx.incident)},
        }

    def _grants(self, ctx, state) -> dict[int, int]:
        """Codes for this iteration: 2 for the lightest cz-1, 1 for the next."""
        b = self.b
        la, lb = state["la"], state["lb"]
        p, q = b.rho_num, b.rho_den
        incident = ctx.incident
        keyed = sorted(
            (la[i] * q + lb[i] * p, incident[i], i) for i in range(len(la))
        )
        codes: dict[int, int] = {}
        twos = min(b.cz - 1, len(la))
        for j in range(twos):
            codes[keyed[j][2]] = 2
        if len(la) >= b.cz:
            codes[keyed[b.cz - 1][2]] = 1
        return codes

    def step(self, ctx, state, rnd, inbox):
        la, lb = state["la"], state["lb"]
        pend = state["pend"]
        if pend is not None:
            # apply iteration rnd-1: own grants plus partner codes
            pos_of = state["pos"]
            for i, code in pend.items():
                if code == 2:
                    la[i] += 2
                else:
                    lb[i] += 1
            for eid, code in inbox.items():
                i = pos_of[eid]
                if code == 2:
                    la[i] += 2
                else:
                    lb[i] += 1
        if rnd > self.T:
            state["pend"] = None
            return state, {}, True
        codes = self._grants(ctx, state)
        ca, cb = state["ca"], state["cb"]
        for i, code in codes.items():
            if code == 2:
                ca[i] += 2
            else:
                cb[i] += 1
        state["pend"] = codes
        incident = ctx.incident
        outbox = {incident[i]: code for i, code in codes.items()}
        return state, outbox, False

    def output(self, ctx, state):
        return state


@dataclass
class DualSolution:
    """Endpoint values alpha[(edge, vertex)] with exact feasibility flags."""

    alpha: dict[tuple[int, int], Fraction]
    z: Fraction
    eps: Fraction
    iterations: int
    feasible: bool
    bit_width: int
    load_views: tuple = field(repr=False, default=())

    def to_json(self) -> dict:
        entries = [
            [e, u, format_ratio(v)] for (e, u), v in sorted(self.alpha.items())
        ]
        return {
            "z": format_ratio(self.z),
            "eps": format_ratio(self.eps),
            "T": self.iterations,
            "alpha": entries,
            "feasible": self.feasible,
            "bit_width": self.bit_width,
        }


def _check_pre(z: Fraction, eps: Fraction) -> tuple[Fraction, Fraction]:
    z, eps = Fraction(z), Fraction(eps)
    if z <= 0:
        raise ValueError("z must be positive")
    if not (0 < eps <= Fraction(1, 4)):
        raise ValueError("eps must lie in (0, 1/4]")
    return z, eps


def _numeric_width(value: Fraction) -> int:
    return max(value.numerator.bit_length(), 1)


def _assemble_dual(
    g: Graph, outs, z: Fraction, eps: Fraction, T: int
) -> DualSolution:
    budget = _Budget.for_z(z)
    rho = Fraction(budget.rho_num, budget.rho_den)
    scale = 1 + 2 * eps
    alpha: dict[tuple[int, int], Fraction] = {}
    for v in range(g.n):
        st = outs[v]
        for i, eid in enumerate(g.adj[v]):
            total = st["ca"][i] + st["cb"][i] * rho
            alpha[(eid, v)] = total / T * scale
    feasible = True
    for eid, (u, v) in enumerate(g.edges):
        if alpha[(eid, u)] + alpha[(eid, v)] < 1:
            feasible = False
            break
    if feasible:
        cap = scale * z
        for v in range(g.n):
            if sum(alpha[(eid, v)] for eid in g.adj[v]) > cap:
                feasible = False
                break
    width = max((_numeric_width(a) for a in alpha.values()), default=1)
    views = tuple(
        (tuple(outs[v]["la"]), tuple(outs[v]["lb"])) for v in range(g.n)
    )
    return DualSolution(alpha, z, eps, T, feasible, width, views)


def fractional_dual(
    g: Graph,
    z: Fraction,
    eps: Fraction,
    T_override: int | None = None,
    seed: int = 0,
    cap_bits: int | None = None,
    enforcement: str | None = None,
) -> tuple[DualSolution, RoundTrace]:
    """Averaged, (1+2*eps)-scaled grant shares per edge endpoint.

    With z at least the maximum subgraph density, the result is feasible
    for the orientation LP at cost (1+2*eps)*z (checked exactly and
    reported in the solution's `feasible` flag).
    """
    z, eps = _check_pre(z, eps)
    T = T_override or default_iterations(g.n, eps)
    budget = _Budget.for_z(z)
    cfg = SimConfig(
        model=CONGEST,
        enforcement=enforcement or ("strict" if g.n >= 16 else "permissive"),
        max_rounds=T + 2,
        seed=seed,
        cap_bits=cap_bits,
    )
    outs, trace = run(g, _LoadProgram(budget, T), cfg)
    return _assemble_dual(g, outs, z, eps, T), trace


class _PrimalDetector:
    """Per-iteration level-set scan with charged aggregation rounds.

    The wire protocol this stands for: per component and iteration, a
    min-convergecast of floor(load) on a BFS tree (2*diam+2 rounds), then a
    pipelined stream of (|V'_l|, |E(V'_l)|) pairs, one word per tree edge
    per round (diam+1+2*span rounds), then one broadcast round on success.
    Load minima travel as offsets from the previous iteration's minimum
    (the band of loads is narrow, the global minimum only grows), so every
    word stays well inside a CONGEST word. Rounds and bits are charged
    accordingly; every word is also checked against the cap.
    """

    def __init__(self, g: Graph, z: Fraction, eps: Fraction, cap: int):
        self.g = g
        self.z = z
        self.eps = eps
        self.cap = cap
        self.cz = _Budget.for_z(z).cz
        thr = (1 - 3 * eps) * z
        self.thr_num = thr.numerator
        self.thr_den = thr.denominator
        self.comps = [c for c in g.components()]
        self.diam = {}
        self.comp_edges = {}
        self.prev_lmin = {}
        for ci, comp in enumerate(self.comps):
            mem = set(comp)
            eids = [i for i, (u, v) in enumerate(g.edges) if u in mem]
            self.comp_edges[ci] = eids
            self.diam[ci] = self._diameter(comp)
            self.prev_lmin[ci] = 0
        self.trace = RoundTrace()
        b = _Budget.for_z(z)
        self.rho_num, self.rho_den = b.rho_num, b.rho_den

    def _diameter(self, comp):
        best = 0
        for v in comp:
            dist = self.g.distances_from(v)
            best = max(best, max(dist[u] for u in comp))
        return best

    def _charge_rounds(self, rounds: int) -> None:
        self.trace.rounds_executed += rounds

    def _charge_word(self, value: int, copies: int) -> None:
        bits = msg_bits(value)
        self.trace.total_bits += bits * copies
        if bits > self.trace.max_message_bits:
            self.trace.max_message_bits = bits
        if bits > self.cap and copies > 0:
            self.trace.violations.append(
                (self.trace.rounds_executed + 1, -1, bits)
            )

    def scan(self, loads_ab: list[tuple[int, int]]):
        """One iteration's scan. Returns winners {comp_index: (l, V' ids)}."""
        g = self.g
        p, q = self.rho_num, self.rho_den
        winners = {}
        round_cost = 0
        for ci, comp in enumerate(self.comps):
            eids = self.comp_edges[ci]
            if not eids:
                continue
            diam = self.diam[ci]
            tree_edges = len(comp) - 1
            ceils = []
            floor_max = 0
            l_min = None
            for eid in eids:
                a, b = loads_ab[eid]
                ceils.append((a + -((-b * p) // q), eid))
                fl = a + (b * p) // q
                if l_min is None or fl < l_min:
                    l_min = fl
                if fl > floor_max:
                    floor_max = fl
            l_max = l_min + load_range_bound(len(eids), self.eps)
            ceils.sort()
            #毎 vertex joins V' once it has cz incident edges at or below l
            cnt = {v: 0 for v in comp}
            inside: set[int] = set()
            e_inside = 0
            win = None
            scanned_until = l_min
            i = 0
            while i < len(ceils):
                c = ceils[i][0]
                if c > l_max:
                    break
                while i < len(ceils) and ceils[i][0] == c:
                    u, v = g.edges[ceils[i][1]]
                    for x in (u, v):
                        cnt[x] += 1
                        if cnt[x] == self.cz:
                            for nb in g.neighbors(x):
                                if nb in inside:
                                    e_inside += 1
                            inside.add(x)
                    i += 1
                scanned_until = c
                if inside and e_inside * self.thr_den >= self.thr_num * len(
                    inside
                ):
                    win = (max(c, l_min), sorted(inside))
                    break
            span = max(scanned_until, l_min) - l_min + 1
            # minima travel as offsets within the load band: subtree minima
            # up the tree (at most floor_max - prev), the result back down
            prev = self.prev_lmin[ci]
            self._charge_word(max(floor_max - prev, 0), tree_edges)
            self._charge_word(max(l_min - prev, 0), tree_edges)
            self.prev_lmin[ci] = l_min
            self._charge_word(len(comp), tree_edges * span)
            self._charge_word(len(eids), tree_edges * span)
            rounds_ci = (2 * diam + 2) + (diam + 1 + 2 * span)
            if win is not None:
                winners[ci] = win
                rounds_ci += diam + 1
                self._charge_word(win[0] - l_min, tree_edges)
            round_cost = max(round_cost, rounds_ci)
        self._charge_rounds(round_cost)
        return winners


def integral_primal(
    g: Graph,
    z: Fraction,
    eps: Fraction,
    T_override: int | None = None,
    seed: int = 0,
    cap_bits: int | None = None,
) -> tuple[Subset | None, RoundTrace]:
    """Load-guided search for a subgraph of density at least (1-3*eps)*z.

    Runs the grant dynamics and, each iteration, scans the level sets
    V'_l = {v : at least ceil(z/2) incident edges have ceil(load) <= l}
    for l in a window above the minimum floor(load); the first level set
    passing the exact density test is returned and the run stops. No
    output within the iteration budget is a legal outcome.
    """
    z, eps = _check_pre(z, eps)
    T = T_override or default_iterations(g.n, eps)
    budget = _Budget.for_z(z)
    cfg = SimConfig(
        model=CONGEST,
        enforcement="strict" if g.n >= 16 else "permissive",
        max_rounds=T + 2,
        seed=seed,
        cap_bits=cap_bits,
    )
    cap = cap_bits if cap_bits is not None else cfg.cap_for(g.n)
    detector = _PrimalDetector(g, z, eps, cap)
    found: dict = {}

    eid_pos = [{} for _ in range(g.n)]
    for v in range(g.n):
        for i, eid in enumerate(g.adj[v]):
            eid_pos[v][eid] = i

    def hook(rnd: int, states) -> bool:
        if rnd > T:
            return False
        loads = [(0, 0)] * g.m
        for eid, (u, _v) in enumerate(g.edges):
            st = states[u]
            i = eid_pos[u][eid]
            loads[eid] = (st["la"][i], st["lb"][i])
        winners = detector.scan(loads)
        if winners:
            found.update(winners)
            return True
        return False

    _, trace = run(g, _LoadProgram(budget, T), cfg, round_hook=hook)
    total = trace.merged_after(RoundTrace())
    total = detector.trace.merged_after(total)
    if not found:
        return None, total
    members: set[int] = set()
    for _l, ids in found.values():
        members.update(ids)
    return Subset(g.n, sorted(members)), total


def alpha_bit_width(sol: DualSolution) -> int:
    """Exact serialized width of the averaged values, with its guarantee.

    Requires integer z, eps a negative power of two, and a power-of-two
    iteration count; then every alpha is a dyadic rational whose numerator
    fits in log2(T) + log2(1/eps) + 4 bits (asserted here).
    """
    if sol.z.denominator != 1:
        raise ValueError("bit-width accounting requires integer z")
    if not is_neg_pow2(sol.eps):
        raise ValueError("bit-width accounting requires eps a negative power of 2")
    T = sol.iterations
    if T & (T - 1):
        raise ValueError("bit-width accounting requires a power-of-two T")
    width = max((_numeric_width(a) for a in sol.alpha.values()), default=1)
    bound = (
        T.bit_length() - 1 + (sol.eps.denominator.bit_length() - 1) + 4
    )
    if width > bound:
        raise AssertionError(
            f"alpha width {width} exceeds the {bound}-bit guarantee"
        )
    return width


def alpha_fraction_bits(sol: DualSolution) -> int:
    """Max number of bits after the binary point across all alpha values."""
    bits = 0
    for a in sol.alpha.values():
        den = a.denominator
        if den & (den - 1):
            raise ValueError("alpha denominators are not all powers of 2")
        bits = max(bits, den.bit_length() - 1)
    return bits
