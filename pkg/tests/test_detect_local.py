import random
from fractions import Fraction

import pytest

from densub.detect_local import (
    detection_radius,
    local_detect,
    local_detect_directed,
)
from densub.graphs import (
    DirectedGraph,
    Graph,
    Subset,
    barbell,
    cycle,
    density,
    erdos_renyi,
    planted_dense,
)
from densub.oracle import exact_densest


def spaced_clique_pair():
    """Two K5s whose active regions (radius r around each) sit more than
    2r apart, forcing one black vertex per clique."""
    eps = Fraction(1, 2)
    n = 600
    for _ in range(50):
        r = detection_radius(n, eps)
        cand = 10 + (4 * r + 2) - 1  # barbell size with path length 4r+2
        if cand == n:
            break
        n = cand
    return barbell(5, 4 * detection_radius(n, eps) + 2), eps


class TestLocalDetect:
    def test_c20_all_marked(self):
        g = cycle(20)
        out, trace = local_detect(g, Fraction(1), Fraction(1, 5))
        assert out.marked.ids() == tuple(range(20))
        assert density(g, out.marked) == 1
        assert len(out.black) == 1

    def test_c20_overshoot_empty(self):
        g = cycle(20)
        out, _ = local_detect(g, Fraction(2), Fraction(1, 8))
        assert len(out.marked) == 0
        assert out.black == ()

    def test_far_clique_pair_two_blacks(self):
        g, eps = spaced_clique_pair()
        out, trace = local_detect(g, Fraction(2), eps)
        assert len(out.black) == 2
        assert density(g, out.marked) >= (1 - eps) * 2
        # both cliques marked, none of the connecting path
        assert set(range(5)) <= set(out.marked.members)
        assert set(range(g.n - 5, g.n)) <= set(out.marked.members)
        assert density(g, out.marked) == 2

    def test_round_bound(self):
        for g, eps in [
            (cycle(20), Fraction(1, 5)),
            (erdos_renyi(40, 0.2, seed=2), Fraction(1, 4)),
        ]:
            r = detection_radius(g.n, eps)
            _, trace = local_detect(g, Fraction(1), eps)
            assert trace.rounds_executed <= 4 * r + 8

    def test_soundness_any_dtilde(self):
        rng = random.Random(5)
        for trial in range(8):
            g = erdos_renyi(rng.randint(10, 40), 0.25, seed=trial)
            if g.m == 0:
                continue
            dtilde = Fraction(rng.randint(1, 4), rng.randint(1, 3))
            eps = Fraction(1, 4)
            out, _ = local_detect(g, dtilde, eps)
            if len(out.marked):
                assert density(g, out.marked) >= (1 - eps) * dtilde

    def test_completeness_at_oracle_density(self):
        rng = random.Random(6)
        for trial in range(6):
            g = planted_dense(30, 5, seed=trial)
            d = exact_densest(g).value
            out, _ = local_detect(g, d, Fraction(1, 4))
            assert len(out.marked) > 0
            assert density(g, out.marked) >= (1 - Fraction(1, 4)) * d

    def test_black_vertices_disjoint_marks(self):
        g, eps = spaced_clique_pair()
        out, _ = local_detect(g, Fraction(2), eps)
        # stamped subgraphs of distinct black vertices never share vertices:
        # blacks are > 2r apart while stamps live in radius-r balls
        dists = {b: g.distances_from(b) for b in out.black}
        for a in out.black:
            for b in out.black:
                if a < b:
                    assert dists[a][b] < 0 or dists[a][b] > 2 * out.radius


class TestLocalDetectDirected:
    def _two_far_gadgets(self, x):
        # out-star and in-star with the same peak density sqrt(x), in
        # separate components (distance above any radius)
        n = 2 * (x + 1)
        arcs = [(0, i) for i in range(1, x + 1)]
        base = x + 1
        arcs += [(base + i, base) for i in range(1, x + 1)]
        return DirectedGraph(n, arcs)

    def test_two_instances_stay_separate(self):
        dg = self._two_far_gadgets(9)
        out, _ = local_detect_directed(dg, Fraction(3), Fraction(1, 10))
        assert len(out.black) == 2
        tags = {t for t in out.s_tag if t} | {t for t in out.t_tag if t}
        assert len(tags) == 2
        thr = (1 - Fraction(1, 10)) * 3
        from densub.graphs import Subset, directed_density

        for b in out.black:
            s, t = out.pair_of(b)
            assert s and t
            d = directed_density(dg, Subset(dg.n, s), Subset(dg.n, t))
            assert d.meets(thr)

    def test_single_arc(self):
        dg = DirectedGraph(2, [(0, 1)])
        out, _ = local_detect_directed(dg, Fraction(1), Fraction(1, 2))
        assert out.black == (0,) or out.black == (1,)
        s, t = out.pair_of(out.black[0])
        assert s == (0,) and t == (1,)

    def test_empty_arcs_all_zero(self):
        dg = DirectedGraph(4, [])
        out, _ = local_detect_directed(dg, Fraction(1), Fraction(1, 2))
        assert out.s_tag == (0, 0, 0, 0)
        assert out.t_tag == (0, 0, 0, 0)

    def test_ball_too_large(self):
        dg = DirectedGraph(14, [(i, (i + 1) % 14) for i in range(14)])
        with pytest.raises(ValueError, match="too large"):
            local_detect_directed(dg, Fraction(1), Fraction(1, 2))


class TestRadius:
    def test_formula(self):
        import math

        assert detection_radius(20, Fraction(1, 5)) == 2 * math.ceil(
            30 * math.log(20)
        )
