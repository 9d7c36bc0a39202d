import random
from collections import Counter
from fractions import Fraction

import pytest

from densub.graphs import Graph, complete, cycle, erdos_renyi, path
from densub.orient import (
    Orientation,
    directed_split,
    orient_low_outdegree,
    orient_low_outdegree_detailed,
    path_decompose,
    split_levels,
    weak_orientation,
    weak_orientation_detailed,
)


def star(leaves):
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def random_regular_ish(n, d, seed):
    """d-regular-ish graph via random perfect matchings of the stubs."""
    rng = random.Random(seed)
    edges = set()
    for _ in range(d * 2):
        perm = list(range(n))
        rng.shuffle(perm)
        for i in range(0, n - 1, 2):
            u, v = perm[i], perm[i + 1]
            if u != v:
                edges.add((min(u, v), max(u, v)))
        if all(
            sum(1 for e in edges if x in e) >= d for x in range(n)
        ):
            break
    return Graph(n, sorted(edges))


class TestWeakOrientation:
    def test_triangle_trivial(self):
        g = complete(3)
        o, phases = weak_orientation(g)
        # floor(2/3) = 0: any orientation qualifies, and no degree-2 copy
        # can ever be a sink, so no phases are needed
        assert phases == 0
        assert all(o.outdegs()[v] >= 0 for v in range(3))

    def test_k4_every_vertex_out(self):
        g = complete(4)
        o, _ = weak_orientation(g)
        assert all(d >= 1 for d in o.outdegs())  # floor(3/3) = 1

    def test_guarantee_on_random_graphs(self):
        rng = random.Random(1)
        for trial in range(25):
            g = erdos_renyi(rng.randint(4, 60), 0.3, seed=trial)
            o, phases = weak_orientation(g)
            outs = o.outdegs()
            for v in range(g.n):
                assert outs[v] >= g.degree(v) // 3
            assert phases <= 8 * max(g.n - 1, 1).bit_length()

    def test_three_regular(self):
        for seed in range(10):
            g = random_regular_ish(64, 3, seed)
            o, phases = weak_orientation(g)
            outs = o.outdegs()
            for v in range(g.n):
                assert outs[v] >= g.degree(v) // 3
            assert phases <= 8 * 6

    def test_sink_history_strictly_decreasing(self):
        for seed in range(10):
            g = erdos_renyi(40, 0.5, seed=100 + seed)
            res = weak_orientation_detailed(g)
            hist = res.sink_history
            for a, b in zip(hist, hist[1:]):
                assert b < a
            # at least a third retired per phase
            for a, b in zip(hist, hist[1:]):
                assert a - b >= -(-a // 3)

    def test_orientation_text(self):
        g = path(3)
        o, _ = weak_orientation(g)
        text = o.to_text()
        assert len(text.strip().splitlines()) == 2
        assert "->" in text or "<-" in text


class TestPathDecompose:
    def test_level_zero_single_edges(self):
        g = complete(4)
        pd = path_decompose(g, 0)
        assert all(len(p) == 2 for p in pd.paths)
        assert pd.endpoint_counts() == [3, 3, 3, 3]

    def test_k7_level_one(self):
        g = complete(7)
        pd = path_decompose(g, 1)
        assert pd.max_length() <= 2
        assert sorted(pd.edge_multiset()) == sorted(g.edges)
        for v in range(7):
            assert pd.endpoint_counts()[v] <= Fraction(2, 3) * 6 + 12

    def test_level_four_partition_and_bounds(self):
        g = erdos_renyi(128, 0.25, seed=3)
        pd = path_decompose(g, 4)
        assert sorted(pd.edge_multiset()) == sorted(g.edges)
        assert pd.max_length() <= 16
        counts = pd.endpoint_counts()
        for v in range(g.n):
            assert counts[v] <= Fraction(16, 81) * g.degree(v) + 12

    def test_deterministic(self):
        g = erdos_renyi(40, 0.4, seed=5)
        assert path_decompose(g, 3) == path_decompose(g, 3)


class TestDirectedSplit:
    def test_even_cycle(self):
        g = cycle(8)
        o = directed_split(g, Fraction(1, 4))
        outs, ins = o.outdegs(), o.indegs()
        for v in range(8):
            assert abs(outs[v] - ins[v]) <= Fraction(1, 4) * 2 + 12

    def test_k33(self):
        g = complete(33)
        o = directed_split(g, Fraction(1, 4))
        outs, ins = o.outdegs(), o.indegs()
        for v in range(33):
            assert abs(outs[v] - ins[v]) <= 8 + 12

    def test_star_96(self):
        g = star(96)
        o = directed_split(g, Fraction(1, 8))
        outs, ins = o.outdegs(), o.indegs()
        assert abs(outs[0] - ins[0]) <= 96 // 8 + 12

    def test_random_graphs_both_eps(self):
        rng = random.Random(7)
        for trial in range(10):
            g = erdos_renyi(rng.randint(10, 48), 0.5, seed=trial)
            for eps in (Fraction(1, 4), Fraction(1, 8)):
                o = directed_split(g, eps)
                outs, ins = o.outdegs(), o.indegs()
                for v in range(g.n):
                    assert abs(outs[v] - ins[v]) <= eps * g.degree(v) + 12

    def test_split_levels(self):
        assert split_levels(Fraction(1, 4)) == 4  # (2/3)^4 = 16/81 <= 1/4
        assert split_levels(Fraction(2, 3)) == 1
        assert split_levels(Fraction(1)) == 0


class TestOrientPipeline:
    def test_preconditions(self):
        g = complete(20)
        with pytest.raises(ValueError):
            orient_low_outdegree(g, 128, Fraction(1, 3))  # not a power of 2
        with pytest.raises(ValueError):
            orient_low_outdegree(g, 64, Fraction(1, 4))  # 32/64 > 1/4

    def test_tree_with_large_dtilde(self):
        # contract only promises (1+eps)*dtilde even though trees are
        # 1-orientable
        g = path(40)
        o, trace = orient_low_outdegree(
            g, 129, Fraction(1, 4), T_override=32
        )
        assert o.max_outdeg() <= (1 + Fraction(1, 4)) * 129

    def test_k129_complete(self):
        # K_129: D = 64, dtilde = 128 admits eps = 1/4
        g = complete(129)
        rep = orient_low_outdegree_detailed(
            g, 128, Fraction(1, 4), T_override=64
        )
        assert rep.orientation.max_outdeg() <= 160
        assert rep.orientation.max_outdeg() >= -(-g.m // g.n)
        for rec in rep.iterations:
            assert rec.min_edge_cover >= 1
            assert rec.max_vertex_sum <= rec.bound

    def test_orientation_covers_every_edge_once(self):
        g = complete(129)
        o, _ = orient_low_outdegree(g, 128, Fraction(1, 4), T_override=64)
        assert len(o.dir_bits) == g.m
        outs = o.outdegs()
        ins = o.indegs()
        assert sum(outs) == g.m and sum(ins) == g.m
        for v in range(g.n):
            assert outs[v] + ins[v] == g.degree(v)

    def test_determinism(self):
        g = complete(129)
        a = orient_low_outdegree(g, 128, Fraction(1, 4), T_override=64)
        b = orient_low_outdegree(g, 128, Fraction(1, 4), T_override=64)
        assert a[0] == b[0]
        assert a[1].to_json() == b[1].to_json()

    def test_congest_compliance(self):
        g = complete(129)
        _, trace = orient_low_outdegree(g, 128, Fraction(1, 4), T_override=64)
        assert trace.violations == []
        assert trace.max_message_bits <= 2 * 8
