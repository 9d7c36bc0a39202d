import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from densub.graphs import (
    DirectedGraph,
    EdgeListError,
    Graph,
    Subset,
    barbell,
    ceil_log2,
    complete,
    cycle,
    density,
    directed_density,
    erdos_renyi,
    format_ratio,
    generate,
    is_neg_pow2,
    lowerbound_pair,
    parse_ratio,
    path,
    planted_dense,
    read_edge_list,
    write_edge_list,
)


def full(g):
    return Subset(g.n, range(g.n))


class TestGraphInvariants:
    def test_rejects_self_loop(self):
        with pytest.raises(ValueError):
            Graph(3, [(1, 1)])

    def test_rejects_duplicate(self):
        with pytest.raises(ValueError):
            Graph(3, [(0, 1), (1, 0)])

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            Graph(3, [(0, 3)])

    def test_canonical_order(self):
        g = Graph(4, [(3, 2), (1, 0), (0, 2)])
        assert g.edges == ((0, 1), (0, 2), (2, 3))

    def test_adjacency_consistent(self):
        g = erdos_renyi(30, 0.2, seed=5)
        appearances = [0] * g.m
        for v in range(g.n):
            for eid in g.incident(v):
                assert v in g.endpoints(eid)
                appearances[eid] += 1
        assert all(c == 2 for c in appearances)

    def test_degree_zero_vertices_allowed(self):
        g = Graph(5, [(0, 1)])
        assert g.degree(4) == 0
        assert g.neighbors(4) == ()


class TestDensity:
    def test_path5_full(self):
        assert density(path(5), full(path(5))) == Fraction(4, 5)

    def test_cycle20_full(self):
        assert density(cycle(20), full(cycle(20))) == 1

    def test_k4_full(self):
        assert density(complete(4), full(complete(4))) == Fraction(3, 2)

    def test_empty_subset_error(self):
        with pytest.raises(ValueError):
            density(path(3), Subset(3, []))

    def test_chain_density_closed_form(self):
        for t in range(2, 12):
            assert density(path(t), full(path(t))) == 1 - Fraction(1, t)

    @given(st.integers(0, 2**31 - 1), st.data())
    @settings(max_examples=40, deadline=None)
    def test_disjoint_union_density_at_least_min(self, seed, data):
        g = erdos_renyi(14, 0.35, seed)
        ids = list(range(g.n))
        a = data.draw(st.sets(st.sampled_from(ids), min_size=1, max_size=7))
        rest = [v for v in ids if v not in a]
        b = data.draw(st.sets(st.sampled_from(rest), min_size=1, max_size=6))
        da = density(g, Subset(g.n, a))
        db = density(g, Subset(g.n, b))
        dab = density(g, Subset(g.n, a | b))
        assert dab >= min(da, db)

    def test_union_preserves_threshold(self):
        # two vertex-disjoint dense parts both above a bound stay above it
        g = barbell(5, 10)
        a = Subset(g.n, range(5))
        b = Subset(g.n, range(g.n - 5, g.n))
        thr = Fraction(9, 5)
        assert density(g, a) >= thr and density(g, b) >= thr
        assert density(g, Subset(g.n, set(a.members) | set(b.members))) >= thr


class TestDirectedDensity:
    def _opposed_stars_gadget(self, x):
        # S1={0} -> T1={1..x}; S2={x+1..2x} -> T2={2x+1}
        n = 2 * x + 2
        arcs = [(0, i) for i in range(1, x + 1)]
        arcs += [(x + i, 2 * x + 1) for i in range(1, x + 1)]
        return DirectedGraph(n, arcs)

    def test_star_pair_squared(self):
        g = self._opposed_stars_gadget(9)
        s1 = Subset(g.n, [0])
        t1 = Subset(g.n, range(1, 10))
        d = directed_density(g, s1, t1)
        assert d.squared == 9
        assert d.exact_value() == 3

    def test_union_drops_density(self):
        x = 9
        g = self._opposed_stars_gadget(x)
        s = Subset(g.n, [0] + list(range(x + 1, 2 * x + 1)))
        t = Subset(g.n, list(range(1, x + 1)) + [2 * x + 1])
        d = directed_density(g, s, t)
        # 2x / (x+1) with x = 9
        assert d.exact_value() == Fraction(18, 10)

    def test_single_arc(self):
        g = DirectedGraph(2, [(0, 1)])
        d = directed_density(g, Subset(2, [0]), Subset(2, [1]))
        assert d.exact_value() == 1

    def test_empty_side_error(self):
        g = DirectedGraph(2, [(0, 1)])
        with pytest.raises(ValueError):
            directed_density(g, Subset(2, []), Subset(2, [1]))

    def test_meets_threshold_via_square(self):
        g = self._opposed_stars_gadget(9)
        d = directed_density(g, Subset(g.n, [0]), Subset(g.n, range(1, 10)))
        assert d.meets(3)
        assert d.meets(Fraction(27, 10))
        assert not d.meets(Fraction(31, 10))


class TestGenerators:
    def test_closed_form_edge_counts(self):
        for n in (3, 8, 17):
            assert cycle(n).m == n
            assert path(n).m == n - 1
            assert complete(n).m == n * (n - 1) // 2

    def test_lowerbound_pair_eps_tenth(self):
        g1, g2 = lowerbound_pair(Fraction(1, 10))
        assert g1.n == 5 and g1.m == 5  # cycle
        assert g2.n == 5 and g2.m == 4  # chain
        assert g1.edges == ((0, 1), (0, 4), (1, 2), (2, 3), (3, 4))

    def test_lowerbound_pair_requires_integer(self):
        with pytest.raises(ValueError):
            lowerbound_pair(Fraction(1, 15))

    def test_generate_dispatch(self):
        assert generate("complete", {"n": 5}).m == 10
        pair = generate("lowerbound_pair", {"eps": "1/10"})
        assert isinstance(pair, tuple) and len(pair) == 2

    def test_generate_deterministic(self):
        a = generate("erdos_renyi", {"n": 40, "p": "1/4"}, seed=9)
        b = generate("erdos_renyi", {"n": 40, "p": "1/4"}, seed=9)
        assert a == b

    def test_erdos_renyi_invalid_p(self):
        with pytest.raises(ValueError):
            erdos_renyi(5, 1.5, seed=0)

    def test_planted_dense_contains_clique(self):
        g = planted_dense(50, 6, seed=7)
        # some 6 vertices form a K6: check via degrees inside the best core
        from densub.oracle import exact_densest

        assert exact_densest(g).value >= Fraction(5, 2)

    def test_barbell_shape(self):
        g = barbell(5, 60)
        assert g.n == 69
        assert g.m == 2 * 10 + 60


class TestEdgeListIO:
    def test_read_path3(self):
        g = read_edge_list("3 2\n0 1\n1 2\n")
        assert g == path(3)

    def test_write_k3(self):
        assert write_edge_list(complete(3)) == "3 3\n0 1\n0 2\n1 2\n"

    def test_self_loop_reports_line(self):
        with pytest.raises(EdgeListError) as exc:
            read_edge_list("2 1\n0 0\n")
        assert "self-loop" in str(exc.value) and "line 2" in str(exc.value)

    def test_duplicate_reports_line(self):
        with pytest.raises(EdgeListError) as exc:
            read_edge_list("3 3\n0 1\n1 2\n1 0\n")
        assert "line 4" in str(exc.value)

    def test_out_of_range_reports_line(self):
        with pytest.raises(EdgeListError) as exc:
            read_edge_list("3 1\n0 3\n")
        assert "line 2" in str(exc.value)

    def test_directed_round_trip(self):
        g = DirectedGraph(4, [(0, 1), (1, 0), (2, 3)])
        assert read_edge_list(write_edge_list(g)) == g

    def test_round_trip_100_random_graphs(self):
        for seed in range(100):
            rng = random.Random(seed)
            n = rng.randint(1, 30)
            g = erdos_renyi(n, rng.random(), seed)
            assert read_edge_list(write_edge_list(g)) == g

    @given(st.integers(2, 25), st.integers(0, 2**31 - 1))
    @settings(max_examples=60, deadline=None)
    def test_round_trip_property(self, n, seed):
        g = erdos_renyi(n, 0.3, seed)
        assert read_edge_list(write_edge_list(g)) == g


class TestRationalHelpers:
    def test_parse_format(self):
        assert parse_ratio("3/4") == Fraction(3, 4)
        assert format_ratio(Fraction(2)) == "2/1"
        assert format_ratio(parse_ratio("6/8")) == "3/4"

    def test_ceil_log2(self):
        assert ceil_log2(1) == 0
        assert ceil_log2(2) == 1
        assert ceil_log2(Fraction(9, 2)) == 3
        assert ceil_log2(Fraction(1, 3)) == 0

    def test_is_neg_pow2(self):
        assert is_neg_pow2(Fraction(1, 8))
        assert not is_neg_pow2(Fraction(1, 6))
        assert not is_neg_pow2(Fraction(2))
        assert not is_neg_pow2(Fraction(1))
