import itertools

import networkx as nx
import pytest
from hypothesis import given, settings

from aalpha_pm.graph import Graph, complete_graph, disjoint_union, empty_graph, extremal_graph, family_g5
from aalpha_pm.matching import (
    OddOrderError,
    has_perfect_matching_dp,
    max_matching,
    odd_components,
    tutte_witness,
)

from .conftest import graphs
from .test_graph import star, to_nx


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def assert_valid(g, result):
    used = set()
    for u, v in result.edges:
        assert g.has_edge(u, v)
        assert u not in used and v not in used
        used |= {u, v}
    assert result.size == len(result.edges)
    assert result.perfect == (2 * result.size == g.n)


class TestExamples:
    def test_k4(self):
        g = complete_graph(4)
        assert has_perfect_matching_dp(g)
        assert max_matching(g).perfect
        assert tutte_witness(g) is None

    def test_star(self):
        g = star(3)
        assert not has_perfect_matching_dp(g)
        assert max_matching(g).size == 1
        w = tutte_witness(g)
        assert w.set == frozenset({0}) and w.odd_components == 3

    def test_extremal(self):
        g = extremal_graph(8)
        assert not has_perfect_matching_dp(g)
        result = max_matching(g)
        assert result.size == 3
        w = tutte_witness(g)
        assert w.set == frozenset({0}) and w.odd_components == 3 and w.deficiency == 2

    def test_c5_odd(self):
        g = cycle(5)
        with pytest.raises(OddOrderError):
            has_perfect_matching_dp(g)
        assert max_matching(g).size == 2
        assert tutte_witness(g).set == frozenset()

    def test_k6(self):
        g = complete_graph(6)
        assert has_perfect_matching_dp(g)
        assert max_matching(g).size == 3

    def test_two_triangles(self):
        g = disjoint_union([complete_graph(3), complete_graph(3)])
        assert not has_perfect_matching_dp(g)
        w = tutte_witness(g)
        assert w.set == frozenset() and w.odd_components == 2

    def test_edgeless(self):
        assert max_matching(empty_graph(4)).size == 0
        assert not has_perfect_matching_dp(empty_graph(2))

    @pytest.mark.parametrize("n, s", [(10, 2), (12, 5), (14, 3)])
    def test_g5_has_no_perfect_matching(self, n, s):
        g = family_g5(n, s)
        assert not has_perfect_matching_dp(g)
        w = tutte_witness(g)
        assert w.deficiency >= 2

    def test_odd_components(self):
        g = extremal_graph(10)
        assert odd_components(g, 1) == 3
        assert odd_components(g, 0) == 0


class TestLimits:
    def test_dp_refuses_large(self):
        with pytest.raises(ValueError, match="max_matching"):
            has_perfect_matching_dp(complete_graph(26))

    def test_tutte_refuses_large(self):
        with pytest.raises(ValueError):
            tutte_witness(complete_graph(22))

    def test_blossom_handles_large(self):
        assert max_matching(complete_graph(60)).perfect
        assert max_matching(extremal_graph(60)).size == 29


class TestAgainstNetworkx:
    @given(graphs(1, 16))
    @settings(max_examples=200, deadline=None)
    def test_blossom_size(self, g):
        result = max_matching(g)
        assert_valid(g, result)
        assert result.size == len(nx.max_weight_matching(to_nx(g), maxcardinality=True))

    @given(graphs(2, 14))
    @settings(max_examples=150, deadline=None)
    def test_dp_matches_blossom(self, g):
        if g.n % 2:
            with pytest.raises(OddOrderError):
                has_perfect_matching_dp(g)
            return
        assert has_perfect_matching_dp(g) == max_matching(g).perfect

    @given(graphs(2, 12))
    @settings(max_examples=150, deadline=None)
    def test_tutte_dichotomy(self, g):
        w = tutte_witness(g)
        pm = max_matching(g).perfect
        assert (w is None) == pm
        if w is not None:
            assert w.odd_components > len(w.set)
            assert odd_components(g, sum(1 << v for v in w.set)) == w.odd_components
            # parity: n - |S| and o(G-S) agree mod 2
            assert w.deficiency % 2 == g.n % 2
            if g.n % 2 == 0:
                assert w.deficiency >= 2

    @given(graphs(2, 12))
    @settings(max_examples=100, deadline=None)
    def test_witness_is_minimum(self, g):
        w = tutte_witness(g)
        if w is None or not w.set:
            return
        # no set of smaller size works
        for k in range(len(w.set)):
            for combo in itertools.combinations(range(g.n), k):
                assert odd_components(g, sum(1 << v for v in combo)) <= k
