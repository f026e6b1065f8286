"""
Tests for indgap.graph.
"""
import pytest
import unittest

import networkx as nx
from hypothesis import given, settings, strategies as st

from indgap.errors import DisconnectedGraphError, GraphError, VertexCapError
from indgap.graph import (
    Graph,
    VertexSet,
    center_vertex,
    closed_neighborhood,
    component_masks,
    delete,
    diameter,
    disjoint_union,
    eccentricity,
    from_networkx,
    is_connected,
    iter_bits,
    make_complete,
    make_complete_bipartite,
    make_cycle,
    make_path,
    make_random,
    make_star,
    max_degree,
    require_connected,
    to_networkx,
)


class GraphTestCase(unittest.TestCase):
    """Test cases for the bitset graph and its queries."""

    def setUp(self):
        """Set up test data."""
        self.path = make_path(4)
        self.star = make_star(3)
        self.cycle = make_cycle(6)

    @pytest.mark.timeout(30)
    def test_generators(self):
        """Test kind: unit_tests - make_path/make_cycle/make_star/make_complete/make_complete_bipartite"""
        self.assertEqual(self.path.edges(), [(0, 1), (1, 2), (2, 3)])
        self.assertEqual(self.star.n, 4)
        self.assertEqual(self.star.degree(0), 3)
        self.assertEqual(self.cycle.edge_count, 6)
        self.assertEqual(make_complete(5).edge_count, 10)
        kbip = make_complete_bipartite(2, 3)
        self.assertEqual(kbip.n, 5)
        self.assertEqual(kbip.edge_count, 6)
        self.assertEqual(str(kbip), "kbip:2x3")

    @pytest.mark.timeout(30)
    def test_generators_reject_small_orders(self):
        """Test kind: unit_tests - generator argument validation"""
        with self.assertRaises(GraphError):
            make_cycle(2)
        with self.assertRaises(GraphError):
            make_path(0)
        with self.assertRaises(GraphError):
            make_random(5, 1.5, 0)

    @pytest.mark.timeout(30)
    def test_vertex_cap(self):
        """Test kind: unit_tests - Graph rejects more than 64 vertices"""
        with self.assertRaises(VertexCapError):
            make_path(65)
        self.assertEqual(make_path(64).n, 64)

    @pytest.mark.timeout(30)
    def test_invalid_adjacency(self):
        """Test kind: unit_tests - Graph validates symmetry and loops"""
        with self.assertRaises(GraphError):
            Graph(2, (0b10, 0b00))
        with self.assertRaises(GraphError):
            Graph(1, (0b1,))
        with self.assertRaises(GraphError):
            Graph.from_edges(3, [(0, 3)])

    @pytest.mark.timeout(30)
    def test_vertex_set(self):
        """Test kind: unit_tests - VertexSet membership and algebra"""
        s = VertexSet.of([0, 2, 5])
        self.assertIn(2, s)
        self.assertNotIn(1, s)
        self.assertEqual(len(s), 3)
        self.assertEqual(list(s), [0, 2, 5])
        self.assertEqual(list(s - VertexSet.of([2])), [0, 5])
        self.assertEqual(list(iter_bits(0b1010)), [1, 3])

    @pytest.mark.timeout(30)
    def test_closed_neighborhood_and_delete(self):
        """Test kind: unit_tests - closed_neighborhood, delete"""
        self.assertEqual(list(closed_neighborhood(self.path, 1)), [0, 1, 2])
        smaller = delete(self.path, [1])
        self.assertEqual(smaller.n, 3)
        self.assertEqual(smaller.edges(), [(1, 2)])
        self.assertEqual(delete(self.path, closed_neighborhood(self.path, 0)).edges(), [(0, 1)])
        with self.assertRaises(GraphError):
            closed_neighborhood(self.path, 4)

    @pytest.mark.timeout(30)
    def test_component_masks(self):
        """Test kind: unit_tests - component_masks"""
        self.assertEqual(component_masks(self.path.adj, 0b1101), [0b0001, 0b1100])
        self.assertEqual(component_masks(self.path.adj, 0), [])

    @pytest.mark.timeout(30)
    def test_distances(self):
        """Test kind: unit_tests - diameter, eccentricity, center_vertex, max_degree"""
        self.assertEqual(diameter(self.path), 3)
        self.assertEqual(diameter(self.cycle), 3)
        self.assertEqual(diameter(self.star), 2)
        self.assertEqual(diameter(make_path(1)), 0)
        self.assertEqual(eccentricity(self.path, 0), 3)
        self.assertEqual(center_vertex(self.path), 1)
        self.assertEqual(center_vertex(self.star), 0)
        self.assertEqual(max_degree(self.star), 3)
        self.assertEqual(max_degree(make_path(1)), 0)

    @pytest.mark.timeout(30)
    def test_disconnected(self):
        """Test kind: unit_tests - require_connected on disjoint unions and the empty graph"""
        union = disjoint_union(make_path(2), make_path(3))
        self.assertFalse(is_connected(union))
        with self.assertRaises(DisconnectedGraphError):
            diameter(union)
        with self.assertRaises(DisconnectedGraphError):
            require_connected(Graph(0, ()))

    @pytest.mark.timeout(30)
    def test_random_is_deterministic(self):
        """Test kind: unit_tests - make_random"""
        a = make_random(10, 0.4, 42)
        b = make_random(10, 0.4, 42)
        self.assertEqual(a, b)
        self.assertEqual(str(a), "gnp:10:0.4:seed42")

    @pytest.mark.timeout(30)
    def test_networkx_round_trip(self):
        """Test kind: unit_tests - to_networkx/from_networkx"""
        h = to_networkx(self.cycle)
        self.assertTrue(nx.is_isomorphic(h, nx.cycle_graph(6)))
        self.assertEqual(from_networkx(h, label="cycle:6"), self.cycle)

    @pytest.mark.timeout(60)
    @settings(max_examples=50, deadline=None)
    @given(n=st.integers(1, 12), p=st.floats(0.0, 1.0), seed=st.integers(0, 2 ** 16))
    def test_connectivity_matches_networkx(self, n, p, seed):
        """Test kind: unit_tests - is_connected and diameter against networkx"""
        g = make_random(n, p, seed)
        h = to_networkx(g)
        self.assertEqual(is_connected(g), nx.is_connected(h))
        if nx.is_connected(h):
            self.assertEqual(diameter(g), nx.diameter(h))
