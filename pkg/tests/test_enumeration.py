"""
Tests for indgap.enumeration.
"""
import pytest
import unittest

import networkx as nx

from indgap.enumeration import connected_graphs, connected_graphs_upto, random_connected_graphs
from indgap.graph import is_connected, to_networkx


class ConnectedGraphsTestCase(unittest.TestCase):
    """Test cases for the isomorphism-class enumeration."""

    @pytest.mark.timeout(60)
    def test_counts(self):
        """Test kind: unit_tests - connected_graphs counts for n <= 6"""
        self.assertEqual([len(connected_graphs(n)) for n in range(1, 7)], [1, 1, 2, 6, 21, 112])

    @pytest.mark.timeout(60)
    def test_pairwise_non_isomorphic(self):
        """Test kind: unit_tests - connected_graphs returns connected, distinct classes"""
        graphs = [to_networkx(g) for g in connected_graphs(5)]
        self.assertTrue(all(nx.is_connected(h) for h in graphs))
        for i in range(len(graphs)):
            for j in range(i + 1, len(graphs)):
                self.assertFalse(nx.is_isomorphic(graphs[i], graphs[j]))

    @pytest.mark.timeout(30)
    def test_upto(self):
        """Test kind: unit_tests - connected_graphs_upto"""
        self.assertEqual(len(connected_graphs_upto(4)), 10)
        self.assertEqual(len(connected_graphs_upto(4, n_min=2)), 9)

    @pytest.mark.timeout(30)
    def test_range(self):
        """Test kind: unit_tests - connected_graphs outside 1..8"""
        with self.assertRaises(ValueError):
            connected_graphs(0)
        with self.assertRaises(ValueError):
            connected_graphs(9)

    @pytest.mark.slow
    @pytest.mark.timeout(600)
    def test_counts_seven(self):
        """Test kind: unit_tests - connected_graphs(7)"""
        self.assertEqual(len(connected_graphs(7)), 853)

    @pytest.mark.slow
    @pytest.mark.timeout(3600)
    def test_counts_eight(self):
        """Test kind: unit_tests - connected_graphs(8) by one-vertex extension"""
        self.assertEqual(len(connected_graphs(8)), 11117)


class RandomConnectedGraphsTestCase(unittest.TestCase):
    """Test cases for random_connected_graphs."""

    @pytest.mark.timeout(30)
    def test_connected_and_sized(self):
        """Test kind: unit_tests - random_connected_graphs samples"""
        graphs = random_connected_graphs(10, seed=3)
        self.assertEqual(len(graphs), 10)
        for g in graphs:
            self.assertTrue(is_connected(g))
            self.assertTrue(9 <= g.n <= 12)

    @pytest.mark.timeout(30)
    def test_deterministic(self):
        """Test kind: unit_tests - random_connected_graphs is seeded"""
        first = random_connected_graphs(5, (6, 8), (0.5,), seed=11)
        second = random_connected_graphs(5, (6, 8), (0.5,), seed=11)
        self.assertEqual([g.adj for g in first], [g.adj for g in second])
