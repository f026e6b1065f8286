"""
Tests for indgap.combinatorics.
"""
import math
import pytest
import unittest
from fractions import Fraction

from indgap.combinatorics import (
    bell_bound_holds,
    composition_count_check,
    compose_derivatives,
    faa_di_bruno_coeffs,
    index_tuples,
    ln2_upper_bound,
    ordered_bell,
    ordered_bell_recurrence,
    partial_bell,
    reciprocal_derivatives,
    stirling2,
)


class BellNumbersTestCase(unittest.TestCase):
    """Test cases for Stirling and ordered Bell numbers."""

    @pytest.mark.timeout(30)
    def test_ordered_bell(self):
        """Test kind: unit_tests - ordered_bell/ordered_bell_recurrence"""
        expected = [1, 1, 3, 13, 75, 541, 4683]
        self.assertEqual([ordered_bell(n) for n in range(7)], expected)
        self.assertEqual(ordered_bell_recurrence(6), expected)
        with self.assertRaises(ValueError):
            ordered_bell(-1)

    @pytest.mark.timeout(30)
    def test_stirling_and_partial_bell(self):
        """Test kind: unit_tests - stirling2/partial_bell with unit arguments"""
        self.assertEqual(stirling2(4, 2), 7)
        self.assertEqual(stirling2(5, 0), 0)
        for N in range(1, 8):
            for K in range(1, N + 1):
                self.assertEqual(partial_bell(N, K, [1] * (N - K + 1)), stirling2(N, K))
        with self.assertRaises(ValueError):
            partial_bell(4, 2, [1])

    @pytest.mark.timeout(30)
    def test_index_tuples(self):
        """Test kind: unit_tests - index_tuples"""
        self.assertEqual(sorted(index_tuples(4, 2)), [(0, 2, 0), (1, 0, 1)])
        with self.assertRaises(ValueError):
            list(index_tuples(2, 3))

    @pytest.mark.timeout(30)
    def test_composition_counts(self):
        """Test kind: unit_tests - composition_count_check"""
        for N in range(1, 11):
            for K in range(1, N + 1):
                self.assertTrue(composition_count_check(N, K))

    @pytest.mark.timeout(30)
    def test_bell_bound(self):
        """Test kind: unit_tests - bell_bound_holds and ln2_upper_bound"""
        self.assertGreater(ln2_upper_bound(), Fraction(math.log(2)))
        self.assertLess(ln2_upper_bound() - Fraction(math.log(2)), Fraction(1, 10 ** 15))
        for N in range(1, 21):
            self.assertTrue(bell_bound_holds(N))


class FaaDiBrunoTestCase(unittest.TestCase):
    """Test cases for derivatives of compositions."""

    @pytest.mark.timeout(30)
    def test_coefficients(self):
        """Test kind: unit_tests - faa_di_bruno_coeffs"""
        self.assertEqual(faa_di_bruno_coeffs(2), [(1, (0, 1), 1), (2, (2, 0), 1)])
        # the coefficients of the N-th term add up to the Bell number B_N
        self.assertEqual(sum(c for _, _, c in faa_di_bruno_coeffs(5)), 52)
        with self.assertRaises(ValueError):
            faa_di_bruno_coeffs(0)

    @pytest.mark.timeout(30)
    def test_compose_derivatives(self):
        """Test kind: unit_tests - compose_derivatives for exp(g) with g' = 2, g'' = 3"""
        self.assertEqual(compose_derivatives([1, 1, 1], [0, 2, 3], 2), 7)
        self.assertEqual(compose_derivatives([5], [0], 0), 5)

    @pytest.mark.timeout(30)
    def test_reciprocal_derivatives(self):
        """Test kind: unit_tests - reciprocal_derivatives of 1/(1 - z) at 0"""
        self.assertEqual(reciprocal_derivatives([1, -1, 0, 0], 3), [1, 1, 2, 6])
        # 1/(2 + z^2) at 0: value 1/2, second derivative -2/4
        values = reciprocal_derivatives([2, 0, 2], 2)
        self.assertEqual(values, [Fraction(1, 2), 0, Fraction(-1, 2)])
