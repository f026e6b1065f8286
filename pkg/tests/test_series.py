"""
Tests for indgap.series.
"""
import pytest
import unittest
from fractions import Fraction

import mpmath

from indgap.errors import SeriesError
from indgap.indpoly import IntPoly
from indgap.series import (
    FloatSeries,
    IntSeries,
    binomial_power_series,
    cos_series,
    float_add,
    float_compose,
    float_mul,
    float_reciprocal,
    float_scale,
    series_div,
    series_inverse,
    series_mul,
    taylor_shift,
    taylor_shift_float,
)


class IntSeriesTestCase(unittest.TestCase):
    """Test cases for exact series arithmetic."""

    @pytest.mark.timeout(30)
    def test_division(self):
        """Test kind: unit_tests - series_div on z/(1-z)^3 and z(1-z)/(1-2z)"""
        self.assertEqual(series_div([0, 1], [1, -3, 3, -1], 4).coeffs, (0, 1, 3, 6, 10))
        self.assertEqual(series_div([0, 1, -1], [1, -2], 4).coeffs, (0, 1, 1, 2, 4))

    @pytest.mark.timeout(30)
    def test_inverse_and_product(self):
        """Test kind: unit_tests - series_inverse/series_mul"""
        p = IntPoly((1, -3, 1))
        inverse = series_inverse(p, 6)
        self.assertEqual(inverse.coeffs, (1, 3, 8, 21, 55, 144, 377))
        self.assertEqual(series_mul(inverse, p, 6).coeffs, (1, 0, 0, 0, 0, 0, 0))

    @pytest.mark.timeout(30)
    def test_division_needs_unit_constant(self):
        """Test kind: unit_tests - series_div rejects a divisor with constant term != 1"""
        with self.assertRaises(SeriesError):
            series_div([1], [2, 1], 3)

    @pytest.mark.timeout(30)
    def test_dict_order_mismatch(self):
        """Test kind: unit_tests - IntSeries.from_dict validates the order"""
        s = IntSeries((0, 1, 3))
        self.assertEqual(IntSeries.from_dict(s.to_dict()), s)
        with self.assertRaises(SeriesError):
            IntSeries.from_dict({'coeffs': ['1', '2'], 'order': 3})

    @pytest.mark.timeout(30)
    def test_taylor_shift(self):
        """Test kind: unit_tests - taylor_shift"""
        # 1 - 3z + z^2 around 1/2: p(1/2) = -1/4, p'(1/2) = -2, p''/2 = 1
        self.assertEqual(taylor_shift(IntPoly((1, -3, 1)), Fraction(1, 2)),
                         [Fraction(-1, 4), Fraction(-2), Fraction(1)])
        shifted = taylor_shift_float(IntPoly((1, -3, 1)), mpmath.mpf('0.5'), 128)
        self.assertAlmostEqual(float(shifted[0]), -0.25)
        self.assertAlmostEqual(float(shifted[1]), -2.0)


class FloatSeriesTestCase(unittest.TestCase):
    """Test cases for mpmath-valued series."""

    @pytest.mark.timeout(30)
    def test_cos_and_binomial(self):
        """Test kind: unit_tests - cos_series/binomial_power_series"""
        c = cos_series(4, 128)
        self.assertEqual(c[0], 1)
        self.assertEqual(c[1], 0)
        self.assertAlmostEqual(float(c[2]), -0.5)
        self.assertAlmostEqual(float(c[4]), 1 / 24)
        b = binomial_power_series(mpmath.mpf('0.5'), 3, 3, 128)
        # (1 - x/2)^-3 = 1 + 3/2 x + 3/2 x^2 + 5/4 x^3
        self.assertEqual([float(x) for x in b.coeffs], [1.0, 1.5, 1.5, 1.25])
        self.assertEqual([float(x) for x in binomial_power_series(2, 0, 2).coeffs], [1.0, 0.0, 0.0])

    @pytest.mark.timeout(30)
    def test_arithmetic(self):
        """Test kind: unit_tests - float_add/float_scale/float_mul/float_reciprocal"""
        s = FloatSeries(tuple(mpmath.mpf(x) for x in (1, 1, 0)), 128)
        t = FloatSeries(tuple(mpmath.mpf(x) for x in (1, -1, 0)), 128)
        self.assertEqual([float(x) for x in float_add(s, t).coeffs], [2.0, 0.0, 0.0])
        self.assertEqual([float(x) for x in float_scale(s, 3).coeffs], [3.0, 3.0, 0.0])
        self.assertEqual([float(x) for x in float_mul(s, t).coeffs], [1.0, 0.0, -1.0])
        self.assertEqual([float(x) for x in float_reciprocal(t, 3).coeffs], [1.0, 1.0, 1.0, 1.0])
        with self.assertRaises(SeriesError):
            float_reciprocal(FloatSeries((mpmath.mpf(0), mpmath.mpf(1))))

    @pytest.mark.timeout(30)
    def test_compose(self):
        """Test kind: unit_tests - float_compose of 1/(1-x) with cos(θ) - 1"""
        K = 6
        geometric = FloatSeries(tuple(mpmath.mpf(1) for _ in range(K + 1)), 128)
        inner = FloatSeries((mpmath.mpf(0),) + cos_series(K, 128).coeffs[1:], 128)
        composed = float_compose(geometric, inner, K)
        # 1/(2 - cos θ) = 1 - θ^2/2 + 7 θ^4/24 - ...
        self.assertAlmostEqual(float(composed[0]), 1.0)
        self.assertAlmostEqual(float(composed[2]), -0.5)
        self.assertAlmostEqual(float(composed[4]), 7 / 24)
        self.assertAlmostEqual(float(composed[3]), 0.0)
        with self.assertRaises(SeriesError):
            float_compose(geometric, geometric)
