import math

import numpy as np
from django.test import SimpleTestCase
from hypothesis import assume, given, settings, strategies as st

from core.exceptions import (
    InsufficientDataError, LengthMismatchError, LogDomainError,
    SingularDesignError, ZeroVarianceError,
)
from stats.regression import (
    RegressionKind, fit_linear, fit_logarithmic, pearson, predict, residuals,
)
from stats.tests.test_descriptive import COVID_RATES, FRAUD_RATES


# Prediction and residual per month, in percent:
# (linear prediction, log prediction, linear residual, log residual)
PUBLISHED_PREDICTIONS = [
    (7.97, 5.10, -1.81, 1.06),
    (8.02, 7.51, -1.18, -0.67),
    (8.30, 9.61, 0.21, -1.10),
    (8.53, 10.24, 1.36, -0.35),
    (9.77, 11.59, 2.12, 0.30),
    (14.65, 13.14, -0.68, 0.83),
]

small_series = st.lists(
    st.integers(min_value=-1000, max_value=1000), min_size=3, max_size=20)


def paired(draw_x, draw_y):
    size = min(len(draw_x), len(draw_y))
    return [float(v) for v in draw_x[:size]], [float(v) for v in draw_y[:size]]


class PearsonTests(SimpleTestCase):

    def test_rate_correlation(self):
        """Test COVID-19 and fraud rates from March to August correlate"""
        self.assertAlmostEqual(
            pearson(COVID_RATES, FRAUD_RATES), 0.8626, delta=0.003)

    def test_self_and_anti_correlation(self):
        """Test exact positive and negative correlation"""
        self.assertAlmostEqual(pearson([1, 2, 3], [1, 2, 3]), 1.0)
        self.assertAlmostEqual(pearson([1, 2, 3], [3, 2, 1]), -1.0)

    def test_constant_series(self):
        """Test a constant series has no correlation"""
        with self.assertRaises(ZeroVarianceError):
            pearson([0.1, 0.1, 0.1], [1, 2, 3])

    def test_length_mismatch(self):
        """Test series of different lengths are rejected"""
        with self.assertRaises(LengthMismatchError):
            pearson([1, 2, 3], [1, 2])

    def test_single_point(self):
        """Test one point is too few"""
        with self.assertRaises(InsufficientDataError):
            pearson([1], [1])

    @settings(max_examples=1000, deadline=None)
    @given(small_series, small_series,
           st.integers(min_value=-50, max_value=50).filter(bool),
           st.integers(min_value=-50, max_value=50))
    def test_correlation_properties(self, xs, ys, scale, shift):
        """Test symmetry, bounds and affine invariance of the coefficient"""
        x, y = paired(xs, ys)
        assume(len(set(x)) > 1 and len(set(y)) > 1)

        r = pearson(x, y)

        self.assertLessEqual(abs(r), 1.0)
        self.assertAlmostEqual(r, pearson(y, x), delta=1e-12)
        moved = [scale * value + shift for value in x]
        self.assertAlmostEqual(
            pearson(moved, y), math.copysign(1, scale) * r, delta=1e-9)


class FitTests(SimpleTestCase):

    def test_linear_rate_fit(self):
        """Test the linear fit of fraud rate on COVID-19 rate"""
        fit = fit_linear(COVID_RATES, FRAUD_RATES)

        self.assertEqual(fit.kind, RegressionKind.LINEAR)
        self.assertAlmostEqual(fit.slope, 5.4124, delta=0.01)
        self.assertAlmostEqual(fit.intercept, 0.0796, delta=0.0005)
        self.assertAlmostEqual(fit.r_squared, 0.7442, delta=0.003)
        self.assertEqual(fit.n, 6)

    def test_logarithmic_rate_fit(self):
        """Test the logarithmic fit explains the rates better"""
        linear = fit_linear(COVID_RATES, FRAUD_RATES)
        fit = fit_logarithmic(COVID_RATES, FRAUD_RATES)

        self.assertAlmostEqual(fit.slope, 0.0118, delta=0.0002)
        self.assertAlmostEqual(fit.intercept, 0.1832, delta=0.002)
        self.assertAlmostEqual(fit.r_squared, 0.9182, delta=0.003)
        self.assertGreater(fit.r_squared, linear.r_squared)
        self.assertAlmostEqual(fit.multiple_r ** 2, fit.r_squared)

    def test_published_predictions(self):
        """Test monthly predictions and residuals of both fits"""
        linear = fit_linear(COVID_RATES, FRAUD_RATES)
        logarithmic = fit_logarithmic(COVID_RATES, FRAUD_RATES)
        linear_residuals = residuals(linear, COVID_RATES, FRAUD_RATES)
        log_residuals = residuals(logarithmic, COVID_RATES, FRAUD_RATES)

        for index, expected in enumerate(PUBLISHED_PREDICTIONS):
            actual = (
                predict(linear, COVID_RATES[index]),
                predict(logarithmic, COVID_RATES[index]),
                linear_residuals[index],
                log_residuals[index],
            )
            for value, percent in zip(actual, expected):
                self.assertAlmostEqual(value * 100, percent, delta=0.05)

    def test_exact_lines(self):
        """Test points on a line are fitted exactly"""
        x = [1.0, 2.0, 4.0, 7.0]
        linear = fit_linear(x, [2 * value + 1 for value in x])
        logarithmic = fit_logarithmic(
            x, [3 * math.log(value) + 2 for value in x])

        self.assertAlmostEqual(linear.slope, 2.0)
        self.assertAlmostEqual(linear.intercept, 1.0)
        self.assertAlmostEqual(linear.r_squared, 1.0)
        self.assertAlmostEqual(logarithmic.slope, 3.0)
        self.assertAlmostEqual(logarithmic.intercept, 2.0)
        self.assertEqual(predict(linear, 0), linear.intercept)
        for value in residuals(linear, x, [2 * value + 1 for value in x]):
            self.assertAlmostEqual(value, 0.0)

    def test_three_point_oracle(self):
        """Test coefficients against a grid search of the squared error"""
        x, y = [0.0, 1.0, 3.0], [1.0, 2.5, 3.0]
        fit = fit_linear(x, y)

        def sse(slope, intercept):
            return sum(
                (b - slope * a - intercept) ** 2 for a, b in zip(x, y))

        best = 0.0, 0.0
        for step in (1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7):
            for _ in range(3):
                best = min(
                    ((best[0] + i * step, best[1] + j * step)
                     for i in range(-10, 11) for j in range(-10, 11)),
                    key=lambda point: sse(*point))
        self.assertAlmostEqual(fit.slope, best[0], delta=1e-6)
        self.assertAlmostEqual(fit.intercept, best[1], delta=1e-6)

    def test_constant_predictor(self):
        """Test a constant x leaves the slope undetermined"""
        with self.assertRaises(SingularDesignError):
            fit_linear([2, 2, 2], [1, 2, 3])

    def test_log_domain(self):
        """Test a zero rate is reported with its index"""
        with self.assertRaises(LogDomainError) as context:
            fit_logarithmic([0.1, 0.0, 0.3], [1, 2, 3])

        self.assertEqual(context.exception.index, 1)
        with self.assertRaises(LogDomainError):
            predict(fit_logarithmic([1, 2], [1, 2]), -1.0)

    @settings(max_examples=1000, deadline=None)
    @given(small_series, small_series)
    def test_least_squares_properties(self, xs, ys):
        """Test residual sums, R² against r², and the log fit code path"""
        x, y = paired(xs, ys)
        assume(len(set(x)) > 1 and len(set(y)) > 1)

        fit = fit_linear(x, y)
        errors = residuals(fit, x, y)
        spread = max(abs(value) for value in y) * len(y)

        self.assertLessEqual(abs(sum(errors)), 1e-9 * spread)
        self.assertLessEqual(
            abs(sum(e * a for e, a in zip(errors, x))),
            1e-9 * spread * max(abs(value) for value in x))
        self.assertAlmostEqual(
            fit.r_squared, pearson(x, y) ** 2, delta=1e-12)

        positive = [abs(value) + 1 for value in x]
        if len(set(positive)) > 1:
            log_fit = fit_logarithmic(positive, y)
            on_logs = fit_linear(np.log(positive), y)
            self.assertEqual(log_fit.slope, on_logs.slope)
            self.assertEqual(log_fit.intercept, on_logs.intercept)
