"""Correlation and regression analysis of a monthly rate series."""
import logging
from dataclasses import dataclass, field
from typing import List, Optional

from rest_framework import serializers

from core.exceptions import InsufficientDataError
from core.reports import SignificantFloatField, render_document
from stats.descriptive import DescriptiveStats, descriptive_stats
from stats.regression import (
    RegressionFit, fit_linear, fit_logarithmic, pearson, predict,
)


logger = logging.getLogger(__name__)

ANALYSIS_VERSION = 1

STRENGTH_LEVELS = ((0.7, 'strong'), (0.4, 'moderate'), (0.1, 'weak'))


def interpret_correlation(r):
    """Label such as 'strong positive' for a correlation coefficient"""
    for bound, label in STRENGTH_LEVELS:
        if abs(r) >= bound:
            return f'{label} {"positive" if r > 0 else "negative"}'
    return 'negligible'


def better_fit(*fits):
    """Kind of the fit with the highest R²; earlier fits win ties"""
    fits = [fit for fit in fits if fit is not None]
    return max(fits, key=lambda fit: fit.r_squared).kind


@dataclass(frozen=True)
class MonthPrediction:
    month: str
    covid_rate: float
    fraud_rate: float
    linear_prediction: float
    linear_residual: float
    logarithmic_prediction: Optional[float]
    logarithmic_residual: Optional[float]


@dataclass
class AnalysisReport:
    start: str
    end: str
    covid_rate: DescriptiveStats
    fraud_rate: DescriptiveStats
    pearson: float
    correlation: str
    linear: RegressionFit
    logarithmic: Optional[RegressionFit]
    better_fit: str
    log_excluded_months: List[str] = field(default_factory=list)
    predictions: List[MonthPrediction] = field(default_factory=list)


class DescriptiveStatsSerializer(serializers.Serializer):
    mean = SignificantFloatField()
    standard_error = SignificantFloatField()
    median = SignificantFloatField()
    standard_deviation = SignificantFloatField()
    sample_variance = SignificantFloatField()
    range = SignificantFloatField()
    minimum = SignificantFloatField()
    maximum = SignificantFloatField()
    count = serializers.IntegerField()


class RegressionFitSerializer(serializers.Serializer):
    kind = serializers.CharField()
    slope = SignificantFloatField()
    intercept = SignificantFloatField()
    r_squared = SignificantFloatField()
    multiple_r = SignificantFloatField()
    n = serializers.IntegerField()


class MonthPredictionSerializer(serializers.Serializer):
    month = serializers.CharField()
    covid_rate = SignificantFloatField()
    fraud_rate = SignificantFloatField()
    linear_prediction = SignificantFloatField()
    linear_residual = SignificantFloatField()
    logarithmic_prediction = SignificantFloatField(allow_null=True)
    logarithmic_residual = SignificantFloatField(allow_null=True)


class AnalysisReportSerializer(serializers.Serializer):
    start = serializers.CharField()
    end = serializers.CharField()
    covid_rate = DescriptiveStatsSerializer()
    fraud_rate = DescriptiveStatsSerializer()
    pearson = SignificantFloatField()
    correlation = serializers.CharField()
    linear = RegressionFitSerializer()
    logarithmic = RegressionFitSerializer(allow_null=True)
    better_fit = serializers.CharField()
    log_excluded_months = serializers.ListField(child=serializers.CharField())
    predictions = MonthPredictionSerializer(many=True)


def analyze_series(points, start=None, end=None):
    """Statistics of fraud_rate against covid_rate over [start, end]

    Months without COVID-19 cases have no logarithm and are left out of the
    logarithmic fit; they are listed in the report.
    """
    window = [
        point for point in sorted(points, key=lambda point: point.month)
        if (start is None or point.month >= start) and
        (end is None or point.month <= end)
    ]
    if len(window) < 2:
        raise InsufficientDataError(
            f'Need at least 2 months to analyze, got {len(window)}')

    x = [point.covid_rate for point in window]
    y = [point.fraud_rate for point in window]
    r = pearson(x, y)
    linear = fit_linear(x, y)

    positive = [point for point in window if point.covid_rate > 0]
    excluded = [str(point.month) for point in window if point.covid_rate <= 0]
    logarithmic = None
    if len(positive) >= 2:
        logarithmic = fit_logarithmic(
            [point.covid_rate for point in positive],
            [point.fraud_rate for point in positive])
    else:
        logger.warning(
            'Only %d month(s) with COVID-19 cases; no logarithmic fit',
            len(positive))
    if excluded:
        logger.info(
            'Months left out of the logarithmic fit: %s', ', '.join(excluded))

    predictions = []
    for point in window:
        linear_prediction = predict(linear, point.covid_rate)
        log_prediction = None
        if logarithmic is not None and point.covid_rate > 0:
            log_prediction = predict(logarithmic, point.covid_rate)
        predictions.append(MonthPrediction(
            month=str(point.month),
            covid_rate=point.covid_rate,
            fraud_rate=point.fraud_rate,
            linear_prediction=linear_prediction,
            linear_residual=point.fraud_rate - linear_prediction,
            logarithmic_prediction=log_prediction,
            logarithmic_residual=(
                None if log_prediction is None
                else point.fraud_rate - log_prediction),
        ))

    report = AnalysisReport(
        start=str(window[0].month),
        end=str(window[-1].month),
        covid_rate=descriptive_stats(x),
        fraud_rate=descriptive_stats(y),
        pearson=r,
        correlation=interpret_correlation(r),
        linear=linear,
        logarithmic=logarithmic,
        better_fit=str(better_fit(linear, logarithmic)),
        log_excluded_months=excluded,
        predictions=predictions,
    )
    logger.info(
        'Analyzed %s..%s: r = %.4f, linear R2 = %.4f, better fit %s',
        report.start, report.end, r, linear.r_squared, report.better_fit)
    return report


def render_analysis(report):
    return render_document(
        'analysis', ANALYSIS_VERSION, AnalysisReportSerializer(report).data)
