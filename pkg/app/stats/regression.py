"""Pearson correlation and simple least-squares regression.

Rates enter as decimal fractions. The logarithmic model fits
y = slope * ln(x) + intercept with the natural logarithm, through the same
code path as the linear model.
"""
import math
from dataclasses import dataclass

import numpy as np
from django.db import models

from core.exceptions import (
    InsufficientDataError, LengthMismatchError, LogDomainError,
    SingularDesignError, ZeroVarianceError,
)
from stats.descriptive import as_series


class RegressionKind(models.TextChoices):
    LINEAR = 'linear'
    LOGARITHMIC = 'logarithmic'


@dataclass(frozen=True)
class RegressionFit:
    kind: RegressionKind
    slope: float
    intercept: float
    r_squared: float
    n: int

    @property
    def multiple_r(self):
        return math.sqrt(self.r_squared)


def paired_series(x, y, minimum=2):
    x = as_series(x, 'x')
    y = as_series(y, 'y')
    if x.size != y.size:
        raise LengthMismatchError(
            f'Series lengths differ: {x.size} and {y.size}')
    if x.size < minimum:
        raise InsufficientDataError(
            f'Need at least {minimum} points, got {x.size}')
    return x, y


def _is_constant(series):
    return bool(np.all(series == series[0]))


def pearson(x, y):
    """Pearson correlation coefficient of two equal-length series"""
    x, y = paired_series(x, y)
    for name, series in (('x', x), ('y', y)):
        if _is_constant(series):
            raise ZeroVarianceError(f'{name} is constant')
    dx = x - x.mean()
    dy = y - y.mean()
    r = float(dx @ dy / math.sqrt(float(dx @ dx) * float(dy @ dy)))
    return min(1.0, max(-1.0, r))


def _least_squares(x, y, kind):
    if _is_constant(x):
        raise SingularDesignError(
            'Predictor is constant; the slope is undetermined')
    dx = x - x.mean()
    dy = y - y.mean()
    slope = float(dx @ dy / (dx @ dx))
    intercept = float(y.mean() - slope * x.mean())
    residual = y - (slope * x + intercept)
    total = float(dy @ dy)
    if total == 0:
        r_squared = 1.0
    else:
        r_squared = 1.0 - float(residual @ residual) / total
    return RegressionFit(
        kind=kind,
        slope=slope,
        intercept=intercept,
        r_squared=min(1.0, max(0.0, r_squared)),
        n=int(x.size),
    )


def fit_linear(x, y):
    """Ordinary least squares of y on x, with intercept"""
    x, y = paired_series(x, y)
    return _least_squares(x, y, RegressionKind.LINEAR)


def log_predictor(x):
    x = as_series(x, 'x')
    for index, value in enumerate(x):
        if not value > 0:
            raise LogDomainError(
                f'Logarithm undefined for x[{index}] = {value:g}', index)
    return np.log(x)


def fit_logarithmic(x, y):
    """Least squares of y on ln(x); every x must be positive"""
    x, y = paired_series(x, y)
    return _least_squares(log_predictor(x), y, RegressionKind.LOGARITHMIC)


def predict(fit, x):
    if fit.kind == RegressionKind.LOGARITHMIC:
        if not x > 0:
            raise LogDomainError(f'Logarithm undefined for x = {x:g}')
        x = math.log(x)
    return fit.slope * x + fit.intercept


def residuals(fit, x, y):
    """Observed minus predicted, in input order"""
    x, y = paired_series(x, y, minimum=0)
    if fit.kind == RegressionKind.LOGARITHMIC:
        x = log_predictor(x)
    return [float(value) for value in y - (fit.slope * x + fit.intercept)]
