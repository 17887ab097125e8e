import math
from dataclasses import dataclass

import numpy as np

from core.exceptions import DomainError


@dataclass(frozen=True)
class DescriptiveStats:
    """Summary of one series; variance uses the n - 1 denominator"""
    mean: float
    standard_error: float
    median: float
    standard_deviation: float
    sample_variance: float
    range: float
    minimum: float
    maximum: float
    count: int


def as_series(values, name='series'):
    """A 1-D float array with every value finite"""
    series = np.asarray(list(values), dtype=float)
    if series.ndim != 1:
        raise DomainError(f'{name} must be one-dimensional')
    bad = np.flatnonzero(~np.isfinite(series))
    if bad.size:
        raise DomainError(
            f'{name} has a non-finite value at index {int(bad[0])}')
    return series


def descriptive_stats(values):
    series = as_series(values)
    count = series.size
    if count == 0:
        raise DomainError('Cannot describe an empty series')

    variance = float(series.var(ddof=1)) if count >= 2 else 0.0
    deviation = math.sqrt(variance)
    minimum = float(series.min())
    maximum = float(series.max())
    return DescriptiveStats(
        mean=float(series.mean()),
        standard_error=deviation / math.sqrt(count),
        median=float(np.median(series)),
        standard_deviation=deviation,
        sample_variance=variance,
        range=maximum - minimum,
        minimum=minimum,
        maximum=maximum,
        count=count,
    )
