"""Daily cumulative infection curves.

Time runs in months from the start of the first generated month: day d of
month k sits at t = k + d / days_in_month, so each month end falls on a
whole number and an exponential curve with rate ln(3) triples per month.
"""
import logging

import numpy as np

from core.models import CovidDailyRecord
from synthgen.config import GrowthKind


logger = logging.getLogger(__name__)


def cumulative_curve(config, t):
    """Cumulative cases at times t (months), capped at the population"""
    t = np.asarray(t, dtype=float)
    initial = config.initial_cases
    if config.growth == GrowthKind.LOGISTIC:
        capacity = config.capacity
        if initial == 0:
            values = np.zeros_like(t)
        else:
            ratio = (capacity - initial) / initial
            values = capacity / (1.0 + ratio * np.exp(-config.growth_rate * t))
    else:
        with np.errstate(over='ignore'):
            values = initial * np.exp(config.growth_rate * t)
    return np.minimum(values, config.population)


def generate_epidemic(config):
    """One CovidDailyRecord per day of the configured months"""
    days = []
    times = []
    for index, month in enumerate(config.months):
        for day in range(1, month.days + 1):
            days.append(month.first_day.replace(day=day))
            times.append(index + day / month.days)
    counts = np.rint(cumulative_curve(config, times)).astype(np.int64)
    counts = np.maximum.accumulate(counts) if counts.size else counts

    records = [
        CovidDailyRecord(
            date=day, region=config.region,
            cumulative_infected=int(count))
        for day, count in zip(days, counts)
    ]
    if records:
        logger.info(
            'Epidemic %s: %d day(s), cumulative %d to %d', config.growth,
            len(records), records[0].cumulative_infected,
            records[-1].cumulative_infected)
    return records


def month_end_cumulative(records):
    """Cumulative count on the last recorded day of every month"""
    ends = {}
    for record in records:
        ends[(record.date.year, record.date.month)] = (
            record.cumulative_infected)
    return [ends[key] for key in sorted(ends)]
