"""Month-wise fraud and COVID-19 rate aggregation."""
import bisect
import logging
from collections import defaultdict
from dataclasses import dataclass

from core.exceptions import DomainError
from core.models import FraudStatus, MonthlyPoint
from core.months import month_range


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FraudRate:
    """Claims side of one MonthlyPoint"""
    reported_claims: int
    fraud_claims: int
    fraud_rate: float


@dataclass(frozen=True)
class CovidRate:
    """Epidemic side of one MonthlyPoint"""
    covid_cases: int
    covid_rate: float


def _counts(claims, excluded_statuses):
    excluded = {status.strip().lower() for status in excluded_statuses}
    reported = 0
    fraud = 0
    for claim in claims:
        if claim.claim_status.strip().lower() in excluded:
            continue
        reported += 1
        if claim.fraud_status == FraudStatus.FRAUD:
            fraud += 1
    return reported, fraud


def _fraud_rate(reported, fraud):
    return FraudRate(
        reported_claims=reported,
        fraud_claims=fraud,
        fraud_rate=fraud / reported if reported else 0.0,
    )


def monthly_fraud_rate(claims, month, excluded_statuses=()):
    """Fraud claims over reported claims for one month

    Claims are bucketed by claim_reported_date. Claims whose status is in
    excluded_statuses do not count as reported.
    """
    in_month = [
        claim for claim in claims
        if month.contains(claim.claim_reported_date)
    ]
    return _fraud_rate(*_counts(in_month, excluded_statuses))


def cumulative_at(records, day):
    """Cumulative count on the last record dated on or before day"""
    dates = [record.date for record in records]
    position = bisect.bisect_right(dates, day)
    if position == 0:
        return 0
    return records[position - 1].cumulative_infected


def _check_population(population):
    if population <= 0:
        raise DomainError(f'Population must be positive, got {population}')


def monthly_covid_rate(records, month, population):
    """New cases in the month over the region's population

    New cases are the cumulative count at month end minus the cumulative
    count at the previous month end; before the first record the count is 0.
    """
    _check_population(population)
    cases = (
        cumulative_at(records, month.last_day) -
        cumulative_at(records, month.previous().last_day)
    )
    cases = max(cases, 0)
    if cases > population:
        raise DomainError(
            f'{month}: {cases} new cases exceed population {population}')
    return CovidRate(covid_cases=cases, covid_rate=cases / population)


def build_joint_series(claims, covid, population, start, end,
                       excluded_statuses=()):
    """One MonthlyPoint per month from start to end inclusive"""
    months = month_range(start, end)
    _check_population(population)
    records = sorted(covid, key=lambda record: record.date)

    by_month = defaultdict(list)
    for claim in claims:
        by_month[claim.reported_month].append(claim)

    series = []
    for month in months:
        fraud = _fraud_rate(*_counts(by_month[month], excluded_statuses))
        epidemic = monthly_covid_rate(records, month, population)
        series.append(MonthlyPoint(
            month=month,
            reported_claims=fraud.reported_claims,
            fraud_claims=fraud.fraud_claims,
            fraud_rate=fraud.fraud_rate,
            covid_cases=epidemic.covid_cases,
            covid_rate=epidemic.covid_rate,
        ))
    logger.info('Built %d monthly points from %s to %s',
                len(series), start, end)
    return series
