"""A claims corpus and COVID-19 series matching the published monthly table.

Monthly reported and fraud counts, and month-end cumulative infections,
reproduce the study's series from 2019-08 to 2020-08 when fed through the
rates command with a population of 3,000,000.
"""
import logging

from claims.rates import monthly_covid_rate
from core.models import ClaimRecord, CovidDailyRecord
from core.months import YearMonth
from synthgen.generator import (
    GroundTruth, MonthTruth, draft_claim, month_seeds,
)


logger = logging.getLogger(__name__)

STUDY_POPULATION = 3000000

# month, reported claims, fraud claims, cumulative infected at month end
STUDY_ROWS = (
    ('2019-08', 860, 5, 0),
    ('2019-09', 465, 5, 0),
    ('2019-10', 420, 5, 0),
    ('2019-11', 565, 15, 0),
    ('2019-12', 875, 45, 0),
    ('2020-01', 510, 35, 0),
    ('2020-02', 475, 20, 1),
    ('2020-03', 974, 60, 42),
    ('2020-04', 2909, 199, 358),
    ('2020-05', 2973, 253, 2234),
    ('2020-06', 1789, 177, 5419),
    ('2020-07', 2657, 316, 15457),
    ('2020-08', 2041, 285, 52527),
)


def study_months():
    return [YearMonth.parse(row[0]) for row in STUDY_ROWS]


def study_claims(seed, region='study-region'):
    """Claims whose monthly counts are the published ones; returns truth too"""
    months = study_months()
    covid = study_covid(region)
    truth = GroundTruth(evaluation_date=months[-1].last_day)
    claims = []
    for (_, reported, fraud, _), month, rng in zip(
            STUDY_ROWS, months, month_seeds(seed, len(months))):
        fraud_rows = set(
            rng.choice(reported, size=fraud, replace=False).tolist())
        month_claims = [
            ClaimRecord(**draft_claim(
                rng, month, serial, serial in fraud_rows))
            for serial in range(reported)
        ]
        claims.extend(month_claims)
        truth.fraud_ids[month] = tuple(
            claim.claim_id for claim in month_claims if claim.is_fraud)
        truth.months.append(MonthTruth(
            month=month,
            claims=reported,
            fraud_fraction=fraud / reported,
            expected_fraud=float(fraud),
            fraud_claims=fraud,
            covid_rate=monthly_covid_rate(
                covid, month, STUDY_POPULATION).covid_rate,
        ))
    logger.info('Study preset: %d claims over %d months',
                len(claims), len(months))
    return claims, truth


def study_covid(region):
    """Month-end cumulative infections for the preset months"""
    return [
        CovidDailyRecord(
            date=month.last_day, region=region, cumulative_infected=cumulative)
        for month, (_, _, _, cumulative) in zip(study_months(), STUDY_ROWS)
    ]
