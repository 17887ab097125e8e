"""Synthetic claims with fraud labels tied to an epidemic curve.

Natural claims stay clear of every data-driven trigger: each insured files
one claim, stays and lags sit below the rule thresholds, no claim is
rejected or ex-gratia, and procedure codes are drawn from a pool private to
the month so no package has a utilization baseline. Fraud claims bill more,
stay longer and file later than the others, still within those limits.
Planted violations then edit chosen claims so they fire exactly one rule.
"""
import csv
import datetime
import logging
import math
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Dict, List, Optional, Tuple

import numpy as np

from claims.rates import monthly_covid_rate
from core.exceptions import ConfigError
from core.models import DATE_FIELDS, BenefitType, ClaimRecord, FraudStatus
from core.months import YearMonth, add_months
from synthgen.config import LinkKind, Sampling


logger = logging.getLogger(__name__)

DIAGNOSES = (
    ('J12', 'Viral pneumonia'),
    ('U07.1', 'COVID-19, virus identified'),
    ('I21', 'Acute myocardial infarction'),
    ('K35', 'Acute appendicitis'),
    ('S72', 'Fracture of femur'),
    ('N20', 'Calculus of kidney'),
    ('O80', 'Single spontaneous delivery'),
    ('E11', 'Type 2 diabetes mellitus'),
)

DISTRICTS = (
    'Anantapur', 'Chittoor', 'East Godavari', 'Guntur', 'Krishna',
    'Kurnool', 'Nellore', 'Prakasam', 'Srikakulam', 'Visakhapatnam',
    'Vizianagaram', 'West Godavari',
)

NATURAL_STATUSES = ('approved', 'settled', 'pending')
PROVIDERS = 40
MONTHLY_PACKAGES = 50
UTILIZATION_PACKAGE = 'PKG-UTIL'


@dataclass(frozen=True)
class MonthTruth:
    """What the generator decided for one month"""
    month: YearMonth
    claims: int
    fraud_fraction: float
    expected_fraud: float
    fraud_claims: int
    covid_rate: float

    @property
    def fraud_rate(self):
        return self.fraud_claims / self.claims if self.claims else 0.0


@dataclass
class GroundTruth:
    months: List[MonthTruth] = field(default_factory=list)
    fraud_ids: Dict[YearMonth, Tuple[str, ...]] = field(default_factory=dict)
    planted: Dict[str, List[str]] = field(default_factory=dict)
    evaluation_date: Optional[datetime.date] = None
    baseline_window: Optional[Tuple[YearMonth, YearMonth]] = None

    @property
    def planted_pairs(self):
        """Every (claim_id, rule_id) a rule run should report"""
        return {
            (claim_id, rule_id)
            for rule_id, claim_ids in self.planted.items()
            for claim_id in claim_ids
        }


def _money(value):
    return Decimal(f'{value:.2f}')


def _log_uniform(rng, low, high):
    return float(np.exp(rng.uniform(math.log(low), math.log(high))))


def _days(count):
    return datetime.timedelta(days=int(count))


def draft_claim(rng, month, serial, fraud):
    """Field values of one natural claim; fraud shifts the draws upward"""
    tag = f'{month.year}{month.month:02d}-{serial:05d}'
    reported = month.first_day + _days(rng.integers(0, month.days))
    raised = reported - _days(rng.integers(0, 4))
    lag = rng.integers(5, 16) if fraud else rng.integers(0, 11)
    discharge = raised - _days(lag)
    stay = int(rng.integers(5, 21) if fraud else rng.integers(1, 13))
    start = discharge - _days(stay)
    surgical = rng.random() < 0.4
    status = NATURAL_STATUSES[rng.integers(0, len(NATURAL_STATUSES))]

    if fraud:
        billed = _log_uniform(rng, 60000, 450000)
    else:
        billed = _log_uniform(rng, 5000, 150000)
    approved = billed * rng.uniform(0.8, 1.0)
    settled = status != 'pending'
    settlement = reported + _days(rng.integers(5, 31)) if settled else None
    provider = int(rng.integers(1, PROVIDERS + 1))
    diagnosis_code, diagnosis_name = DIAGNOSES[
        rng.integers(0, len(DIAGNOSES))]
    package = int(rng.integers(1, MONTHLY_PACKAGES + 1))

    return {
        'policy_number': f'POL-{tag}',
        'insured_id': f'INS-{tag}',
        'claim_id': f'SYN-{tag}',
        'benefit_type': (
            BenefitType.SURGICAL if surgical else BenefitType.MEDICAL),
        'claim_status': status,
        'treatment_start': start,
        'treatment_end': discharge,
        'claim_settlement_date': settlement,
        'claim_reported_date': reported,
        'billed_amount': _money(billed),
        'approved_amount': _money(approved),
        'paid_amount': _money(approved) if settled else None,
        'provider_id': f'HSP-{provider:03d}',
        'provider_name': f'Network Hospital {provider}',
        'days_stayed': stay,
        'diagnosis_code': diagnosis_code,
        'diagnosis_name': diagnosis_name,
        'procedure_code': f'PKG-{month.year}{month.month:02d}-{package:02d}',
        'procedure_name': f'Package {package}',
        'net_amount': _money(approved) if settled else None,
        'claim_paid_date': (
            settlement + _days(rng.integers(0, 6)) if settled else None),
        'surgery_date': (
            start + _days(rng.integers(0, stay + 1)) if surgical else None),
        'discharge_date': discharge,
        'claim_raised_date': raised,
        'hospital_district': DISTRICTS[rng.integers(0, len(DISTRICTS))],
        'fraud_status': FraudStatus.FRAUD if fraud else FraudStatus.NOT_FRAUD,
    }


def _shift_dates(draft, days):
    for name in DATE_FIELDS:
        if draft[name] is not None:
            draft[name] = draft[name] + _days(days)


def _shift_treatment(draft, days):
    for name in ('treatment_start', 'treatment_end', 'discharge_date',
                 'surgery_date'):
        if draft[name] is not None:
            draft[name] = draft[name] + _days(days)


def _settle(draft, rng):
    if draft['claim_settlement_date'] is None:
        draft['claim_settlement_date'] = (
            draft['claim_reported_date'] + _days(rng.integers(5, 31)))
        draft['claim_paid_date'] = draft['claim_settlement_date']


class Planter:
    """Edits drafts of one month so each fires exactly its target rule"""

    def __init__(self, rng, month, evaluation_date, baseline_window):
        self.rng = rng
        self.month = month
        self.evaluation_date = evaluation_date
        self.baseline_window = baseline_window

    def skip_reason(self, rule_id, count):
        """Why rule_id cannot be planted count times here, or None"""
        if rule_id in ('multiple_providers', 'duplicate_package') and (
                count < 2):
            return 'needs at least two claims'
        if rule_id == 'high_utilization_package':
            if self.baseline_window is None:
                return 'no baseline months configured'
            if self.month <= self.baseline_window[1]:
                return 'month lies in the baseline window'
            if count < 2:
                return 'needs at least two claims'
        if rule_id == 'stale_reject' and not (
                add_months(self.month.first_day, 3) < self.evaluation_date):
            return 'month ends within three months of the evaluation date'
        return None

    def plant(self, rule_id, drafts):
        getattr(self, rule_id)(drafts)

    def late_submission(self, drafts):
        for draft in drafts:
            self.make_late(draft)

    def make_late(self, draft):
        lag = (draft['claim_raised_date'] - draft['discharge_date']).days
        target = int(self.rng.integers(16, 41))
        _shift_treatment(draft, lag - target)

    def long_stay(self, drafts):
        for draft in drafts:
            stay = int(self.rng.integers(21, 31))
            draft['days_stayed'] = stay
            draft['treatment_start'] = draft['treatment_end'] - _days(stay)
            if draft['surgery_date'] is not None:
                draft['surgery_date'] = draft['treatment_start']

    def coverage_extension(self, drafts):
        for draft in drafts:
            length = int(self.rng.integers(31, 61))
            draft['treatment_start'] = draft['treatment_end'] - _days(length)

    def high_value_bill(self, drafts):
        for draft in drafts:
            draft['billed_amount'] = _money(
                self.rng.uniform(500001, 900000))

    def exgratia_threshold(self, drafts):
        for draft in drafts:
            payment = _money(self.rng.uniform(1000001, 1500000))
            draft['claim_status'] = 'ex-gratia'
            draft['approved_amount'] = payment
            draft['paid_amount'] = payment
            draft['net_amount'] = payment
            _settle(draft, self.rng)

    def stale_reject(self, drafts):
        for draft in drafts:
            reported = draft['claim_reported_date']
            _shift_dates(draft, (self.month.first_day - reported).days)
            draft['claim_status'] = 'rejected'
            draft['approved_amount'] = Decimal('0.00')
            draft['paid_amount'] = None
            draft['net_amount'] = None
            draft['claim_settlement_date'] = None
            draft['claim_paid_date'] = None

    def multiple_providers(self, drafts):
        first = drafts[0]
        for index, draft in enumerate(drafts):
            draft['policy_number'] = first['policy_number']
            draft['insured_id'] = first['insured_id']
            draft['diagnosis_code'] = first['diagnosis_code']
            draft['diagnosis_name'] = first['diagnosis_name']
            draft['provider_id'] = f'HSP-{PROVIDERS + 1 + index:03d}'
            draft['provider_name'] = f'Consulting Clinic {index + 1}'
            draft['procedure_code'] = f'{first["procedure_code"]}-MP{index}'

    def duplicate_package(self, drafts):
        first = drafts[0]
        for draft in drafts:
            for name in ('policy_number', 'insured_id', 'procedure_code',
                         'procedure_name', 'provider_id', 'provider_name'):
                draft[name] = first[name]

    def high_utilization_package(self, drafts):
        for draft in drafts:
            self.use_utilization_package(draft)

    def use_utilization_package(self, draft):
        draft['procedure_code'] = UTILIZATION_PACKAGE
        draft['procedure_name'] = 'Highly utilized package'


def link_fraction(config, covid_rate):
    """Fraud fraction for a month's covid rate, clamped to [0, 1]"""
    if config.link == LinkKind.LOGARITHMIC:
        if covid_rate <= 0:
            return config.base_fraud_fraction
        value = config.intercept + config.link_slope * math.log(covid_rate)
    else:
        value = config.intercept + config.link_slope * covid_rate
    if not math.isfinite(value):
        raise ConfigError(
            f'The {config.link} link gives {value} for covid rate '
            f'{covid_rate}', key='link')
    return min(max(value, 0.0), 1.0)


def draw_fraud(rng, config, count, fraction):
    """Row indexes of the month's fraud claims"""
    if config.sampling == Sampling.BERNOULLI:
        return np.flatnonzero(rng.random(count) < fraction)
    fraud = min(math.floor(fraction * count + 0.5), count)
    return np.sort(rng.choice(count, size=fraud, replace=False))


def _take(rng, available, count):
    chosen = rng.choice(len(available), size=count, replace=False)
    picked = [available[index] for index in sorted(chosen)]
    for index in picked:
        available.remove(index)
    return picked


def month_seeds(seed, count):
    """One independent generator per month, split from a single seed"""
    return [
        np.random.default_rng(child)
        for child in np.random.SeedSequence(seed).spawn(count)
    ]


def generate_claims(config, epidemic):
    """Claims for every configured month and the truth behind them"""
    months = config.months
    records = sorted(epidemic, key=lambda record: record.date)
    truth = GroundTruth(
        evaluation_date=config.end.last_day,
        baseline_window=config.baseline_window,
    )
    claims = []
    for month, rng in zip(months, month_seeds(config.seed, len(months))):
        covid_rate = monthly_covid_rate(
            records, month, config.population).covid_rate
        fraction = link_fraction(config, covid_rate)
        count = config.claims_per_month
        fraud_rows = set(draw_fraud(rng, config, count, fraction).tolist())
        drafts = [
            draft_claim(rng, month, serial, serial in fraud_rows)
            for serial in range(count)
        ]

        available = list(range(count))
        planter = Planter(
            rng, month, truth.evaluation_date, truth.baseline_window)
        for rule_id, wanted in config.planted(month).items():
            reason = planter.skip_reason(rule_id, wanted)
            if reason is None and wanted > len(available):
                reason = f'only {len(available)} claim(s) left'
            if reason is not None:
                logger.warning('%s: skipped %d planted %s: %s',
                               month, wanted, rule_id, reason)
                continue
            rows = _take(rng, available, wanted)
            planter.plant(rule_id, [drafts[row] for row in rows])
            truth.planted.setdefault(rule_id, []).extend(
                drafts[row]['claim_id'] for row in rows)

        window = truth.baseline_window
        if window is not None and month <= window[1] and available:
            row = _take(rng, available, 1)[0]
            planter.use_utilization_package(drafts[row])
        natural = 0
        for row in available:
            if rng.random() < config.natural_violation_rate:
                planter.make_late(drafts[row])
                natural += 1

        month_claims = [ClaimRecord(**draft) for draft in drafts]
        claims.extend(month_claims)
        truth.fraud_ids[month] = tuple(
            claim.claim_id for claim in month_claims if claim.is_fraud)
        truth.months.append(MonthTruth(
            month=month,
            claims=count,
            fraud_fraction=fraction,
            expected_fraud=fraction * count,
            fraud_claims=len(truth.fraud_ids[month]),
            covid_rate=covid_rate,
        ))
        logger.info(
            '%s: %d claims, %d fraud (link %.6f), %d natural violation(s)',
            month, count, len(truth.fraud_ids[month]), fraction, natural)
    for claim_ids in truth.planted.values():
        claim_ids.sort()
    return claims, truth


def write_ground_truth_csv(claims, truth, stream):
    """One row per claim: its month, fraud label and planted rule"""
    planted = {
        claim_id: rule_id for claim_id, rule_id in truth.planted_pairs}
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(('claim_id', 'month', 'fraud', 'planted_rule'))
    for claim in claims:
        writer.writerow((
            claim.claim_id, str(claim.reported_month), int(claim.is_fraud),
            planted.get(claim.claim_id, '')))
