"""Domain records shared across the fraudscope apps.

Nothing here is persisted: records are frozen dataclasses built from CSV
files, and the enumerations reuse Django's TextChoices so serializers can
take their choices directly.
"""
import datetime
from dataclasses import dataclass, fields
from decimal import Decimal
from typing import Optional

from django.db import models

from core.months import YearMonth


class BenefitType(models.TextChoices):
    MEDICAL = 'medical', 'Medical'
    SURGICAL = 'surgical', 'Surgical'


class FraudStatus(models.TextChoices):
    FRAUD = 'fraud', 'Fraud'
    NOT_FRAUD = 'not_fraud', 'Not fraud'
    UNKNOWN = 'unknown', 'Unknown'


class Severity(models.TextChoices):
    ERROR = 'error', 'Error'
    WARNING = 'warning', 'Warning'


@dataclass(frozen=True)
class ClaimRecord:
    """One health-insurance claim with the 26 fields of the claims schema"""
    policy_number: str
    insured_id: str
    claim_id: str
    benefit_type: Optional[BenefitType]
    claim_status: str
    treatment_start: Optional[datetime.date]
    treatment_end: Optional[datetime.date]
    claim_settlement_date: Optional[datetime.date]
    claim_reported_date: datetime.date
    billed_amount: Optional[Decimal]
    approved_amount: Optional[Decimal]
    paid_amount: Optional[Decimal]
    provider_id: str
    provider_name: str
    days_stayed: Optional[int]
    diagnosis_code: str
    diagnosis_name: str
    procedure_code: str
    procedure_name: str
    net_amount: Optional[Decimal]
    claim_paid_date: Optional[datetime.date]
    surgery_date: Optional[datetime.date]
    discharge_date: Optional[datetime.date]
    claim_raised_date: Optional[datetime.date]
    hospital_district: str
    fraud_status: FraudStatus

    @property
    def reported_month(self):
        return YearMonth.of(self.claim_reported_date)

    @property
    def is_fraud(self):
        return self.fraud_status == FraudStatus.FRAUD


CLAIM_FIELDS = tuple(field.name for field in fields(ClaimRecord))

MANDATORY_CLAIM_FIELDS = ('claim_id', 'claim_reported_date', 'fraud_status')

DATE_FIELDS = (
    'treatment_start', 'treatment_end', 'claim_settlement_date',
    'claim_reported_date', 'claim_paid_date', 'surgery_date',
    'discharge_date', 'claim_raised_date',
)

MONEY_FIELDS = (
    'billed_amount', 'approved_amount', 'paid_amount', 'net_amount',
)

INTEGER_FIELDS = ('days_stayed',)

TEXT_FIELDS = tuple(
    name for name in CLAIM_FIELDS
    if name not in DATE_FIELDS + MONEY_FIELDS + INTEGER_FIELDS
)


@dataclass(frozen=True)
class CovidDailyRecord:
    """Cumulative infected count for one region on one day"""
    date: datetime.date
    region: str
    cumulative_infected: int


@dataclass(frozen=True)
class MonthlyPoint:
    """Joined fraud and COVID-19 rates for one month"""
    month: YearMonth
    reported_claims: int
    fraud_claims: int
    fraud_rate: float
    covid_cases: int
    covid_rate: float


@dataclass(frozen=True)
class ValidationIssue:
    """A problem found in one input row; row 1 is the header"""
    row: int
    field: str
    severity: Severity
    message: str

    @property
    def is_error(self):
        return self.severity == Severity.ERROR
