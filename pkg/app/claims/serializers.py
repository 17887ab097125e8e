from decimal import Decimal

from rest_framework import ISO_8601, serializers

from core.exceptions import UsageError
from core.models import (
    BenefitType, CLAIM_FIELDS, ClaimRecord, CovidDailyRecord, FraudStatus,
    MonthlyPoint,
)
from core.months import YearMonth
from core.reports import format_significant


def normalize_choice(value):
    """'Not-Fraud' and 'not fraud' both become 'not_fraud'"""
    return value.strip().lower().replace('-', '_').replace(' ', '_')


def optional_date():
    return serializers.DateField(
        input_formats=[ISO_8601], required=False, allow_null=True)


def optional_money():
    return serializers.DecimalField(
        max_digits=15, decimal_places=2, min_value=Decimal('0'),
        required=False, allow_null=True,
    )


def optional_text():
    return serializers.CharField(
        max_length=255, required=False, allow_blank=True)


class ClaimRowSerializer(serializers.Serializer):
    """Validate one claims CSV row and represent a ClaimRecord as a row"""
    policy_number = optional_text()
    insured_id = optional_text()
    claim_id = serializers.CharField(max_length=64)
    benefit_type = serializers.ChoiceField(
        choices=BenefitType.choices, required=False, allow_null=True)
    claim_status = optional_text()
    treatment_start = optional_date()
    treatment_end = optional_date()
    claim_settlement_date = optional_date()
    claim_reported_date = serializers.DateField(input_formats=[ISO_8601])
    billed_amount = optional_money()
    approved_amount = optional_money()
    paid_amount = optional_money()
    provider_id = optional_text()
    provider_name = optional_text()
    days_stayed = serializers.IntegerField(
        min_value=0, required=False, allow_null=True)
    diagnosis_code = optional_text()
    diagnosis_name = optional_text()
    procedure_code = optional_text()
    procedure_name = optional_text()
    net_amount = optional_money()
    claim_paid_date = optional_date()
    surgery_date = optional_date()
    discharge_date = optional_date()
    claim_raised_date = optional_date()
    hospital_district = optional_text()
    fraud_status = serializers.ChoiceField(choices=FraudStatus.choices)

    def to_internal_value(self, data):
        """Blank cells of nullable columns mean missing"""
        cleaned = {}
        for name, value in data.items():
            if name not in self.fields or value is None:
                continue
            value = value.strip()
            field = self.fields[name]
            if value == '' and field.allow_null:
                cleaned[name] = None
                continue
            if name in ('benefit_type', 'fraud_status'):
                value = normalize_choice(value)
            cleaned[name] = value
        return super().to_internal_value(cleaned)

    def validate(self, attrs):
        start = attrs.get('treatment_start')
        end = attrs.get('treatment_end')
        if start is not None and end is not None and end < start:
            raise serializers.ValidationError(
                {'treatment_end': 'Treatment end precedes treatment start.'})
        return attrs

    def build_record(self):
        """Turn validated data into a ClaimRecord"""
        values = {}
        for name in CLAIM_FIELDS:
            field = self.fields[name]
            default = None if field.allow_null else ''
            values[name] = self.validated_data.get(name, default)
        if values['benefit_type'] is not None:
            values['benefit_type'] = BenefitType(values['benefit_type'])
        values['fraud_status'] = FraudStatus(values['fraud_status'])
        return ClaimRecord(**values)


class CovidRowSerializer(serializers.Serializer):
    """Validate one row of the cumulative COVID-19 CSV"""
    date = serializers.DateField(input_formats=[ISO_8601])
    region = serializers.CharField(max_length=128)
    cumulative_infected = serializers.IntegerField(min_value=0)

    def to_internal_value(self, data):
        cleaned = {
            name: value.strip() for name, value in data.items()
            if name in self.fields and value is not None
        }
        return super().to_internal_value(cleaned)

    def build_record(self):
        return CovidDailyRecord(**self.validated_data)


class YearMonthField(serializers.Field):
    """A YearMonth as 'YYYY-MM' text"""

    def to_internal_value(self, data):
        try:
            return YearMonth.parse(data)
        except UsageError as exc:
            raise serializers.ValidationError(str(exc))

    def to_representation(self, value):
        return str(value)


class RateField(serializers.FloatField):
    """Fraction in [0, 1], written with REPORT_DIGITS significant digits"""

    def __init__(self, **kwargs):
        kwargs.setdefault('min_value', 0.0)
        kwargs.setdefault('max_value', 1.0)
        super().__init__(**kwargs)

    def to_representation(self, value):
        return format_significant(value)


class MonthlyPointSerializer(serializers.Serializer):
    """One row of the monthly fraud and COVID-19 rate series"""
    month = YearMonthField()
    reported_claims = serializers.IntegerField(min_value=0)
    fraud_claims = serializers.IntegerField(min_value=0)
    fraud_rate = RateField()
    covid_cases = serializers.IntegerField(min_value=0)
    covid_rate = RateField()

    def validate(self, attrs):
        if attrs['fraud_claims'] > attrs['reported_claims']:
            raise serializers.ValidationError(
                {'fraud_claims': 'More fraud claims than reported claims.'})
        return attrs

    def build_record(self):
        return MonthlyPoint(**self.validated_data)


class ValidationIssueSerializer(serializers.Serializer):
    """Issue report row"""
    row = serializers.IntegerField(min_value=1)
    field = serializers.CharField()
    severity = serializers.CharField()
    message = serializers.CharField()
