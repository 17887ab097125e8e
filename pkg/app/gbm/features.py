"""Claim feature encoding.

The schema is fixed when it is built: category vocabularies and frequency
tables come from the claims it was built on, and values never seen there
encode as absent. Missing numbers and durations encode as NaN.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
from django.db import models

from core.conf import baseline_window, fraud_settings
from core.exceptions import DomainError, EncodingError
from core.models import INTEGER_FIELDS, MONEY_FIELDS
from triggers.catalog import data_rules
from triggers.context import field_value, fold
from triggers.engine import flag_claims, run_rules


logger = logging.getLogger(__name__)

NUMERIC_FIELDS = MONEY_FIELDS + INTEGER_FIELDS

DURATION_FIELDS = (
    ('treatment_length', 'treatment_start', 'treatment_end'),
    ('discharge_to_raised', 'discharge_date', 'claim_raised_date'),
    ('reported_to_settlement', 'claim_reported_date',
     'claim_settlement_date'),
    ('surgery_to_discharge', 'surgery_date', 'discharge_date'),
)

CATEGORICAL_FIELDS = (
    'benefit_type', 'claim_status', 'provider_id', 'diagnosis_code',
    'procedure_code', 'hospital_district',
)

TRIGGER_FLAG = 'trigger_flag'


class FeatureKind(models.TextChoices):
    NUMERIC = 'numeric'
    DURATION_DAYS = 'duration_days'
    ONE_HOT = 'one_hot'
    FREQUENCY = 'frequency'
    FLAG = 'flag'


@dataclass(frozen=True)
class Feature:
    name: str
    kind: FeatureKind
    source: str
    end: Optional[str] = None
    category: Optional[str] = None
    frequencies: Dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class FeatureSchema:
    features: Tuple[Feature, ...]

    @property
    def arity(self):
        return len(self.features)

    @property
    def names(self):
        return [feature.name for feature in self.features]

    @property
    def uses_trigger_flags(self):
        return any(
            feature.kind == FeatureKind.FLAG for feature in self.features)


def build_schema(claims, one_hot_limit=None, trigger_flags=False):
    """Feature schema for a claim set

    Categorical fields with at most one_hot_limit distinct values are
    one-hot encoded, wider ones by relative frequency.
    """
    claims = list(claims)
    if not claims:
        raise DomainError('Cannot build a feature schema from no claims')
    if one_hot_limit is None:
        one_hot_limit = fraud_settings()['CATEGORICAL_ONE_HOT_LIMIT']

    features = [
        Feature(name, FeatureKind.NUMERIC, name) for name in NUMERIC_FIELDS]
    features += [
        Feature(name, FeatureKind.DURATION_DAYS, start, end=end)
        for name, start, end in DURATION_FIELDS
    ]
    for name in CATEGORICAL_FIELDS:
        counts = Counter(
            fold(str(value)) for value in (
                field_value(claim, name) for claim in claims)
            if value is not None)
        if len(counts) <= one_hot_limit:
            features += [
                Feature(f'{name}={value}', FeatureKind.ONE_HOT, name,
                        category=value)
                for value in sorted(counts)
            ]
        else:
            features.append(Feature(
                f'{name}_frequency', FeatureKind.FREQUENCY, name,
                frequencies={
                    value: count / len(claims)
                    for value, count in sorted(counts.items())
                },
            ))
    if trigger_flags:
        features.append(Feature(TRIGGER_FLAG, FeatureKind.FLAG, TRIGGER_FLAG))

    schema = FeatureSchema(tuple(features))
    logger.info('Feature schema: %d column(s) from %d claims',
                schema.arity, len(claims))
    return schema


def _days(claim, start, end):
    first = getattr(claim, start)
    last = getattr(claim, end)
    if first is None or last is None:
        return np.nan
    return float((last - first).days)


def _encode_value(feature, claim, flagged):
    if feature.kind == FeatureKind.NUMERIC:
        value = getattr(claim, feature.source)
        return np.nan if value is None else float(value)
    if feature.kind == FeatureKind.DURATION_DAYS:
        return _days(claim, feature.source, feature.end)
    if feature.kind == FeatureKind.FLAG:
        return float(bool(flagged))
    value = field_value(claim, feature.source)
    value = None if value is None else fold(str(value))
    if feature.kind == FeatureKind.ONE_HOT:
        return float(value == feature.category)
    return feature.frequencies.get(value, 0.0)


def encode_claim(schema, claim, flagged=False):
    """One feature vector of the schema's arity"""
    try:
        return np.array(
            [_encode_value(feature, claim, flagged)
             for feature in schema.features],
            dtype=float)
    except (AttributeError, TypeError) as exc:
        raise EncodingError(f'Cannot encode {claim!r}: {exc}') from exc


def encode_claims(schema, claims, flags=None):
    """Feature matrix, one row per claim; flags maps claim_id to ClaimFlag"""
    flags = flags or {}
    rows = []
    for claim in claims:
        flag = flags.get(claim.claim_id)
        rows.append(encode_claim(
            schema, claim, flagged=flag is not None and flag.flagged))
    if not rows:
        return np.empty((0, schema.arity))
    return np.vstack(rows)


def builtin_trigger_flags(claims):
    """claim_id -> ClaimFlag from the data-driven built-in triggers"""
    hits, _ = run_rules(data_rules(), claims, baseline_window())
    return flag_claims(hits, claims)
