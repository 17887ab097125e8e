"""Signatures of the built-in rule functions."""
from dataclasses import dataclass
from typing import Optional

from django.db import models

from triggers.nodes import ValueType


class ArgKind(models.TextChoices):
    DATE = 'date'
    FIELD = 'field'
    STRING_LITERAL = 'string_literal'


@dataclass(frozen=True)
class FunctionSpec:
    returns: ValueType
    arg_kind: ArgKind
    min_args: int
    max_args: Optional[int]
    summary: str


FUNCTIONS = {
    'days_between': FunctionSpec(
        ValueType.DURATION, ArgKind.DATE, 2, 2,
        'Span from the first date to the second'),
    'duration_in_status': FunctionSpec(
        ValueType.DURATION, ArgKind.STRING_LITERAL, 1, 1,
        'Time since the claim was reported, for claims in the status'),
    'duplicate_exists': FunctionSpec(
        ValueType.BOOL, ArgKind.FIELD, 1, None,
        'Another claim shares every listed field'),
    'count_same': FunctionSpec(
        ValueType.NUMBER, ArgKind.FIELD, 1, None,
        'Claims sharing every listed field, this one included'),
    'distinct_count': FunctionSpec(
        ValueType.NUMBER, ArgKind.FIELD, 2, None,
        'Distinct values of the first field among claims sharing the rest'),
    'utilization_excess': FunctionSpec(
        ValueType.BOOL, ArgKind.FIELD, 1, 1,
        'Monthly volume of the claim\'s group above baseline mean + k sd'),
    'is_missing': FunctionSpec(
        ValueType.BOOL, ArgKind.FIELD, 1, 1,
        'The field has no value'),
    'external_data': FunctionSpec(
        ValueType.BOOL, ArgKind.STRING_LITERAL, 1, 1,
        'Placeholder for a check on data outside the claims file'),
}
