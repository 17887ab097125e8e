"""Generator configuration read from plain key = value files.

    # comments and blank lines are ignored
    seed = 42
    from = 2020-03
    to = 2020-08
    plant.late_submission = 3
    plant.late_submission.2020-05 = 5

A plant key without a month applies to every month; a key naming a month
overrides it for that month.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from django.db import models
from rest_framework import serializers

from claims.serializers import YearMonthField
from core.conf import fraud_settings
from core.exceptions import ConfigError, UsageError
from core.months import YearMonth, month_range
from triggers.catalog import data_rules


logger = logging.getLogger(__name__)

PLANT_PREFIX = 'plant.'


class GrowthKind(models.TextChoices):
    EXPONENTIAL = 'exponential'
    LOGISTIC = 'logistic'


class LinkKind(models.TextChoices):
    LOGARITHMIC = 'logarithmic'
    LINEAR = 'linear'


class Sampling(models.TextChoices):
    EXACT = 'exact'
    BERNOULLI = 'bernoulli'


@dataclass(frozen=True, kw_only=True)
class SynthConfig:
    seed: int
    start: YearMonth
    end: YearMonth
    population: int
    region: str
    growth: GrowthKind = GrowthKind.EXPONENTIAL
    initial_cases: int = 10
    growth_rate: float = 1.0
    capacity: Optional[int] = None
    claims_per_month: int = 1000
    base_fraud_fraction: float = 0.05
    link: LinkKind = LinkKind.LOGARITHMIC
    link_slope: float = 0.0
    link_intercept: Optional[float] = None
    sampling: Sampling = Sampling.EXACT
    natural_violation_rate: float = 0.0
    baseline_months: int = 0
    plants: Dict[Tuple[str, Optional[YearMonth]], int] = field(
        default_factory=dict)

    @property
    def months(self):
        return month_range(self.start, self.end)

    @property
    def baseline_window(self):
        """Leading months whose claims form the utilization baseline"""
        if self.baseline_months == 0:
            return None
        return self.start, self.start.shift(self.baseline_months - 1)

    @property
    def intercept(self):
        if self.link_intercept is None:
            return self.base_fraud_fraction
        return self.link_intercept

    def planted(self, month):
        """rule_id -> count of violations to plant in a month"""
        counts = {
            rule_id: count for (rule_id, only), count in self.plants.items()
            if only is None}
        counts.update({
            rule_id: count for (rule_id, only), count in self.plants.items()
            if only == month})
        return {
            rule_id: count for rule_id, count in sorted(counts.items())
            if count}


class SynthConfigSerializer(serializers.Serializer):
    """Validate the scalar keys of a generator config"""
    seed = serializers.IntegerField(min_value=0, required=False)
    start = YearMonthField()
    end = YearMonthField()
    population = serializers.IntegerField(min_value=1, required=False)
    region = serializers.CharField(max_length=128, required=False)
    growth = serializers.ChoiceField(
        choices=GrowthKind.choices, required=False)
    initial_cases = serializers.IntegerField(min_value=0, required=False)
    growth_rate = serializers.FloatField(min_value=0.0, required=False)
    capacity = serializers.IntegerField(min_value=1, required=False)
    claims_per_month = serializers.IntegerField(min_value=0, required=False)
    base_fraud_fraction = serializers.FloatField(
        min_value=0.0, max_value=1.0, required=False)
    link = serializers.ChoiceField(choices=LinkKind.choices, required=False)
    link_slope = serializers.FloatField(required=False)
    link_intercept = serializers.FloatField(required=False)
    sampling = serializers.ChoiceField(
        choices=Sampling.choices, required=False)
    natural_violation_rate = serializers.FloatField(
        min_value=0.0, max_value=1.0, required=False)
    baseline_months = serializers.IntegerField(min_value=0, required=False)

    def validate(self, attrs):
        if attrs['start'] > attrs['end']:
            raise serializers.ValidationError(
                {'end': f'{attrs["end"]} is before {attrs["start"]}.'})
        growth = attrs.get('growth', GrowthKind.EXPONENTIAL)
        if growth == GrowthKind.LOGISTIC:
            capacity = attrs.get('capacity')
            if capacity is None:
                raise serializers.ValidationError(
                    {'capacity': 'Logistic growth needs a capacity.'})
            if attrs.get('initial_cases', 10) > capacity:
                raise serializers.ValidationError(
                    {'initial_cases': 'Initial cases exceed the capacity.'})
        return attrs


def _first_error(errors):
    key, messages = next(iter(errors.items()))
    if key == 'start':
        key = 'from'
    elif key == 'end':
        key = 'to'
    if isinstance(messages, dict):
        return _first_error(messages)
    message = messages[0] if isinstance(messages, list) else messages
    return key, str(message)


def _plant_key(key, value):
    rest = key[len(PLANT_PREFIX):]
    rule_id, _, month_text = rest.partition('.')
    known = {rule.id for rule in data_rules()}
    if rule_id not in known:
        raise ConfigError(
            f'{key}: {rule_id!r} is not a data-driven built-in rule', key=key)
    month = None
    if month_text:
        try:
            month = YearMonth.parse(month_text)
        except UsageError as exc:
            raise ConfigError(f'{key}: {exc}', key=key) from exc
    try:
        count = int(value)
    except ValueError:
        raise ConfigError(f'{key}: expected a count, got {value!r}', key=key)
    if count < 0:
        raise ConfigError(f'{key}: count must not be negative', key=key)
    return (rule_id, month), count


def parse_config_text(text):
    """Raw key -> value pairs; duplicate keys and malformed lines fail"""
    values = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        key, separator, value = line.partition('=')
        key = key.strip()
        if not separator or not key:
            raise ConfigError(
                f'Line {number}: expected key = value', key=key or None)
        if key in values:
            raise ConfigError(f'Line {number}: {key} given twice', key=key)
        values[key] = value.strip()
    return values


def build_config(values):
    """SynthConfig from raw values; ConfigError names the first bad key"""
    scalars = {}
    plants = {}
    for key, value in values.items():
        if key.startswith(PLANT_PREFIX):
            plant, count = _plant_key(key, value)
            plants[plant] = count
        elif key in ('from', 'to'):
            scalars['start' if key == 'from' else 'end'] = value
        elif key in SynthConfigSerializer().fields and key not in (
                'start', 'end'):
            scalars[key] = value
        else:
            raise ConfigError(f'Unknown config key {key!r}', key=key)

    serializer = SynthConfigSerializer(data=scalars)
    if not serializer.is_valid():
        key, message = _first_error(serializer.errors)
        raise ConfigError(f'{key}: {message}', key=key)
    data = dict(serializer.validated_data)

    settings = fraud_settings()
    config = SynthConfig(
        seed=data.pop('seed', settings['SEED']),
        start=data.pop('start'),
        end=data.pop('end'),
        population=data.pop('population', settings['POPULATION']),
        region=data.pop('region', settings['REGION']),
        plants=plants,
        **data,
    )
    if config.baseline_months > len(config.months):
        raise ConfigError(
            f'baseline_months: {config.baseline_months} exceeds the '
            f'{len(config.months)} generated month(s)', key='baseline_months')
    for rule_id, month in plants:
        if month is not None and month not in config.months:
            raise ConfigError(
                f'plant.{rule_id}.{month}: month outside {config.start}..'
                f'{config.end}', key=f'plant.{rule_id}.{month}')
    logger.info('Generator config: %s..%s, %d claims/month, %d plant key(s)',
                config.start, config.end, config.claims_per_month,
                len(plants))
    return config


def load_config(path, **overrides):
    """Read a config file; keyword overrides replace file values"""
    with open(path, encoding='utf-8') as handle:
        values = parse_config_text(handle.read())
    values.update(
        {key: str(value) for key, value in overrides.items()
         if value is not None})
    return build_config(values)
