"""Cross-claim indexes that rule functions read during evaluation."""
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass

import numpy as np

from core.conf import fraud_settings
from core.exceptions import DomainError
from core.months import month_range
from triggers.nodes import Call, FieldRef, walk


logger = logging.getLogger(__name__)


def field_value(claim, name):
    """A claim field, with blank text read as missing"""
    value = getattr(claim, name)
    if isinstance(value, str):
        value = value.strip()
        return value or None
    return value


def fold(value):
    return value.casefold() if isinstance(value, str) else value


def claim_key(claim, fields):
    """Values of fields for a claim, or None if any is missing"""
    key = tuple(fold(field_value(claim, name)) for name in fields)
    if any(value is None for value in key):
        return None
    return key


@dataclass(frozen=True)
class Baseline:
    """Monthly count statistics for one group over the baseline window"""
    mean: float
    sd: float

    def threshold(self, k):
        return self.mean + k * self.sd


class RuleContext:
    """Claim set indexes plus the utilization baseline

    Indexes by insured, procedure and month are built eagerly. Indexes for
    the field groups rules mention are added by prepare(), which also checks
    the baseline for rules that need it. A rule whose baseline is empty is
    recorded in `unavailable` with its error and is not evaluated.
    """

    def __init__(self, claims, evaluation_date, baseline_window, k=None):
        self.claims = list(claims)
        self.evaluation_date = evaluation_date
        self.baseline_window = baseline_window
        self.k = fraud_settings()['UTILIZATION_K'] if k is None else k

        self.by_insured = defaultdict(list)
        self.by_procedure = defaultdict(list)
        self.by_month = defaultdict(list)
        for claim in self.claims:
            self.by_insured[claim.insured_id].append(claim.claim_id)
            self.by_procedure[claim.procedure_code].append(claim.claim_id)
            self.by_month[claim.reported_month].append(claim.claim_id)

        self.groups = {}
        self.monthly_counts = {}
        self.baselines = {}
        self.unavailable = {}

    def prepare(self, rules):
        """Build every index the rules need before evaluation starts"""
        for rule in rules:
            try:
                self._prepare_rule(rule)
            except DomainError as exc:
                logger.warning('Rule %s not evaluated: %s', rule.id, exc)
                self.unavailable[rule.id] = exc
        return self

    def _prepare_rule(self, rule):
        for node in walk(rule.expression):
            if not isinstance(node, Call):
                continue
            fields = tuple(
                arg.name for arg in node.args
                if isinstance(arg, FieldRef))
            if node.name in ('duplicate_exists', 'count_same'):
                self.group(fields)
            elif node.name == 'distinct_count':
                self.group(fields[1:])
            elif node.name == 'utilization_excess':
                self.utilization(fields[0], rule.id)

    def group(self, fields):
        """Claims keyed by the values of fields; built once per field list"""
        if fields not in self.groups:
            index = defaultdict(list)
            for claim in self.claims:
                key = claim_key(claim, fields)
                if key is not None:
                    index[key].append(claim)
            self.groups[fields] = index
        return self.groups[fields]

    def utilization(self, field, rule_id=None):
        """Monthly counts per value of field and their baseline statistics"""
        if field in self.baselines:
            return self.monthly_counts[field], self.baselines[field]

        start, end = self.baseline_window
        window = month_range(start, end)
        counts = Counter()
        for claim in self.claims:
            value = fold(field_value(claim, field))
            if value is not None:
                counts[(value, claim.reported_month)] += 1
        in_window = [
            key for key in counts if start <= key[1] <= end]
        if not in_window:
            raise DomainError(
                f'No claims reported from {start} to {end}: rule '
                f'{rule_id} has no utilization baseline')

        baselines = {}
        for value in sorted({key[0] for key in counts}):
            monthly = np.array(
                [counts[(value, month)] for month in window], dtype=float)
            baselines[value] = Baseline(
                mean=float(monthly.mean()), sd=float(monthly.std()))
        logger.info(
            'Utilization baseline for %s over %s..%s: %d group(s)',
            field, start, end, len(baselines))
        self.monthly_counts[field] = counts
        self.baselines[field] = baselines
        return counts, baselines


def build_context(claims, evaluation_date, baseline_window, k=None):
    """Index claims for rule evaluation"""
    context = RuleContext(claims, evaluation_date, baseline_window, k)
    logger.info(
        'Indexed %d claims: %d insured, %d procedures, %d months',
        len(context.claims), len(context.by_insured),
        len(context.by_procedure), len(context.by_month))
    return context


def default_evaluation_date(claims, window_end):
    """Last day of the latest reported month, or of the window if no claims"""
    if not claims:
        return window_end.last_day
    return max(claim.reported_month for claim in claims).last_day
