"""Rule evaluation over a claim set.

Conditions use three-valued logic: a comparison touching a missing value is
unknown, `and`/`or`/`not` propagate unknown the usual way, and a rule fires
only when its whole expression is true.
"""
import csv
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Tuple

from core.exceptions import ConsistencyError, DuplicateRuleError
from core.months import add_months
from triggers.context import (
    build_context, claim_key, default_evaluation_date, field_value, fold,
)
from triggers.nodes import (
    BoolOp, Compare, FieldRef, Literal, Not, render_expression,
)


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TriggerHit:
    claim_id: str
    rule_id: str
    detail: str


@dataclass(frozen=True)
class ClaimFlag:
    flagged: bool
    rule_ids: Tuple[str, ...] = ()


@dataclass(frozen=True)
class Span:
    """Calendar span between two dates computed from a claim"""
    start: object
    end: object

    @property
    def days(self):
        return (self.end - self.start).days


def _sign(number):
    return (number > 0) - (number < 0)


def _duration_days(duration):
    return duration.amount * (30 if duration.unit == 'mo' else 1)


def compare_durations(left, right):
    """-1, 0 or 1 as left is shorter than, equal to or longer than right

    A span measured against months is compared by calendar: a span is longer
    than 3mo when it ends after its start plus three calendar months.
    """
    if isinstance(left, Span) and isinstance(right, Span):
        return _sign(left.days - right.days)
    if isinstance(left, Span):
        if right.unit == 'mo':
            boundary = add_months(left.start, right.amount)
            return _sign((left.end - boundary).days)
        return _sign(left.days - right.amount)
    if isinstance(right, Span):
        return -compare_durations(right, left)
    return _sign(_duration_days(left) - _duration_days(right))


OPERATORS = {
    '==': lambda sign: sign == 0,
    '!=': lambda sign: sign != 0,
    '<': lambda sign: sign < 0,
    '<=': lambda sign: sign <= 0,
    '>': lambda sign: sign > 0,
    '>=': lambda sign: sign >= 0,
}


def compare_values(op, left, right):
    if isinstance(left, str):
        sign = 0 if left.casefold() == right.casefold() else 1
    elif hasattr(left, 'unit') or isinstance(left, Span):
        sign = compare_durations(left, right)
    else:
        sign = _sign((left > right) - (left < right))
    return OPERATORS[op](sign)


class Evaluator:
    """Evaluates rule expressions for single claims against a context"""

    def __init__(self, context):
        self.context = context

    def condition(self, node, claim):
        """(True, False or None, evidence) for a condition node"""
        if isinstance(node, BoolOp):
            return self._bool_op(node, claim)
        if isinstance(node, Not):
            value, _ = self.condition(node.operand, claim)
            if value is None:
                return None, []
            evidence = [f'not {render_expression(node.operand)}']
            return (not value), (evidence if not value else [])
        if isinstance(node, Compare):
            left, left_note = self.value(node.left, claim)
            right, right_note = self.value(node.right, claim)
            if left is None or right is None:
                return None, []
            if not compare_values(node.op, left, right):
                return False, []
            return True, [note for note in (left_note, right_note) if note]
        return getattr(self, f'_{node.name}')(node, claim)

    def _bool_op(self, node, claim):
        left, left_evidence = self.condition(node.left, claim)
        if node.op == 'and':
            if left is False:
                return False, []
            right, right_evidence = self.condition(node.right, claim)
            if right is False:
                return False, []
            if left is None or right is None:
                return None, []
            return True, left_evidence + right_evidence
        if left is True:
            return True, left_evidence
        right, right_evidence = self.condition(node.right, claim)
        if right is True:
            return True, right_evidence
        if left is None or right is None:
            return None, []
        return False, []

    def value(self, node, claim):
        """(value or None, evidence note) for a value node"""
        if isinstance(node, Literal):
            return node.value, None
        if isinstance(node, FieldRef):
            value = field_value(claim, node.name)
            return value, f'{node.name} = {value}'
        return getattr(self, f'_{node.name}')(node, claim)

    def _days_between(self, node, claim):
        start, _ = self.value(node.args[0], claim)
        end, _ = self.value(node.args[1], claim)
        if start is None or end is None:
            return None, None
        span = Span(start, end)
        return span, f'{span.days} days'

    def _duration_in_status(self, node, claim):
        status = node.args[0].value
        current = field_value(claim, 'claim_status')
        if current is None or current.casefold() != status.casefold():
            return None, None
        span = Span(claim.claim_reported_date, self.context.evaluation_date)
        return span, f'{span.days} days in status {status}'

    def _fields(self, node):
        return tuple(arg.name for arg in node.args)

    def _duplicate_exists(self, node, claim):
        fields = self._fields(node)
        key = claim_key(claim, fields)
        if key is None:
            return None, []
        others = sorted(
            other.claim_id for other in self.context.group(fields)[key]
            if other.claim_id != claim.claim_id)
        if not others:
            return False, []
        return True, [f'{", ".join(fields)} shared with {", ".join(others)}']

    def _count_same(self, node, claim):
        fields = self._fields(node)
        key = claim_key(claim, fields)
        if key is None:
            return None, None
        count = len(self.context.group(fields)[key])
        return count, f'{count} claims share {", ".join(fields)}'

    def _distinct_count(self, node, claim):
        target, *fields = self._fields(node)
        fields = tuple(fields)
        key = claim_key(claim, fields)
        if key is None:
            return None, None
        values = {
            fold(field_value(other, target))
            for other in self.context.group(fields)[key]
        }
        values.discard(None)
        count = len(values)
        return count, f'{count} distinct {target} for {", ".join(fields)}'

    def _utilization_excess(self, node, claim):
        field = node.args[0].name
        value = fold(field_value(claim, field))
        if value is None:
            return None, []
        counts, baselines = self.context.utilization(field)
        month = claim.reported_month
        if month <= self.context.baseline_window[1]:
            return False, []
        baseline = baselines.get(value)
        if baseline is None or baseline.mean <= 0:
            return False, []
        count = counts[(value, month)]
        threshold = baseline.threshold(self.context.k)
        if count <= threshold:
            return False, []
        return True, [
            f'{count} claims in {month} above baseline {baseline.mean:.2f} '
            f'+ {self.context.k:g} x {baseline.sd:.2f}'
        ]

    def _is_missing(self, node, claim):
        name = node.args[0].name
        if field_value(claim, name) is None:
            return True, [f'{name} missing']
        return False, []

    def _external_data(self, node, claim):
        return False, []


def evaluate_rules(rules, claims, context):
    """Hits for every (claim, rule) pair whose rule is true, sorted

    Rules the context cannot support are skipped and left in
    context.unavailable; the other rules are evaluated as usual.
    """
    seen = set()
    for rule in rules:
        if rule.id in seen:
            raise DuplicateRuleError(f'duplicate rule id {rule.id!r}')
        seen.add(rule.id)
    context.prepare(rules)

    evaluator = Evaluator(context)
    runnable = [rule for rule in rules if rule.id not in context.unavailable]
    hits = []
    for claim in claims:
        for rule in runnable:
            value, evidence = evaluator.condition(rule.expression, claim)
            if value is True:
                hits.append(TriggerHit(
                    claim.claim_id, rule.id, '; '.join(evidence)))
    hits.sort(key=lambda hit: (hit.claim_id, hit.rule_id))

    per_rule = Counter(hit.rule_id for hit in hits)
    for rule in runnable:
        logger.info('Rule %s: %d hit(s)', rule.id, per_rule[rule.id])
    return hits


def flag_claims(hits, claims):
    """claim_id -> ClaimFlag for every claim, in claim order"""
    contributing = {claim.claim_id: [] for claim in claims}
    for hit in hits:
        if hit.claim_id not in contributing:
            raise ConsistencyError(
                f'Hit for rule {hit.rule_id} names unknown claim '
                f'{hit.claim_id!r}')
        contributing[hit.claim_id].append(hit.rule_id)
    return {
        claim_id: ClaimFlag(bool(rule_ids), tuple(sorted(set(rule_ids))))
        for claim_id, rule_ids in contributing.items()
    }


def write_hits_csv(hits, rules, stream):
    categories = {rule.id: str(rule.category) for rule in rules}
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(('claim_id', 'rule_id', 'category', 'detail'))
    for hit in hits:
        writer.writerow(
            (hit.claim_id, hit.rule_id, categories.get(hit.rule_id, ''),
             hit.detail))


def write_flags_csv(flags, stream):
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(('claim_id', 'flagged', 'rule_ids'))
    for claim_id, flag in flags.items():
        writer.writerow(
            (claim_id, int(flag.flagged), ';'.join(flag.rule_ids)))


def run_rules(rules, claims, baseline_window, evaluation_date=None, k=None):
    """Index claims and evaluate rules in one step; returns (hits, context)"""
    if evaluation_date is None:
        evaluation_date = default_evaluation_date(claims, baseline_window[1])
    context = build_context(claims, evaluation_date, baseline_window, k)
    return evaluate_rules(rules, claims, context), context
