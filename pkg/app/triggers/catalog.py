"""The built-in trigger catalog and its status table."""
import csv
import functools
import os

from triggers.grammar import parse_rules


BUILTIN_RULES_PATH = os.path.join(os.path.dirname(__file__), 'builtin.rules')

ACTIVE = 'active'
REQUIRES_EXTERNAL_DATA = 'requires external data'


@functools.lru_cache(maxsize=None)
def _builtin_rules():
    with open(BUILTIN_RULES_PATH, encoding='utf-8') as handle:
        return tuple(parse_rules(handle.read()))


def builtin_rules():
    """Every catalog rule, placeholders included"""
    return list(_builtin_rules())


def data_rules(rules=None):
    """Rules that can fire on claims data alone"""
    rules = builtin_rules() if rules is None else rules
    return [rule for rule in rules if not rule.is_placeholder]


def rule_status(rule):
    return REQUIRES_EXTERNAL_DATA if rule.is_placeholder else ACTIVE


def write_status_table(rules, stream):
    """One row per rule: id, category, status and description"""
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(('rule_id', 'category', 'status', 'description'))
    for rule in rules:
        writer.writerow(
            (rule.id, str(rule.category), rule_status(rule),
             rule.description))
