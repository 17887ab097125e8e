"""Syntax tree of the trigger rule language.

Every node records where it started in the rule text, but positions take no
part in equality: two rules are equal when their trees are.
"""
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Optional, Tuple

from django.db import models


class RuleCategory(models.TextChoices):
    FRAUD_ABUSE = 'fraud_abuse', 'Fraud and abuse'
    PROCESS = 'process', 'Process'
    ELIGIBILITY = 'eligibility', 'Eligibility'
    GENERAL = 'general', 'General'


class ValueType(models.TextChoices):
    NUMBER = 'number'
    STRING = 'string'
    DATE = 'date'
    DURATION = 'duration'
    BOOL = 'bool'


@dataclass(frozen=True)
class Position:
    line: int
    column: int


@dataclass(frozen=True)
class Duration:
    """A literal span such as 15d or 3mo"""
    amount: int
    unit: str

    def __str__(self):
        return f'{self.amount}{self.unit}'


@dataclass(frozen=True)
class Node:
    position: Optional[Position] = field(
        default=None, compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class Literal(Node):
    type: ValueType
    value: object


@dataclass(frozen=True)
class FieldRef(Node):
    name: str


@dataclass(frozen=True)
class Call(Node):
    name: str
    args: Tuple[Node, ...]


@dataclass(frozen=True)
class Compare(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class BoolOp(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class Not(Node):
    operand: Node


@dataclass(frozen=True)
class TriggerRule:
    id: str
    category: RuleCategory
    description: str
    expression: Node

    @property
    def is_placeholder(self):
        """True for rules that stand in for checks needing external data"""
        return isinstance(self.expression, Call) and (
            self.expression.name == 'external_data')

    def uses(self, function):
        return any(
            isinstance(node, Call) and node.name == function
            for node in walk(self.expression)
        )


def walk(node):
    """Every node of a tree, parents before children"""
    yield node
    if isinstance(node, Call):
        for arg in node.args:
            yield from walk(arg)
    elif isinstance(node, (Compare, BoolOp)):
        yield from walk(node.left)
        yield from walk(node.right)
    elif isinstance(node, Not):
        yield from walk(node.operand)


PRECEDENCE = {'or': 1, 'and': 2, 'not': 3, 'compare': 4}


def _precedence(node):
    if isinstance(node, BoolOp):
        return PRECEDENCE[node.op]
    if isinstance(node, Not):
        return PRECEDENCE['not']
    if isinstance(node, Compare):
        return PRECEDENCE['compare']
    return 5


def quote(text):
    escaped = text.replace('\\', '\\\\').replace('"', '\\"')
    return f'"{escaped}"'


def _render_literal(node):
    if node.type == ValueType.STRING:
        return quote(node.value)
    if node.type == ValueType.DATE:
        return node.value.isoformat()
    if node.type == ValueType.NUMBER:
        value = node.value
        if isinstance(value, Decimal):
            return format(value, 'f')
        return str(value)
    return str(node.value)


def render_expression(node, parent=0, right=False):
    """Source text for an expression, parenthesized only where needed"""
    own = _precedence(node)
    if isinstance(node, Literal):
        text = _render_literal(node)
    elif isinstance(node, FieldRef):
        text = node.name
    elif isinstance(node, Call):
        args = ', '.join(render_expression(arg) for arg in node.args)
        text = f'{node.name}({args})'
    elif isinstance(node, Compare):
        text = (
            f'{render_expression(node.left, own)} {node.op} '
            f'{render_expression(node.right, own, right=True)}'
        )
    elif isinstance(node, BoolOp):
        text = (
            f'{render_expression(node.left, own)} {node.op} '
            f'{render_expression(node.right, own, right=True)}'
        )
    elif isinstance(node, Not):
        text = f'not {render_expression(node.operand, own)}'
    else:
        raise TypeError(f'Not a rule node: {node!r}')
    if own < parent or (right and own == parent):
        return f'({text})'
    return text


def render(rule):
    """Rule text that parses back to an equal rule"""
    header = f'rule {rule.id} category {rule.category}'
    if rule.description:
        header += f' {quote(rule.description)}'
    return f'{header}: {render_expression(rule.expression)}'
