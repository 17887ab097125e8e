"""Tokenizer, parser and type checker for trigger rules.

    rule <id> category <category> ["<description>"]: <expression>

Expressions are parsed top-down by operator precedence: `or` binds loosest,
then `and`, then `not`, then the comparison operators. Every rule is type
checked against the claim schema before it is returned.
"""
import datetime
import logging
import re
from dataclasses import dataclass
from decimal import Decimal

from core.exceptions import DuplicateRuleError, RuleSyntaxError, RuleTypeError
from core.models import DATE_FIELDS, INTEGER_FIELDS, MONEY_FIELDS, TEXT_FIELDS
from triggers.functions import FUNCTIONS, ArgKind
from triggers.nodes import (
    BoolOp, Call, Compare, Duration, FieldRef, Literal, Not, Position,
    RuleCategory, TriggerRule, ValueType,
)


logger = logging.getLogger(__name__)

FIELD_TYPES = {
    **{name: ValueType.DATE for name in DATE_FIELDS},
    **{name: ValueType.NUMBER for name in MONEY_FIELDS + INTEGER_FIELDS},
    **{name: ValueType.STRING for name in TEXT_FIELDS},
}

COMPARISONS = ('==', '!=', '<=', '>=', '<', '>')

BINDING_POWER = {'or': 10, 'and': 20, 'not': 30}
BINDING_POWER.update({op: 40 for op in COMPARISONS})

TOKEN_RE = re.compile(r'''
    (?P<newline>\n)
  | (?P<space>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<date>\d{4}-\d{2}-\d{2})
  | (?P<duration>\d+(?:mo|d)\b)
  | (?P<number>\d+(?:\.\d+)?)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>==|!=|<=|>=|<|>)
  | (?P<punct>[(),:])
''', re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: Position

    def is_(self, kind, text=None):
        return self.kind == kind and (text is None or self.text == text)

    def label(self):
        return 'end of input' if self.kind == 'end' else repr(self.text)


def tokenize(text):
    tokens = []
    line, line_start, offset = 1, 0, 0
    while offset < len(text):
        match = TOKEN_RE.match(text, offset)
        if match is None:
            raise RuleSyntaxError(
                f'unexpected character {text[offset]!r}',
                line, offset - line_start + 1)
        kind = match.lastgroup
        position = Position(line, offset - line_start + 1)
        offset = match.end()
        if kind == 'newline':
            line, line_start = line + 1, offset
        elif kind not in ('space', 'comment'):
            tokens.append(Token(kind, match.group(), position))
    tokens.append(Token('end', '', Position(line, offset - line_start + 1)))
    return tokens


def _unquote(text):
    return re.sub(r'\\(.)', r'\1', text[1:-1])


class RuleParser:
    """Parses a token list into rules, one rule per statement"""

    def __init__(self, text):
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self):
        return self.tokens[self.index]

    def error(self, message, token=None):
        token = token or self.current
        return RuleSyntaxError(
            message, token.position.line, token.position.column)

    def advance(self, kind=None, text=None):
        token = self.current
        if kind is not None and not token.is_(kind, text):
            expected = repr(text) if text else kind
            raise self.error(f'expected {expected}, got {token.label()}')
        self.index += 1
        return token

    def at_end(self):
        return self.current.is_('end')

    def parse_rule(self):
        start = self.advance('ident', 'rule')
        rule_id = self.advance('ident').text
        self.advance('ident', 'category')
        category_token = self.advance('ident')
        if category_token.text not in RuleCategory.values:
            raise self.error(
                f'unknown category {category_token.text!r}; expected one '
                f'of {", ".join(RuleCategory.values)}', category_token)
        description = ''
        if self.current.is_('string'):
            description = _unquote(self.advance().text)
        self.advance('punct', ':')
        expression = self.expression()
        if not (self.at_end() or self.current.is_('ident', 'rule')):
            raise self.error(f'unexpected {self.current.label()}')
        rule = TriggerRule(
            id=rule_id,
            category=RuleCategory(category_token.text),
            description=description,
            expression=expression,
        )
        check_rule(rule, start.position)
        return rule

    def binding_power(self, token):
        if token.kind in ('ident', 'op') and token.text != 'not':
            return BINDING_POWER.get(token.text, 0)
        return 0

    def expression(self, right_binding_power=0):
        token = self.advance()
        left = self.null_denotation(token)
        while right_binding_power < self.binding_power(self.current):
            token = self.advance()
            left = self.left_denotation(token, left)
        return left

    def null_denotation(self, token):
        position = token.position
        if token.kind == 'number':
            return Literal(ValueType.NUMBER, Decimal(token.text),
                           position=position)
        if token.kind == 'string':
            return Literal(ValueType.STRING, _unquote(token.text),
                           position=position)
        if token.kind == 'date':
            try:
                value = datetime.date.fromisoformat(token.text)
            except ValueError:
                raise self.error(f'invalid date {token.text}', token)
            return Literal(ValueType.DATE, value, position=position)
        if token.kind == 'duration':
            unit = 'mo' if token.text.endswith('mo') else 'd'
            amount = int(token.text[:-len(unit)])
            return Literal(ValueType.DURATION, Duration(amount, unit),
                           position=position)
        if token.is_('punct', '('):
            inner = self.expression()
            self.advance('punct', ')')
            return inner
        if token.is_('ident', 'not'):
            operand = self.expression(BINDING_POWER['not'])
            return Not(operand, position=position)
        if token.kind == 'ident' and token.text not in BINDING_POWER and (
                token.text not in ('rule', 'category')):
            if self.current.is_('punct', '('):
                return self.call(token)
            return FieldRef(token.text, position=position)
        raise self.error(f'unexpected {token.label()}', token)

    def left_denotation(self, token, left):
        power = BINDING_POWER[token.text]
        right = self.expression(power)
        if token.text in ('and', 'or'):
            return BoolOp(token.text, left, right, position=left.position)
        if isinstance(left, Compare):
            raise self.error('comparisons cannot be chained', token)
        return Compare(token.text, left, right, position=left.position)

    def call(self, name_token):
        self.advance('punct', '(')
        args = []
        if not self.current.is_('punct', ')'):
            args.append(self.expression())
            while self.current.is_('punct', ','):
                self.advance()
                args.append(self.expression())
        self.advance('punct', ')')
        return Call(name_token.text, tuple(args),
                    position=name_token.position)


def _type_error(message, node, fallback):
    position = node.position or fallback
    return RuleTypeError(message, position.line, position.column)


def check_expression(node, fallback):
    """Type of an expression; raises RuleTypeError where it is ill-typed"""
    if isinstance(node, Literal):
        return node.type
    if isinstance(node, FieldRef):
        if node.name not in FIELD_TYPES:
            raise _type_error(f'unknown field {node.name!r}', node, fallback)
        return FIELD_TYPES[node.name]
    if isinstance(node, Call):
        return check_call(node, fallback)
    if isinstance(node, Not):
        if check_expression(node.operand, fallback) != ValueType.BOOL:
            raise _type_error('not needs a condition', node, fallback)
        return ValueType.BOOL
    if isinstance(node, BoolOp):
        for side in (node.left, node.right):
            if check_expression(side, fallback) != ValueType.BOOL:
                raise _type_error(
                    f'{node.op} needs conditions on both sides', side,
                    fallback)
        return ValueType.BOOL
    if isinstance(node, Compare):
        left = check_expression(node.left, fallback)
        right = check_expression(node.right, fallback)
        if left != right:
            raise _type_error(
                f'cannot compare {left} with {right}', node, fallback)
        if left == ValueType.BOOL:
            raise _type_error('cannot compare conditions', node, fallback)
        if left == ValueType.STRING and node.op not in ('==', '!='):
            raise _type_error(
                f'strings support only == and !=, not {node.op}', node,
                fallback)
        return ValueType.BOOL
    raise TypeError(f'Not a rule node: {node!r}')


def check_call(node, fallback):
    signature = FUNCTIONS.get(node.name)
    if signature is None:
        raise _type_error(f'unknown function {node.name!r}', node, fallback)
    count = len(node.args)
    if count < signature.min_args or (
            signature.max_args is not None and count > signature.max_args):
        if signature.max_args is None:
            expected = f'at least {signature.min_args}'
        elif signature.min_args == signature.max_args:
            expected = str(signature.min_args)
        else:
            expected = f'{signature.min_args} to {signature.max_args}'
        raise _type_error(
            f'{node.name} takes {expected} argument(s), got {count}',
            node, fallback)
    for arg in node.args:
        if signature.arg_kind == ArgKind.FIELD:
            if not isinstance(arg, FieldRef):
                raise _type_error(
                    f'{node.name} takes field names', arg, fallback)
            check_expression(arg, fallback)
        elif signature.arg_kind == ArgKind.STRING_LITERAL:
            if not (isinstance(arg, Literal) and
                    arg.type == ValueType.STRING):
                raise _type_error(
                    f'{node.name} takes a quoted string', arg, fallback)
        elif check_expression(arg, fallback) != ValueType.DATE:
            raise _type_error(f'{node.name} takes dates', arg, fallback)
    return signature.returns


def check_rule(rule, position):
    if check_expression(rule.expression, position) != ValueType.BOOL:
        raise _type_error(
            f'rule {rule.id} must be a condition', rule.expression, position)


def parse_rule(text):
    """Parse exactly one rule"""
    parser = RuleParser(text)
    rule = parser.parse_rule()
    if not parser.at_end():
        raise parser.error(f'unexpected {parser.current.label()}')
    return rule


def parse_rules(text):
    """Parse a rule file; rule ids must be unique within it"""
    parser = RuleParser(text)
    rules = []
    seen = set()
    while not parser.at_end():
        start = parser.current.position
        rule = parser.parse_rule()
        if rule.id in seen:
            raise DuplicateRuleError(
                f'duplicate rule id {rule.id!r}', start.line, start.column)
        seen.add(rule.id)
        rules.append(rule)
    logger.info('Parsed %d rule(s)', len(rules))
    return rules
