"""Structured report files.

Reports are JSON documents rendered by DRF's JSONRenderer. Every document
starts with a format tag and a version so readers can reject files they do
not understand.
"""
import io
import math

from rest_framework import serializers
from rest_framework.exceptions import ParseError
from rest_framework.parsers import JSONParser
from rest_framework.renderers import JSONRenderer

from core.conf import fraud_settings
from core.exceptions import ConfigError, DataError


FORMAT_PREFIX = 'fraudscope'


def significant(value, digits=None):
    """Round a float to a fixed number of significant digits"""
    if value is None:
        return None
    if digits is None:
        digits = fraud_settings()['REPORT_DIGITS']
    value = float(value)
    if not math.isfinite(value):
        return None
    return float(f'{value:.{digits}g}')


def format_significant(value, digits=None):
    """Text form of a float with a fixed number of significant digits"""
    if digits is None:
        digits = fraud_settings()['REPORT_DIGITS']
    return f'{float(value):.{digits}g}'


class SignificantFloatField(serializers.FloatField):
    """Float field whose representation keeps REPORT_DIGITS digits"""

    def to_representation(self, value):
        return significant(value)


def render_document(kind, version, body):
    """Render a report body as bytes under a format header"""
    document = {'format': f'{FORMAT_PREFIX}.{kind}', 'version': version}
    document.update(body)
    rendered = JSONRenderer().render(document, renderer_context={'indent': 2})
    return rendered + b'\n'


def parse_document(stream, kind, version):
    """Parse a report or model file and check its header"""
    try:
        document = JSONParser().parse(io.BytesIO(stream.read()))
    except ParseError as exc:
        raise DataError(f'Malformed {kind} document: {exc.detail}') from exc
    if not isinstance(document, dict):
        raise DataError(f'Malformed {kind} document: not an object')
    expected = f'{FORMAT_PREFIX}.{kind}'
    if document.get('format') != expected:
        raise ConfigError(
            f'Expected a {expected} document, got {document.get("format")!r}',
            key='format',
        )
    if document.get('version') != version:
        raise ConfigError(
            f'Unsupported {expected} version {document.get("version")!r}',
            key='version',
        )
    return document
