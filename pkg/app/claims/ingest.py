"""CSV ingestion for claims, COVID-19 counts and monthly rate series.

Rows are validated one at a time through DRF serializers. A row that fails
validation becomes error-severity ValidationIssue values and is skipped;
the rest of the file still loads.
"""
import codecs
import csv
import io
import logging
import os

from claims.serializers import (
    ClaimRowSerializer, CovidRowSerializer, MonthlyPointSerializer,
)
from core.exceptions import (
    ConfigError, EmptyResultError, ReadError, SchemaError,
)
from core.models import (
    CLAIM_FIELDS, MANDATORY_CLAIM_FIELDS, Severity, ValidationIssue,
)


logger = logging.getLogger(__name__)

COVID_FIELDS = ('date', 'region', 'cumulative_infected')
MONTHLY_FIELDS = (
    'month', 'reported_claims', 'fraud_claims', 'fraud_rate',
    'covid_cases', 'covid_rate',
)

SCHEMA_MAP_DIR = os.path.join(os.path.dirname(__file__), 'schema_maps')


def parse_schema_map(text, canonical_fields=CLAIM_FIELDS):
    """Read `canonical = source_column` lines into a dict"""
    mapping = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError(
                f'Schema map line {number}: expected "canonical = source"')
        canonical, source = (part.strip() for part in line.split('=', 1))
        if canonical not in canonical_fields:
            raise ConfigError(
                f'Schema map line {number}: unknown field {canonical!r}',
                key=canonical,
            )
        mapping[canonical] = source
    return mapping


def load_schema_map(path, canonical_fields=CLAIM_FIELDS):
    with open(path, encoding='utf-8') as handle:
        return parse_schema_map(handle.read(), canonical_fields)


def builtin_schema_map(name):
    """A schema map shipped with the package, e.g. 'display_names'"""
    return load_schema_map(os.path.join(SCHEMA_MAP_DIR, f'{name}.map'))


def _text_reader(stream):
    try:
        text = codecs.getreader('utf-8-sig')(stream).read()
    except (OSError, UnicodeDecodeError) as exc:
        raise ReadError(f'Unreadable stream: {exc}') from exc
    return csv.DictReader(io.StringIO(text, newline=''))


def _column_lookup(header, canonical_fields, schema_map):
    """Map canonical names to the header columns that hold them"""
    schema_map = schema_map or {}
    columns = {column.strip(): column for column in header or ()}
    lookup = {}
    for name in canonical_fields:
        source = schema_map.get(name, name)
        if source in columns:
            lookup[name] = columns[source]
    return lookup


def _remap(row, lookup):
    return {name: row.get(source) for name, source in lookup.items()}


def issues_from_errors(row, errors, severity=Severity.ERROR):
    """Flatten serializer errors into ValidationIssue values"""
    issues = []
    for field, messages in errors.items():
        if isinstance(messages, dict):
            messages = [
                f'{key}: {value}' for key, value in messages.items()]
        for message in messages:
            issues.append(ValidationIssue(
                row=row,
                field='row' if field == 'non_field_errors' else field,
                severity=severity,
                message=str(message),
            ))
    return issues


def _amount_warnings(row, record):
    issues = []
    billed = record.billed_amount
    approved = record.approved_amount
    paid = record.paid_amount
    if paid is not None and approved is not None and paid > approved:
        issues.append(ValidationIssue(
            row, 'paid_amount', Severity.WARNING,
            f'Paid amount {paid} exceeds approved amount {approved}.'))
    if approved is not None and billed is not None and approved > billed:
        issues.append(ValidationIssue(
            row, 'approved_amount', Severity.WARNING,
            f'Approved amount {approved} exceeds billed amount {billed}.'))
    return issues


def parse_claims_csv(stream, schema_map=None):
    """Load claims from a UTF-8 CSV byte stream

    Returns the records in input order and the issues found. A missing
    mandatory column raises SchemaError; nothing is loaded in that case.
    """
    reader = _text_reader(stream)
    lookup = _column_lookup(reader.fieldnames, CLAIM_FIELDS, schema_map)
    missing = [name for name in MANDATORY_CLAIM_FIELDS if name not in lookup]
    if missing:
        raise SchemaError(
            'Missing mandatory column(s): ' + ', '.join(missing))

    records = []
    issues = []
    seen = {}
    for row_number, row in enumerate(reader, start=2):
        serializer = ClaimRowSerializer(data=_remap(row, lookup))
        if not serializer.is_valid():
            issues.extend(issues_from_errors(row_number, serializer.errors))
            continue
        record = serializer.build_record()
        if record.claim_id in seen:
            issues.append(ValidationIssue(
                row_number, 'claim_id', Severity.ERROR,
                f'Duplicate claim_id {record.claim_id!r} '
                f'(first seen on row {seen[record.claim_id]}).'))
            continue
        seen[record.claim_id] = row_number
        issues.extend(_amount_warnings(row_number, record))
        records.append(record)

    logger.info(
        'Loaded %d claims with %d error(s) and %d warning(s)',
        len(records),
        sum(1 for issue in issues if issue.is_error),
        sum(1 for issue in issues if not issue.is_error),
    )
    return records, issues


def parse_covid_csv(stream, region, schema_map=None):
    """Load one region's cumulative COVID-19 counts, sorted by date

    A decrease in the cumulative count is clamped to the previous value
    with a warning.
    """
    reader = _text_reader(stream)
    lookup = _column_lookup(reader.fieldnames, COVID_FIELDS, schema_map)
    missing = [name for name in COVID_FIELDS if name not in lookup]
    if missing:
        raise SchemaError(
            'Missing mandatory column(s): ' + ', '.join(missing))

    rows = []
    issues = []
    for row_number, row in enumerate(reader, start=2):
        serializer = CovidRowSerializer(data=_remap(row, lookup))
        if not serializer.is_valid():
            issues.extend(issues_from_errors(row_number, serializer.errors))
            continue
        record = serializer.build_record()
        if record.region == region:
            rows.append((record.date, row_number, record))

    if not rows:
        raise EmptyResultError(f'No COVID-19 rows for region {region!r}')

    rows.sort(key=lambda item: (item[0], item[1]))
    records = []
    previous = 0
    for _, row_number, record in rows:
        if record.cumulative_infected < previous:
            issues.append(ValidationIssue(
                row_number, 'cumulative_infected', Severity.WARNING,
                f'Cumulative count fell from {previous} to '
                f'{record.cumulative_infected}; clamped to {previous}.'))
            record = record.__class__(
                date=record.date, region=record.region,
                cumulative_infected=previous)
        previous = record.cumulative_infected
        records.append(record)

    logger.info(
        'Loaded %d COVID-19 rows for %s with %d issue(s)',
        len(records), region, len(issues))
    return records, issues


def write_claims_csv(records, stream):
    """Write claims with canonical column names to a text stream"""
    writer = csv.DictWriter(
        stream, fieldnames=CLAIM_FIELDS, lineterminator='\n')
    writer.writeheader()
    for record in records:
        row = ClaimRowSerializer(record).data
        writer.writerow({
            name: '' if value is None else value
            for name, value in row.items()
        })


def write_covid_csv(records, stream):
    writer = csv.DictWriter(
        stream, fieldnames=COVID_FIELDS, lineterminator='\n')
    writer.writeheader()
    for record in records:
        writer.writerow({
            'date': record.date.isoformat(),
            'region': record.region,
            'cumulative_infected': record.cumulative_infected,
        })


def write_issues_csv(issues, stream):
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(('row', 'field', 'severity', 'message'))
    for issue in issues:
        writer.writerow(
            (issue.row, issue.field, str(issue.severity), issue.message))


def write_monthly_csv(points, stream):
    writer = csv.DictWriter(
        stream, fieldnames=MONTHLY_FIELDS, lineterminator='\n')
    writer.writeheader()
    for point in points:
        writer.writerow(MonthlyPointSerializer(point).data)


def read_monthly_csv(stream):
    """Read a monthly series written by write_monthly_csv

    Any invalid row is an error here: the series feeds statistics directly.
    """
    reader = _text_reader(stream)
    lookup = _column_lookup(reader.fieldnames, MONTHLY_FIELDS, None)
    missing = [name for name in MONTHLY_FIELDS if name not in lookup]
    if missing:
        raise SchemaError(
            'Missing mandatory column(s): ' + ', '.join(missing))
    points = []
    for row_number, row in enumerate(reader, start=2):
        serializer = MonthlyPointSerializer(data=_remap(row, lookup))
        if not serializer.is_valid():
            issue = issues_from_errors(row_number, serializer.errors)[0]
            raise SchemaError(
                f'Row {issue.row}, {issue.field}: {issue.message}')
        points.append(serializer.build_record())
    points.sort(key=lambda point: point.month)
    return points


def load_claims(path, schema_map_path=None):
    """Open and parse a claims CSV, with an optional schema map file"""
    schema_map = None
    if schema_map_path:
        schema_map = load_schema_map(schema_map_path)
    with open(path, 'rb') as stream:
        return parse_claims_csv(stream, schema_map)


def load_covid(path, region, schema_map_path=None):
    schema_map = None
    if schema_map_path:
        schema_map = load_schema_map(schema_map_path, COVID_FIELDS)
    with open(path, 'rb') as stream:
        return parse_covid_csv(stream, region, schema_map)
