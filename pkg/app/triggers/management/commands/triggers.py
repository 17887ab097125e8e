import datetime
import io

from claims.ingest import load_claims
from core.commands import FraudCommand
from core.conf import baseline_window, fraud_settings
from core.exceptions import DomainError, UsageError
from triggers.catalog import builtin_rules, write_status_table
from triggers.engine import (
    flag_claims, run_rules, write_flags_csv, write_hits_csv,
)
from triggers.grammar import parse_rules


class Command(FraudCommand):
    help = 'Evaluate trigger rules over a claims CSV and write the hits'

    def add_arguments(self, parser):
        parser.add_argument('claims', help='Claims CSV path')
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument('--rules', help='Rule file path')
        source.add_argument(
            '--builtin', action='store_true',
            help='Use the built-in catalog and print its status table')
        parser.add_argument('--out', help='Hits CSV (stdout if omitted)')
        parser.add_argument('--flags', help='Per-claim flags CSV')
        parser.add_argument('--baseline-from', dest='baseline_from')
        parser.add_argument('--baseline-to', dest='baseline_to')
        parser.add_argument(
            '--evaluation-date', dest='evaluation_date',
            help='YYYY-MM-DD; defaults to the end of the latest reported '
                 'month')
        parser.add_argument('--k', type=float, help='Utilization sd factor')
        parser.add_argument('--schema-map', dest='schema_map')

    def handle(self, *args, **options):
        start, end = baseline_window()
        if options['baseline_from']:
            start = self.parse_month(options['baseline_from'], 'baseline-from')
        if options['baseline_to']:
            end = self.parse_month(options['baseline_to'], 'baseline-to')
        if start > end:
            raise UsageError(f'Baseline window {start}..{end} is empty')
        k = options['k']
        if k is None:
            k = fraud_settings()['UTILIZATION_K']

        if options['builtin']:
            rules = builtin_rules()
            if options['out']:
                buffer = io.StringIO()
                write_status_table(rules, buffer)
                self.stdout.write(buffer.getvalue(), ending='')
        else:
            self.require_file(options['rules'])
            with open(options['rules'], encoding='utf-8') as handle:
                rules = parse_rules(handle.read())

        self.require_file(options['claims'])
        claims, _ = load_claims(options['claims'], options['schema_map'])
        hits, context = run_rules(
            rules, claims, (start, end), self.evaluation_date(options), k)

        buffer = io.StringIO()
        write_hits_csv(hits, rules, buffer)
        self.write_output(options['out'], buffer.getvalue().encode('utf-8'))
        if options['flags']:
            buffer = io.StringIO()
            write_flags_csv(flag_claims(hits, claims), buffer)
            self.write_output(
                options['flags'], buffer.getvalue().encode('utf-8'))

        self.record_run(
            'triggers',
            [options['claims'], options['rules']],
            {
                'rules': 'builtin' if options['builtin'] else 'file',
                'baseline_from': start, 'baseline_to': end, 'k': k,
                'evaluation_date': context.evaluation_date.isoformat(),
                'unavailable_rules': ';'.join(sorted(context.unavailable)),
            },
            [options['out'], options['flags']],
        )
        if context.unavailable:
            raise DomainError('; '.join(
                str(context.unavailable[rule_id])
                for rule_id in sorted(context.unavailable)))

    def evaluation_date(self, options):
        text = options['evaluation_date']
        if not text:
            return None
        try:
            return datetime.date.fromisoformat(text)
        except ValueError:
            raise UsageError(f'--evaluation-date: invalid date {text!r}')
