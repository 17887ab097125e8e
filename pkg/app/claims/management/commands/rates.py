import io

from claims.ingest import load_claims, load_covid, write_monthly_csv
from claims.rates import build_joint_series
from core.commands import FraudCommand
from core.conf import fraud_settings
from core.exceptions import UsageError


class Command(FraudCommand):
    help = 'Build the month-wise fraud and COVID-19 rate series'

    def add_arguments(self, parser):
        parser.add_argument('claims', help='Claims CSV path')
        parser.add_argument('covid', help='Cumulative COVID-19 CSV path')
        parser.add_argument('--from', dest='start', required=True,
                            help='First month, YYYY-MM')
        parser.add_argument('--to', dest='end', required=True,
                            help='Last month, YYYY-MM')
        parser.add_argument('--population', type=int)
        parser.add_argument('--region')
        parser.add_argument('--out', help='Output CSV (stdout if omitted)')
        parser.add_argument('--schema-map', dest='schema_map')
        parser.add_argument('--covid-schema-map', dest='covid_schema_map')
        parser.add_argument(
            '--exclude-status', dest='excluded_statuses', action='append',
            help='Claim status that does not count as reported; repeatable')

    def handle(self, *args, **options):
        config = fraud_settings()
        population = options['population']
        if population is None:
            population = config['POPULATION']
        region = options['region'] or config['REGION']
        excluded = options['excluded_statuses'] or config['EXCLUDED_STATUSES']
        start = self.parse_month(options['start'], 'from')
        end = self.parse_month(options['end'], 'to')
        if start > end:
            raise UsageError(f'--from {start} is after --to {end}')
        if population <= 0:
            raise UsageError(f'--population must be positive: {population}')

        self.require_file(options['claims'])
        self.require_file(options['covid'])
        claims, _ = load_claims(options['claims'], options['schema_map'])
        covid, _ = load_covid(
            options['covid'], region, options['covid_schema_map'])

        series = build_joint_series(
            claims, covid, population, start, end, excluded)
        buffer = io.StringIO()
        write_monthly_csv(series, buffer)
        self.write_output(options['out'], buffer.getvalue().encode('utf-8'))
        self.record_run(
            'rates',
            [options['claims'], options['covid']],
            {
                'from': start, 'to': end, 'population': population,
                'region': region, 'excluded_statuses': ','.join(excluded),
            },
            [options['out']],
        )
