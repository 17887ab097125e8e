from claims.ingest import read_monthly_csv
from core.commands import FraudCommand
from core.exceptions import UsageError
from stats.analysis import analyze_series, render_analysis


class Command(FraudCommand):
    help = ('Descriptive statistics, correlation and regressions of a '
            'monthly rate series')

    def add_arguments(self, parser):
        parser.add_argument('monthly', help='Monthly series CSV from rates')
        parser.add_argument('--from', dest='start', help='First month')
        parser.add_argument('--to', dest='end', help='Last month')
        parser.add_argument('--out', help='Report path (stdout if omitted)')

    def handle(self, *args, **options):
        start = end = None
        if options['start']:
            start = self.parse_month(options['start'], 'from')
        if options['end']:
            end = self.parse_month(options['end'], 'to')
        if start and end and start > end:
            raise UsageError(f'--from {start} is after --to {end}')

        self.require_file(options['monthly'])
        with open(options['monthly'], 'rb') as stream:
            points = read_monthly_csv(stream)

        report = analyze_series(points, start, end)
        self.write_output(options['out'], render_analysis(report))
        self.record_run(
            'analyze',
            [options['monthly']],
            {'from': report.start, 'to': report.end},
            [options['out']],
        )
