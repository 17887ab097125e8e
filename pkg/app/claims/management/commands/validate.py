import io

from claims.ingest import load_claims, write_issues_csv
from core.commands import FraudCommand
from core.exceptions import DataError


class Command(FraudCommand):
    help = 'Validate a claims CSV and print its issues as CSV'

    def add_arguments(self, parser):
        parser.add_argument('claims', help='Claims CSV path')
        parser.add_argument(
            '--schema-map', dest='schema_map',
            help='Schema map file for renamed columns')

    def handle(self, *args, **options):
        self.require_file(options['claims'])
        _, issues = load_claims(options['claims'], options['schema_map'])

        buffer = io.StringIO()
        write_issues_csv(issues, buffer)
        self.stdout.write(buffer.getvalue(), ending='')

        errors = sum(1 for issue in issues if issue.is_error)
        if errors:
            raise DataError(f'{errors} error(s) found in {options["claims"]}')
