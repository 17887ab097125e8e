import logging
import os

from django.core.management.base import BaseCommand, CommandError

from core.exceptions import FraudScopeError, UsageError
from core.manifest import build_manifest, write_manifest
from core.months import YearMonth


logger = logging.getLogger(__name__)


class FraudCommand(BaseCommand):
    """Base command mapping fraudscope errors onto the exit-code contract

    0 on success, 1 for data or model failures, 2 for usage or
    configuration failures.
    """

    def execute(self, *args, **options):
        try:
            return super().execute(*args, **options)
        except FraudScopeError as exc:
            raise CommandError(str(exc), returncode=exc.exit_code) from exc
        except OSError as exc:
            raise CommandError(str(exc), returncode=2) from exc

    def require_file(self, path):
        if not os.path.isfile(path):
            raise UsageError(f'No such file: {path}')
        return path

    def parse_month(self, text, name):
        try:
            return YearMonth.parse(text)
        except UsageError as exc:
            raise UsageError(f'--{name}: {exc}') from exc

    def write_output(self, path, data):
        """Write bytes to a path, or to stdout when no path is given"""
        if path is None:
            self.stdout.write(data.decode('utf-8'), ending='')
            return
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, 'wb') as handle:
            handle.write(data)
        logger.info('Wrote %s', path)

    def record_run(self, command, inputs, parameters, outputs):
        """Write <first output>.manifest.json beside the outputs"""
        outputs = [path for path in outputs if path]
        if not outputs:
            return None
        manifest = build_manifest(command, inputs, parameters, outputs)
        return write_manifest(manifest, f'{outputs[0]}.manifest.json')
