import io
import os

from claims.ingest import write_claims_csv, write_covid_csv
from core.commands import FraudCommand
from core.conf import fraud_settings
from core.exceptions import UsageError
from core.manifest import build_manifest, write_manifest
from synthgen.config import load_config
from synthgen.epidemic import generate_epidemic
from synthgen.generator import generate_claims, write_ground_truth_csv
from synthgen.preset import study_claims, study_covid


OUTPUT_NAMES = ('claims.csv', 'covid.csv', 'ground_truth.csv')


def _csv_bytes(writer, *args):
    stream = io.StringIO()
    writer(*args, stream)
    return stream.getvalue().encode('utf-8')


class Command(FraudCommand):
    help = ('Generate a synthetic claims corpus, its COVID-19 series and '
            'the ground truth behind them')

    def add_arguments(self, parser):
        parser.add_argument('out_dir', help='Directory for the three CSVs')
        source = parser.add_mutually_exclusive_group()
        source.add_argument('--config', help='key = value generator config')
        source.add_argument(
            '--preset', choices=('study',),
            help='Rebuild the published monthly series')
        parser.add_argument('--seed', type=int)

    def handle(self, *args, **options):
        if options['config']:
            self.require_file(options['config'])
            config = load_config(options['config'], seed=options['seed'])
            epidemic = generate_epidemic(config)
            claims, truth = generate_claims(config, epidemic)
            parameters = {
                'seed': config.seed,
                'from': config.start,
                'to': config.end,
                'claims_per_month': config.claims_per_month,
            }
            inputs = [options['config']]
        elif options['preset']:
            settings = fraud_settings()
            seed = settings['SEED'] if options['seed'] is None else (
                options['seed'])
            claims, truth = study_claims(seed, settings['REGION'])
            epidemic = study_covid(settings['REGION'])
            parameters = {'seed': seed, 'preset': options['preset']}
            inputs = []
        else:
            raise UsageError('Give either --config or --preset')

        paths = [os.path.join(options['out_dir'], name)
                 for name in OUTPUT_NAMES]
        self.write_output(paths[0], _csv_bytes(write_claims_csv, claims))
        self.write_output(paths[1], _csv_bytes(write_covid_csv, epidemic))
        self.write_output(
            paths[2], _csv_bytes(write_ground_truth_csv, claims, truth))
        write_manifest(
            build_manifest('synth', inputs, parameters, paths),
            os.path.join(options['out_dir'], 'manifest.json'))
        self.stdout.write(
            f'{len(claims)} claims, {len(epidemic)} COVID-19 rows, '
            f'{len(truth.planted_pairs)} planted violation(s)')
