from claims.ingest import load_claims
from core.commands import FraudCommand
from gbm.boosting import predict_proba
from gbm.dataset import build_dataset
from gbm.features import builtin_trigger_flags
from gbm.modelfile import load_model
from metrics.report import DEFAULT_THRESHOLD, evaluate_scores, render_metrics


class Command(FraudCommand):
    help = 'Score labeled claims with a saved model and report its metrics'

    def add_arguments(self, parser):
        parser.add_argument('model', help='Model file from train')
        parser.add_argument('claims', help='Claims CSV path')
        parser.add_argument('--out', help='Metrics report (stdout if omitted)')
        parser.add_argument(
            '--threshold', type=float, default=DEFAULT_THRESHOLD)
        parser.add_argument('--schema-map', dest='schema_map')

    def handle(self, *args, **options):
        self.require_file(options['model'])
        self.require_file(options['claims'])
        model = load_model(options['model'])
        claims, _ = load_claims(options['claims'], options['schema_map'])
        flags = None
        if model.schema.uses_trigger_flags:
            flags = builtin_trigger_flags(claims)

        dataset = build_dataset(model.schema, claims, flags)
        report = evaluate_scores(
            predict_proba(model, dataset.features), dataset.labels,
            options['threshold'])
        self.write_output(options['out'], render_metrics(report))
        self.record_run(
            'evaluate',
            [options['model'], options['claims']],
            {'threshold': options['threshold']},
            [options['out']],
        )
