from claims.ingest import load_claims
from core.commands import FraudCommand
from core.conf import fraud_settings
from core.exceptions import DegenerateLabelsError, UsageError
from gbm.boosting import Hyperparameters, fit_gbm, predict_proba
from gbm.dataset import build_dataset, train_test_split
from gbm.features import build_schema, builtin_trigger_flags
from gbm.modelfile import render_model
from metrics.report import DEFAULT_THRESHOLD, evaluate_scores, render_metrics


class Command(FraudCommand):
    help = ('Train the boosted fraud model on a stratified split and report '
            'metrics on the held-out rows')

    def add_arguments(self, parser):
        parser.add_argument('claims', help='Claims CSV path')
        parser.add_argument('--model-out', dest='model_out', required=True)
        parser.add_argument(
            '--report-out', dest='report_out',
            help='Metrics report path (stdout if omitted)')
        parser.add_argument(
            '--split', type=float, help='Training fraction, e.g. 0.7')
        parser.add_argument('--seed', type=int)
        parser.add_argument('--n-trees', dest='n_trees', type=int)
        parser.add_argument('--max-depth', dest='max_depth', type=int)
        parser.add_argument(
            '--learning-rate', dest='learning_rate', type=float)
        parser.add_argument('--min-leaf', dest='min_leaf', type=int)
        parser.add_argument(
            '--threshold', type=float, default=DEFAULT_THRESHOLD)
        parser.add_argument(
            '--inject-trigger-flags', dest='inject_trigger_flags',
            action='store_true',
            help='Add a feature marking claims hit by a built-in trigger')
        parser.add_argument('--schema-map', dest='schema_map')

    def handle(self, *args, **options):
        config = fraud_settings()
        split = options['split']
        if split is None:
            split = config['TRAIN_FRACTION']
        if not 0 < split < 1:
            raise UsageError(
                f'--split must lie strictly between 0 and 1, got {split}')
        seed = config['SEED'] if options['seed'] is None else options['seed']
        hyperparameters = Hyperparameters.from_settings(
            n_trees=options['n_trees'],
            max_depth=options['max_depth'],
            learning_rate=options['learning_rate'],
            min_leaf=options['min_leaf'],
        )

        self.require_file(options['claims'])
        claims, _ = load_claims(options['claims'], options['schema_map'])
        inject = options['inject_trigger_flags']
        flags = builtin_trigger_flags(claims) if inject else None
        schema = build_schema(claims, trigger_flags=inject)
        dataset = build_dataset(schema, claims, flags)
        if dataset.positives in (0, len(dataset)):
            raise DegenerateLabelsError(
                f'Training needs fraud and non-fraud claims; got '
                f'{dataset.positives} fraud of {len(dataset)}')

        train, test = train_test_split(dataset, split, seed)
        model = fit_gbm(train, hyperparameters, schema)
        self.write_output(options['model_out'], render_model(model))

        report = evaluate_scores(
            predict_proba(model, test.features), test.labels,
            options['threshold'])
        self.write_output(options['report_out'], render_metrics(report))
        self.record_run(
            'train',
            [options['claims']],
            {
                'split': split, 'seed': seed,
                'inject_trigger_flags': inject,
                'threshold': options['threshold'],
                **hyperparameters.as_dict(),
            },
            [options['model_out'], options['report_out']],
        )
