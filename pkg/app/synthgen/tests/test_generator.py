import math
from collections import Counter

from django.test import SimpleTestCase

from core.exceptions import ConfigError
from core.months import YearMonth
from gbm.boosting import Hyperparameters, fit_gbm, predict_proba
from gbm.dataset import build_dataset, train_test_split
from gbm.features import build_schema
from metrics.report import evaluate_scores
from stats.regression import pearson
from synthgen.config import LinkKind, Sampling, SynthConfig
from synthgen.epidemic import generate_epidemic
from synthgen.generator import generate_claims
from triggers.catalog import data_rules
from triggers.engine import run_rules


def sample_config(**params):
    defaults = {
        'seed': 7,
        'start': YearMonth(2020, 1),
        'end': YearMonth(2020, 6),
        'population': 3000000,
        'region': 'study-region',
        'initial_cases': 20,
        'growth_rate': 1.0,
        'claims_per_month': 100,
    }
    defaults.update(params)
    return SynthConfig(**defaults)


def generate(config):
    return generate_claims(config, generate_epidemic(config))


def rule_hits(claims, truth):
    first = truth.months[0].month
    window = truth.baseline_window or (first, first)
    hits, _ = run_rules(data_rules(), claims, window, truth.evaluation_date)
    return {(hit.claim_id, hit.rule_id) for hit in hits}


class GenerateClaimsTests(SimpleTestCase):

    def test_planted_set_is_flagged_set(self):
        """Test the data-driven rules flag exactly the planted claims"""
        config = sample_config(
            claims_per_month=120,
            baseline_months=2,
            plants={(rule.id, None): 5 for rule in data_rules()},
        )

        claims, truth = generate(config)

        self.assertEqual(rule_hits(claims, truth), truth.planted_pairs)
        self.assertEqual(len(truth.planted), 9)
        self.assertEqual(len(truth.planted['stale_reject']), 15)
        self.assertEqual(len(truth.planted['high_utilization_package']), 20)
        self.assertEqual(len(truth.planted['late_submission']), 30)

    def test_plant_in_one_month(self):
        """Test three late submissions planted in May only"""
        config = sample_config(
            plants={('late_submission', YearMonth(2020, 5)): 3})

        claims, truth = generate(config)

        planted = truth.planted['late_submission']
        self.assertEqual(len(planted), 3)
        by_id = {claim.claim_id: claim for claim in claims}
        for claim_id in planted:
            claim = by_id[claim_id]
            self.assertEqual(claim.reported_month, YearMonth(2020, 5))
            self.assertGreater(
                (claim.claim_raised_date - claim.discharge_date).days, 15)
        self.assertEqual(rule_hits(claims, truth), truth.planted_pairs)

    def test_single_duplicate_skipped(self):
        """Test a one-claim duplicate cannot be planted and is skipped"""
        config = sample_config(plants={('duplicate_package', None): 1})

        with self.assertLogs('synthgen.generator', 'WARNING'):
            _, truth = generate(config)

        self.assertEqual(truth.planted, {})

    def test_natural_violations_add_hits(self):
        """Test natural violations only add to the planted hits"""
        config = sample_config(
            natural_violation_rate=0.2,
            plants={('high_value_bill', None): 2})

        claims, truth = generate(config)

        hits = rule_hits(claims, truth)
        self.assertTrue(truth.planted_pairs < hits)
        self.assertEqual(
            {rule_id for _, rule_id in hits - truth.planted_pairs},
            {'late_submission'})

    def test_deterministic(self):
        """Test one config always yields the same claims"""
        config = sample_config(plants={('long_stay', None): 2})

        first, _ = generate(config)
        second, _ = generate(config)

        self.assertEqual(first, second)

    def test_other_seed_differs(self):
        """Test a different seed yields different claims"""
        first, _ = generate(sample_config())
        second, _ = generate(sample_config(seed=8))

        self.assertNotEqual(first, second)

    def test_exact_fraud_counts(self):
        """Test a flat link assigns the rounded base fraction every month"""
        config = sample_config(
            link=LinkKind.LINEAR, link_slope=0.0, base_fraud_fraction=0.125,
            claims_per_month=200)

        claims, truth = generate(config)

        realized = Counter(
            claim.reported_month for claim in claims if claim.is_fraud)
        for month in truth.months:
            self.assertEqual(month.fraud_fraction, 0.125)
            self.assertEqual(month.fraud_claims, 25)
            self.assertEqual(realized[month.month], 25)
            self.assertEqual(len(truth.fraud_ids[month.month]), 25)

    def test_bernoulli_sampling(self):
        """Test Bernoulli labels agree with the recorded truth"""
        config = sample_config(
            link=LinkKind.LINEAR, link_slope=0.0, base_fraud_fraction=0.3,
            sampling=Sampling.BERNOULLI, claims_per_month=400)

        claims, truth = generate(config)

        realized = Counter(
            claim.reported_month for claim in claims if claim.is_fraud)
        for month in truth.months:
            self.assertEqual(realized[month.month], month.fraud_claims)
            self.assertLess(abs(month.fraud_claims - 120), 60)

    def test_log_link_follows_epidemic(self):
        """Test fraud and covid rates correlate positively"""
        config = sample_config(
            start=YearMonth(2020, 3), end=YearMonth(2020, 8),
            link=LinkKind.LOGARITHMIC, link_slope=0.0118,
            link_intercept=0.1832, claims_per_month=1000)

        _, truth = generate(config)

        for month in truth.months:
            expected = 0.1832 + 0.0118 * math.log(month.covid_rate)
            self.assertAlmostEqual(month.fraud_fraction, expected)
        r = pearson([month.covid_rate for month in truth.months],
                    [month.fraud_rate for month in truth.months])
        self.assertGreater(r, 0)

    def test_non_finite_link(self):
        """Test a link giving a non-finite fraction is a config error"""
        config = sample_config(link=LinkKind.LINEAR, link_slope=math.inf)

        with self.assertRaises(ConfigError) as context:
            generate(config)

        self.assertEqual(context.exception.key, 'link')

    def test_learnable_corpus(self):
        """Test boosted trees separate the noisy fraud signal"""
        config = sample_config(
            start=YearMonth(2020, 1), end=YearMonth(2020, 5),
            link=LinkKind.LINEAR, link_slope=0.0, base_fraud_fraction=0.08,
            claims_per_month=1000)
        claims, _ = generate(config)
        schema = build_schema(claims)
        train, test = train_test_split(
            build_dataset(schema, claims), 0.7, 42)

        model = fit_gbm(train, Hyperparameters(n_trees=30), schema)

        report = evaluate_scores(
            predict_proba(model, test.features), test.labels)
        self.assertEqual(report.samples, 1500)
        self.assertGreaterEqual(report.auc, 0.90)
