import math

import numpy as np
from django.test import SimpleTestCase

from core.months import YearMonth
from synthgen.config import GrowthKind, SynthConfig
from synthgen.epidemic import generate_epidemic, month_end_cumulative


def sample_config(**params):
    defaults = {
        'seed': 1,
        'start': YearMonth(2020, 3),
        'end': YearMonth(2020, 8),
        'population': 3000000,
        'region': 'study-region',
        'initial_cases': 10,
        'growth_rate': math.log(3),
    }
    defaults.update(params)
    return SynthConfig(**defaults)


class GenerateEpidemicTests(SimpleTestCase):

    def test_exponential_month_ends(self):
        """Test a rate of ln 3 triples the count every month"""
        records = generate_epidemic(sample_config())

        self.assertEqual(
            month_end_cumulative(records), [30, 90, 270, 810, 2430, 7290])

    def test_daily_records(self):
        """Test one record per day in the configured region"""
        records = generate_epidemic(sample_config())

        self.assertEqual(len(records), 184)
        self.assertEqual(records[0].date.isoformat(), '2020-03-01')
        self.assertEqual(records[-1].date.isoformat(), '2020-08-31')
        self.assertEqual({record.region for record in records},
                         {'study-region'})

    def test_zero_rate_is_constant(self):
        """Test a zero rate keeps the initial count"""
        records = generate_epidemic(sample_config(growth_rate=0.0))

        self.assertEqual(
            {record.cumulative_infected for record in records}, {10})

    def test_logistic_bounded(self):
        """Test logistic counts never decrease nor pass the capacity"""
        records = generate_epidemic(sample_config(
            growth=GrowthKind.LOGISTIC, capacity=5000, growth_rate=2.0))
        counts = np.array([record.cumulative_infected for record in records])

        self.assertTrue(np.all(np.diff(counts) >= 0))
        self.assertLessEqual(counts.max(), 5000)
        self.assertGreater(counts.max(), 4900)

    def test_capped_at_population(self):
        """Test runaway growth stops at the population"""
        records = generate_epidemic(sample_config(
            population=1000, growth_rate=5.0))

        self.assertEqual(records[-1].cumulative_infected, 1000)
