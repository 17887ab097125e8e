import datetime

from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from claims import rates
from core.exceptions import DomainError, UsageError
from core.models import FraudStatus
from core.months import YearMonth
from core.tests.samples import sample_claim, sample_covid


def sample_month_claims(reported, fraud, month=YearMonth(2020, 5)):
    """Claims reported on the first of the month, the first `fraud` fraud"""
    return [
        sample_claim(
            claim_id=f'{month}-{index}',
            claim_reported_date=month.first_day,
            fraud_status=(
                FraudStatus.FRAUD if index < fraud else FraudStatus.NOT_FRAUD
            ),
        )
        for index in range(reported)
    ]


class MonthlyFraudRateTests(SimpleTestCase):

    def test_direct_quotient(self):
        """Test 10 fraud claims out of 200 reported is a 5% rate"""
        claims = sample_month_claims(200, 10)

        rate = rates.monthly_fraud_rate(claims, YearMonth(2020, 5))

        self.assertEqual(rate.reported_claims, 200)
        self.assertEqual(rate.fraud_claims, 10)
        self.assertEqual(rate.fraud_rate, 0.05)

    def test_empty_month(self):
        """Test a month with no claims has a zero rate"""
        rate = rates.monthly_fraud_rate(
            sample_month_claims(5, 1), YearMonth(2020, 6))

        self.assertEqual(rate.reported_claims, 0)
        self.assertEqual(rate.fraud_rate, 0.0)

    def test_august_rate(self):
        """Test 285 fraud claims in 2041 reported rounds to 13.96%"""
        claims = sample_month_claims(2041, 285, YearMonth(2020, 8))

        rate = rates.monthly_fraud_rate(claims, YearMonth(2020, 8))

        self.assertAlmostEqual(rate.fraud_rate, 0.1396, places=4)

    def test_excluded_statuses(self):
        """Test excluded statuses leave the denominator"""
        claims = sample_month_claims(4, 1) + [
            sample_claim(claim_id='R-1', claim_status='Rejected'),
        ]

        rate = rates.monthly_fraud_rate(
            claims, YearMonth(2020, 5), excluded_statuses=('rejected',))

        self.assertEqual(rate.reported_claims, 4)


class MonthlyCovidRateTests(SimpleTestCase):

    def setUp(self):
        self.records = [
            sample_covid(datetime.date(2020, 6, 30), 15000),
            sample_covid(datetime.date(2020, 7, 31), 15457),
            sample_covid(datetime.date(2020, 8, 15), 30000),
            sample_covid(datetime.date(2020, 8, 31), 52527),
        ]

    def test_august_rate(self):
        """Test 37,070 new cases over 3 million is 1.23567%"""
        rate = rates.monthly_covid_rate(
            self.records, YearMonth(2020, 8), 3000000)

        self.assertEqual(rate.covid_cases, 37070)
        self.assertEqual(f'{rate.covid_rate * 100:.5f}', '1.23567')

    def test_march_rate(self):
        """Test 41 new cases over 3 million rounds to 0.00137%"""
        records = [
            sample_covid(datetime.date(2020, 2, 29), 1),
            sample_covid(datetime.date(2020, 3, 31), 42),
        ]
        rate = rates.monthly_covid_rate(records, YearMonth(2020, 3), 3000000)

        self.assertEqual(rate.covid_cases, 41)
        self.assertEqual(f'{rate.covid_rate * 100:.5f}', '0.00137')

    def test_no_new_cases(self):
        """Test a month before the first record has no cases"""
        rate = rates.monthly_covid_rate(
            self.records, YearMonth(2020, 1), 3000000)

        self.assertEqual(rate.covid_cases, 0)
        self.assertEqual(rate.covid_rate, 0.0)

    def test_first_record_counts_from_zero(self):
        """Test cases before the first record count from a zero baseline"""
        rate = rates.monthly_covid_rate(
            self.records, YearMonth(2020, 6), 3000000)

        self.assertEqual(rate.covid_cases, 15000)

    def test_population_must_be_positive(self):
        """Test a zero population is a domain error"""
        with self.assertRaises(DomainError):
            rates.monthly_covid_rate(self.records, YearMonth(2020, 8), 0)


class JointSeriesTests(SimpleTestCase):

    def test_empty_inputs(self):
        """Test empty claims and COVID data give all-zero rows"""
        series = rates.build_joint_series(
            [], [], 3000000, YearMonth(2020, 1), YearMonth(2020, 3))

        self.assertEqual(len(series), 3)
        for point in series:
            self.assertEqual(point.reported_claims, 0)
            self.assertEqual(point.fraud_rate, 0.0)
            self.assertEqual(point.covid_cases, 0)

    def test_single_month(self):
        """Test from equal to to gives exactly one row"""
        series = rates.build_joint_series(
            sample_month_claims(3, 1), [], 3000000,
            YearMonth(2020, 5), YearMonth(2020, 5))

        self.assertEqual(len(series), 1)
        self.assertEqual(series[0].fraud_claims, 1)

    def test_reversed_range(self):
        """Test from after to is a usage error"""
        with self.assertRaises(UsageError):
            rates.build_joint_series(
                [], [], 3000000, YearMonth(2020, 5), YearMonth(2020, 4))

    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(
            st.tuples(
                st.integers(min_value=0, max_value=5),
                st.booleans(),
            ),
            max_size=40,
        ),
        st.randoms(use_true_random=False),
    )
    def test_aggregation_invariants(self, rows, random):
        """Test rates stay in range and ignore the order of claims"""
        start = YearMonth(2020, 1)
        claims = [
            sample_claim(
                claim_id=f'C-{index}',
                claim_reported_date=start.shift(offset).first_day,
                fraud_status=(
                    FraudStatus.FRAUD if fraud else FraudStatus.NOT_FRAUD),
            )
            for index, (offset, fraud) in enumerate(rows)
        ]
        shuffled = list(claims)
        random.shuffle(shuffled)
        end = start.shift(3)

        series = rates.build_joint_series(claims, [], 1000, start, end)

        self.assertEqual(
            series,
            rates.build_joint_series(shuffled, [], 1000, start, end))
        in_range = sum(1 for offset, _ in rows if offset <= 3)
        self.assertEqual(
            sum(point.reported_claims for point in series), in_range)
        for point in series:
            self.assertLessEqual(point.fraud_claims, point.reported_claims)
            self.assertTrue(0.0 <= point.fraud_rate <= 1.0)
            self.assertTrue(0.0 <= point.covid_rate <= 1.0)
