import datetime

from django.test import SimpleTestCase

from core import models
from core.months import YearMonth
from core.tests.samples import sample_claim


class ModelTests(SimpleTestCase):

    def test_claim_has_the_schema_fields(self):
        """Test the claim record carries the 26 schema fields"""
        self.assertEqual(len(models.CLAIM_FIELDS), 26)
        self.assertEqual(models.CLAIM_FIELDS[0], 'policy_number')
        self.assertEqual(models.CLAIM_FIELDS[-1], 'fraud_status')

    def test_field_groups_partition_the_schema(self):
        """Test every field is a date, money, integer or text field"""
        groups = (models.DATE_FIELDS + models.MONEY_FIELDS +
                  models.INTEGER_FIELDS + models.TEXT_FIELDS)

        self.assertEqual(sorted(groups), sorted(models.CLAIM_FIELDS))

    def test_reported_month(self):
        """Test claims are bucketed by their reported date"""
        claim = sample_claim(
            claim_reported_date=datetime.date(2020, 2, 29))

        self.assertEqual(claim.reported_month, YearMonth(2020, 2))

    def test_is_fraud(self):
        """Test only the fraud status counts as fraud"""
        self.assertTrue(
            sample_claim(fraud_status=models.FraudStatus.FRAUD).is_fraud)
        self.assertFalse(
            sample_claim(fraud_status=models.FraudStatus.UNKNOWN).is_fraud)

    def test_issue_severity(self):
        """Test warnings are not errors"""
        issue = models.ValidationIssue(
            2, 'paid_amount', models.Severity.WARNING, 'High')

        self.assertFalse(issue.is_error)
