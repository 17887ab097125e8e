import io
import random

from django.test import SimpleTestCase
from hypothesis import assume, given, settings, strategies as st

from core.exceptions import DegenerateLabelsError, LengthMismatchError
from core.reports import parse_document
from metrics.report import METRICS_VERSION, evaluate_scores, render_metrics
from metrics.roc import auc, roc_curve
from metrics.scores import ConfusionCounts, best_f1, confusion, f1_score


def rank_statistic(scores, labels):
    """P(positive outranks negative) with ties counted half, by pair count"""
    positives = [s for s, label in zip(scores, labels) if label == 1]
    negatives = [s for s, label in zip(scores, labels) if label == 0]
    total = 0.0
    for p in positives:
        for n in negatives:
            total += 1.0 if p > n else 0.5 if p == n else 0.0
    return total / (len(positives) * len(negatives))


def brute_force_roc(scores, labels):
    positives = sum(labels)
    negatives = len(labels) - positives
    points = [(0.0, 0.0)]
    for threshold in sorted(set(scores), reverse=True):
        tp = sum(1 for s, y in zip(scores, labels) if s >= threshold and y)
        fp = sum(1 for s, y in zip(scores, labels) if s >= threshold and not y)
        points.append((fp / negatives, tp / positives))
    return points


@st.composite
def labeled_scores(draw, max_size=500, unique=False):
    """Integer-valued scores with labels holding both classes"""
    scores = draw(st.lists(
        st.integers(min_value=0, max_value=40), min_size=2,
        max_size=max_size, unique=unique))
    labels = draw(st.lists(
        st.integers(min_value=0, max_value=1),
        min_size=len(scores), max_size=len(scores)))
    assume(0 < sum(labels) < len(labels))
    return [float(s) for s in scores], labels


class RocCurveTests(SimpleTestCase):

    def test_perfect_separation(self):
        """Test a perfectly ranked pair"""
        curve = roc_curve([0.9, 0.1], [1, 0])

        self.assertEqual(curve.points, [(0.0, 0.0), (0.0, 1.0), (1.0, 1.0)])
        self.assertEqual(curve.thresholds[1:], (0.9, 0.1))
        self.assertEqual(auc(curve), 1.0)

    def test_full_tie(self):
        """Test tied scores form a single diagonal step"""
        curve = roc_curve([0.5, 0.5], [1, 0])

        self.assertEqual(curve.points, [(0.0, 0.0), (1.0, 1.0)])
        self.assertEqual(auc(curve), 0.5)

    def test_mixed_fixture(self):
        """Test a six-point curve against enumerating every threshold"""
        scores = [0.8, 0.4, 0.4, 0.7, 0.1, 0.55]
        labels = [1, 0, 1, 0, 0, 1]

        curve = roc_curve(scores, labels)

        self.assertEqual(curve.points, brute_force_roc(scores, labels))

    def test_single_class(self):
        """Test labels of one class have no ROC curve"""
        with self.assertRaises(DegenerateLabelsError):
            roc_curve([0.2, 0.7], [1, 1])

    def test_length_mismatch(self):
        """Test scores and labels must pair up"""
        with self.assertRaises(LengthMismatchError):
            roc_curve([0.2, 0.7], [1])

    def test_random_fixture_matches_rank_statistic(self):
        """Test 200 seeded random samples against the pair count"""
        generator = random.Random(7)
        scores = [round(generator.random(), 2) for _ in range(200)]
        labels = [generator.randint(0, 1) for _ in range(200)]

        area = auc(roc_curve(scores, labels))

        self.assertAlmostEqual(
            area, rank_statistic(scores, labels), delta=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(labeled_scores())
    def test_area_equals_rank_statistic(self, data):
        """Test the trapezoid area equals the pairwise rank statistic"""
        scores, labels = data

        curve = roc_curve(scores, labels)

        self.assertAlmostEqual(
            auc(curve), rank_statistic(scores, labels), delta=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(labeled_scores(max_size=60))
    def test_curve_is_monotone(self, data):
        """Test the curve runs from (0,0) to (1,1) without stepping back"""
        curve = roc_curve(*data)
        points = curve.points

        self.assertEqual(points[0], (0.0, 0.0))
        self.assertEqual(points[-1], (1.0, 1.0))
        for before, after in zip(points, points[1:]):
            self.assertLessEqual(before[0], after[0])
            self.assertLessEqual(before[1], after[1])

    @settings(max_examples=200, deadline=None)
    @given(labeled_scores(max_size=60))
    def test_increasing_transform(self, data):
        """Test a strictly increasing map of the scores keeps the area"""
        scores, labels = data
        moved = [3 * s ** 3 + s + 1 for s in scores]

        self.assertEqual(auc(roc_curve(scores, labels)),
                         auc(roc_curve(moved, labels)))

    @settings(max_examples=200, deadline=None)
    @given(labeled_scores(max_size=40, unique=True))
    def test_negated_scores(self, data):
        """Test negating tie-free scores mirrors the area"""
        scores, labels = data

        forward = auc(roc_curve(scores, labels))
        backward = auc(roc_curve([-s for s in scores], labels))

        self.assertAlmostEqual(forward, 1 - backward, delta=1e-12)


class ConfusionTests(SimpleTestCase):

    def test_threshold_is_inclusive(self):
        """Test a score equal to the threshold is predicted positive"""
        self.assertEqual(confusion([0.6, 0.4], [1, 0], 0.5),
                         ConfusionCounts(tp=1, fp=0, tn=1, fn=0))
        self.assertEqual(confusion([0.5], [1], 0.5).tp, 1)

    def test_threshold_above_every_score(self):
        """Test nothing is positive above the highest score"""
        counts = confusion([0.6, 0.4], [1, 0], 0.7)

        self.assertEqual((counts.tp, counts.fp), (0, 0))

    def test_twenty_samples(self):
        """Test counts on 20 seeded samples match hand enumeration"""
        generator = random.Random(3)
        scores = [generator.random() for _ in range(20)]
        labels = [generator.randint(0, 1) for _ in range(20)]

        counts = confusion(scores, labels, 0.5)

        expected = {'tp': 0, 'fp': 0, 'tn': 0, 'fn': 0}
        for score, label in zip(scores, labels):
            key = ('t' if (score >= 0.5) == bool(label) else 'f') + (
                'p' if score >= 0.5 else 'n')
            expected[key] += 1
        self.assertEqual(counts, ConfusionCounts(**expected))
        self.assertEqual(counts.total, 20)

    def test_f1(self):
        """Test F1 from counts, including the all-zero convention"""
        self.assertAlmostEqual(
            f1_score(ConfusionCounts(tp=2, fp=1, tn=0, fn=1)), 2 / 3)
        self.assertEqual(f1_score(ConfusionCounts(tp=4, fp=0, tn=9, fn=0)),
                         1.0)
        self.assertEqual(f1_score(ConfusionCounts(0, 0, 5, 0)), 0.0)

    def test_best_f1(self):
        """Test the threshold scan finds the highest F1"""
        f1, threshold = best_f1([0.9, 0.8, 0.3, 0.2], [1, 0, 1, 0])

        self.assertAlmostEqual(f1, 0.8)
        self.assertEqual(threshold, 0.3)

    def test_best_f1_tie_takes_highest_threshold(self):
        """Test equal F1 at two thresholds resolves to the higher one"""
        f1, threshold = best_f1([0.9, 0.7, 0.5, 0.3], [1, 0, 0, 1])

        self.assertAlmostEqual(f1, 2 / 3)
        self.assertEqual(threshold, 0.9)


class ClassifierReportTests(SimpleTestCase):

    def test_report(self):
        """Test the report fields and the rendered document"""
        scores = [0.9, 0.8, 0.3, 0.2]
        labels = [1, 0, 1, 0]

        report = evaluate_scores(scores, labels)
        document = parse_document(
            io.BytesIO(render_metrics(report)), 'metrics', METRICS_VERSION)

        self.assertEqual(report.samples, 4)
        self.assertEqual(report.positives, 2)
        self.assertEqual(report.auc, 0.75)
        self.assertEqual((report.tp, report.fp, report.tn, report.fn),
                         (1, 1, 1, 1))
        self.assertEqual(report.f1_at_threshold, 0.5)
        self.assertEqual(document['threshold_at_f1_max'], 0.3)
        self.assertEqual(len(document['roc']), 5)
        self.assertIsNone(document['roc'][0]['threshold'])
        self.assertEqual(document['roc'][-1]['true_positive_rate'], 1.0)
