"""The classifier report: AUC, F1 at 0.5, best F1 and the ROC points."""
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from rest_framework import serializers

from core.reports import SignificantFloatField, render_document
from metrics.roc import auc, roc_curve, scored_labels
from metrics.scores import best_f1, confusion, f1_score


METRICS_VERSION = 1
DEFAULT_THRESHOLD = 0.5


@dataclass
class ClassifierReport:
    samples: int
    positives: int
    auc: float
    threshold: float
    f1_at_threshold: float
    f1_max: float
    threshold_at_f1_max: Optional[float]
    tp: int
    fp: int
    tn: int
    fn: int
    roc: List[Tuple[float, float, float]] = field(default_factory=list)


class RocPointSerializer(serializers.Serializer):
    false_positive_rate = SignificantFloatField()
    true_positive_rate = SignificantFloatField()
    threshold = SignificantFloatField(allow_null=True)

    def to_representation(self, instance):
        fpr, tpr, threshold = instance
        return super().to_representation({
            'false_positive_rate': fpr,
            'true_positive_rate': tpr,
            'threshold': threshold,
        })


class ClassifierReportSerializer(serializers.Serializer):
    samples = serializers.IntegerField()
    positives = serializers.IntegerField()
    auc = SignificantFloatField()
    threshold = SignificantFloatField()
    f1_at_threshold = SignificantFloatField()
    f1_max = SignificantFloatField()
    threshold_at_f1_max = SignificantFloatField(allow_null=True)
    tp = serializers.IntegerField()
    fp = serializers.IntegerField()
    tn = serializers.IntegerField()
    fn = serializers.IntegerField()
    roc = RocPointSerializer(many=True)


def evaluate_scores(scores, labels, threshold=DEFAULT_THRESHOLD):
    """Full classifier report for scores against 0/1 labels"""
    scores, labels = scored_labels(scores, labels)
    curve = roc_curve(scores, labels)
    counts = confusion(scores, labels, threshold)
    f1_max, threshold_at_max = best_f1(scores, labels)
    return ClassifierReport(
        samples=int(labels.size),
        positives=int(labels.sum()),
        auc=auc(curve),
        threshold=threshold,
        f1_at_threshold=f1_score(counts),
        f1_max=f1_max,
        threshold_at_f1_max=threshold_at_max,
        tp=counts.tp,
        fp=counts.fp,
        tn=counts.tn,
        fn=counts.fn,
        roc=list(zip(curve.false_positive_rates, curve.true_positive_rates,
                     curve.thresholds)),
    )


def render_metrics(report):
    return render_document(
        'metrics', METRICS_VERSION, ClassifierReportSerializer(report).data)
