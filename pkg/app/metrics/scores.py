from dataclasses import dataclass

import numpy as np

from metrics.roc import cumulative_counts, scored_labels


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self):
        return self.tp + self.fp + self.tn + self.fn


def confusion(scores, labels, threshold):
    """Counts with a score at or above threshold predicted positive"""
    scores, labels = scored_labels(scores, labels)
    predicted = scores >= threshold
    actual = labels == 1
    return ConfusionCounts(
        tp=int(np.sum(predicted & actual)),
        fp=int(np.sum(predicted & ~actual)),
        tn=int(np.sum(~predicted & ~actual)),
        fn=int(np.sum(~predicted & actual)),
    )


def f1_score(counts):
    """2tp / (2tp + fp + fn); 0 when nothing is positive"""
    denominator = 2 * counts.tp + counts.fp + counts.fn
    if denominator == 0:
        return 0.0
    return 2 * counts.tp / denominator


def best_f1(scores, labels):
    """Highest F1 over thresholds at the distinct scores, and its threshold

    Among thresholds with equal F1 the highest wins.
    """
    scores, labels = scored_labels(scores, labels)
    if scores.size == 0:
        return 0.0, None
    thresholds, tp, fp = cumulative_counts(scores, labels)
    fn = int(labels.sum()) - tp
    denominator = 2 * tp + fp + fn
    f1 = np.divide(
        2.0 * tp, denominator,
        out=np.zeros(tp.shape, dtype=float), where=denominator > 0)
    best = int(np.argmax(f1))
    return float(f1[best]), float(thresholds[best])
