"""ROC curve and the area under it.

Tied scores are grouped into one step, so a tie between a positive and a
negative contributes half to the area.
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from core.exceptions import (
    DataError, DegenerateLabelsError, LengthMismatchError,
)


@dataclass(frozen=True)
class RocCurve:
    false_positive_rates: Tuple[float, ...]
    true_positive_rates: Tuple[float, ...]
    thresholds: Tuple[float, ...]

    @property
    def points(self):
        return list(zip(self.false_positive_rates, self.true_positive_rates))


def scored_labels(scores, labels):
    """Scores and 0/1 labels as numpy arrays of equal length"""
    scores = np.asarray(list(scores), dtype=float)
    labels = np.asarray(list(labels))
    if scores.shape != labels.shape:
        raise LengthMismatchError(
            f'{scores.size} scores but {labels.size} labels')
    if labels.size and not np.isin(labels, (0, 1)).all():
        raise DataError('Labels must be 0 or 1')
    if not np.isfinite(scores).all():
        raise DataError('Scores must be finite')
    return scores, labels.astype(int)


def cumulative_counts(scores, labels):
    """Distinct scores, descending, with the tp and fp at or above each"""
    order = np.argsort(-scores, kind='stable')
    scores = scores[order]
    labels = labels[order]
    last_of_group = np.r_[np.flatnonzero(np.diff(scores)), scores.size - 1]
    true_positives = np.cumsum(labels)[last_of_group]
    false_positives = (last_of_group + 1) - true_positives
    return scores[last_of_group], true_positives, false_positives


def roc_curve(scores, labels):
    scores, labels = scored_labels(scores, labels)
    positives = int(labels.sum())
    negatives = labels.size - positives
    if positives == 0 or negatives == 0:
        raise DegenerateLabelsError(
            f'ROC needs both classes; got {positives} positive and '
            f'{negatives} negative label(s)')

    thresholds, tp, fp = cumulative_counts(scores, labels)
    return RocCurve(
        false_positive_rates=tuple(np.r_[0.0, fp / negatives].tolist()),
        true_positive_rates=tuple(np.r_[0.0, tp / positives].tolist()),
        thresholds=tuple(np.r_[np.inf, thresholds].tolist()),
    )


def auc(curve):
    """Trapezoidal area under a ROC curve"""
    fpr = np.asarray(curve.false_positive_rates)
    tpr = np.asarray(curve.true_positive_rates)
    return float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1]) / 2))
