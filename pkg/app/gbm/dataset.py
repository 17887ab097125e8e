import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from core.exceptions import ConsistencyError, DataError, UsageError
from core.models import FraudStatus
from gbm.features import encode_claims


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """Feature matrix with 0/1 labels (1 = fraud) and claim ids per row"""
    features: np.ndarray
    labels: np.ndarray
    ids: Tuple[str, ...]

    def __post_init__(self):
        rows = self.features.shape[0]
        if self.features.ndim != 2:
            raise DataError('Features must form a matrix')
        if not rows == self.labels.size == len(self.ids):
            raise ConsistencyError(
                f'{rows} feature rows, {self.labels.size} labels and '
                f'{len(self.ids)} ids')
        if not np.isin(self.labels, (0, 1)).all():
            raise DataError('Labels must be 0 or 1')

    def __len__(self):
        return len(self.ids)

    @property
    def positives(self):
        return int(self.labels.sum())

    def subset(self, rows):
        rows = np.asarray(rows, dtype=int)
        return LabeledDataset(
            features=self.features[rows],
            labels=self.labels[rows],
            ids=tuple(self.ids[row] for row in rows),
        )


def build_dataset(schema, claims, flags=None):
    """Encode labeled claims, leaving out those with unknown fraud status"""
    labeled = [
        claim for claim in claims
        if claim.fraud_status != FraudStatus.UNKNOWN]
    skipped = len(claims) - len(labeled)
    if skipped:
        logger.info('Left out %d claim(s) with unknown fraud status', skipped)
    return LabeledDataset(
        features=encode_claims(schema, labeled, flags),
        labels=np.array([int(claim.is_fraud) for claim in labeled],
                        dtype=int),
        ids=tuple(claim.claim_id for claim in labeled),
    )


def _class_quotas(sizes, train_fraction):
    """Train rows per class: floor of each share, remainder by largest part"""
    total = math.floor(train_fraction * sum(sizes) + 0.5)
    shares = [train_fraction * size for size in sizes]
    quotas = [math.floor(share) for share in shares]
    by_remainder = sorted(
        range(len(sizes)), key=lambda index: (quotas[index] - shares[index],
                                              index))
    for index in by_remainder[:total - sum(quotas)]:
        quotas[index] += 1
    return quotas


def train_test_split(dataset, train_fraction, seed):
    """Stratified, seeded partition of a dataset into train and test"""
    if not 0 < train_fraction < 1:
        raise UsageError(
            f'Train fraction must lie strictly between 0 and 1, got '
            f'{train_fraction}')
    rng = np.random.default_rng(seed)
    classes = [np.flatnonzero(dataset.labels == label) for label in (0, 1)]
    quotas = _class_quotas([rows.size for rows in classes], train_fraction)

    train, test = [], []
    for rows, quota in zip(classes, quotas):
        shuffled = rng.permutation(rows)
        train.extend(shuffled[:quota])
        test.extend(shuffled[quota:])
    train, test = sorted(train), sorted(test)
    logger.info('Split %d rows into %d train and %d test',
                len(dataset), len(train), len(test))
    return dataset.subset(train), dataset.subset(test)
