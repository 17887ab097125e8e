"""Binary regression trees fitted to boosting residuals.

A row goes left when its feature value is at most the threshold, or when
the value is missing (NaN). Split search is an exact scan over the sorted
distinct values of every feature; gain is the drop in squared error of the
residuals, and ties go to the lowest feature index, then the lowest
threshold.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np


MIN_GAIN = 1e-12
MIN_HESSIAN = 1e-12


@dataclass(frozen=True)
class TreeNode:
    value: Optional[float] = None
    feature: Optional[int] = None
    threshold: Optional[float] = None
    left: Optional['TreeNode'] = None
    right: Optional['TreeNode'] = None

    @property
    def is_leaf(self):
        return self.feature is None

    @property
    def depth(self):
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth, self.right.depth)

    def features(self):
        """Every feature index this tree splits on"""
        if self.is_leaf:
            return set()
        return {self.feature} | self.left.features() | self.right.features()

    def scaled(self, factor):
        if self.is_leaf:
            return TreeNode(value=self.value * factor)
        return TreeNode(
            feature=self.feature, threshold=self.threshold,
            left=self.left.scaled(factor), right=self.right.scaled(factor))

    def predict(self, features):
        """Leaf value for every row of a feature matrix"""
        out = np.empty(features.shape[0])
        self._fill(features, np.arange(features.shape[0]), out)
        return out

    def _fill(self, features, rows, out):
        if self.is_leaf:
            out[rows] = self.value
            return
        column = features[rows, self.feature]
        left = np.isnan(column) | (column <= self.threshold)
        self.left._fill(features, rows[left], out)
        self.right._fill(features, rows[~left], out)


@dataclass(frozen=True)
class Split:
    gain: float
    feature: int
    threshold: float


def _best_split_on(column, residual, min_leaf):
    """(gain, threshold) of the best split on one column, or None"""
    missing = np.isnan(column)
    present = np.flatnonzero(~missing)
    if present.size == 0:
        return None
    order = present[np.argsort(column[present], kind='stable')]
    values = column[order]
    last_of_value = np.flatnonzero(np.diff(values))
    if last_of_value.size == 0:
        return None

    total = residual.sum()
    count = residual.size
    missing_sum = residual[missing].sum()
    missing_count = int(missing.sum())
    left_sum = missing_sum + np.cumsum(residual[order])[last_of_value]
    left_count = missing_count + last_of_value + 1
    right_sum = total - left_sum
    right_count = count - left_count

    allowed = (left_count >= min_leaf) & (right_count >= min_leaf)
    if not allowed.any():
        return None
    gain = (left_sum ** 2 / left_count + right_sum ** 2 / right_count
            - total ** 2 / count)
    gain = np.where(allowed, gain, -np.inf)
    best = int(np.argmax(gain))
    return float(gain[best]), float(values[last_of_value[best]])


def best_split(features, residual, min_leaf):
    best = None
    for index in range(features.shape[1]):
        found = _best_split_on(features[:, index], residual, min_leaf)
        if found is None:
            continue
        gain, threshold = found
        if gain > MIN_GAIN and (best is None or gain > best.gain):
            best = Split(gain, index, threshold)
    return best


def newton_leaf(residual, hessian):
    """One Newton step: sum of residuals over sum of hessians"""
    return float(residual.sum() / max(float(hessian.sum()), MIN_HESSIAN))


def fit_tree(features, residual, hessian, max_depth, min_leaf):
    """Grow a tree to at most max_depth levels with min_leaf rows per leaf"""
    min_leaf = max(1, min_leaf)

    def grow(rows, depth):
        if depth >= max_depth or rows.size < 2 * min_leaf:
            return TreeNode(value=newton_leaf(residual[rows], hessian[rows]))
        split = best_split(features[rows], residual[rows], min_leaf)
        if split is None:
            return TreeNode(value=newton_leaf(residual[rows], hessian[rows]))
        column = features[rows, split.feature]
        left = np.isnan(column) | (column <= split.threshold)
        return TreeNode(
            feature=split.feature,
            threshold=split.threshold,
            left=grow(rows[left], depth + 1),
            right=grow(rows[~left], depth + 1),
        )

    return grow(np.arange(features.shape[0]), 0)
