"""Gradient boosting for binary fraud labels under logistic loss.

Every stage fits a regression tree to the residuals y - sigmoid(F) and sets
its leaves by one Newton step. A stage whose step would raise the training
loss has its leaves halved until it no longer does, so the loss never goes
up from one stage to the next.
"""
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import List

import numpy as np

from core.conf import fraud_settings
from core.exceptions import ConfigError, EncodingError, TrainingError
from core.models import ClaimRecord
from gbm.features import FeatureSchema, encode_claims
from gbm.tree import TreeNode, fit_tree


logger = logging.getLogger(__name__)

BASE_RATE_CLAMP = 1e-6
PROBABILITY_CLIP = 1e-15
MAX_HALVINGS = 60


@dataclass(frozen=True)
class Hyperparameters:
    n_trees: int = 100
    max_depth: int = 3
    learning_rate: float = 0.1
    min_leaf: int = 20

    def __post_init__(self):
        if self.n_trees < 0:
            raise ConfigError('n_trees must not be negative', key='n_trees')
        if self.max_depth < 0:
            raise ConfigError(
                'max_depth must not be negative', key='max_depth')
        if not 0 < self.learning_rate <= 1:
            raise ConfigError(
                'learning_rate must lie in (0, 1]', key='learning_rate')
        if self.min_leaf < 1:
            raise ConfigError('min_leaf must be at least 1', key='min_leaf')

    @classmethod
    def from_settings(cls, **overrides):
        values = dict(fraud_settings()['GBM'])
        values.update(
            {key: value for key, value in overrides.items()
             if value is not None})
        unknown = set(values) - set(cls.__dataclass_fields__)
        if unknown:
            key = sorted(unknown)[0]
            raise ConfigError(f'Unknown GBM setting {key!r}', key=key)
        return cls(**values)

    def as_dict(self):
        return asdict(self)


@dataclass
class BoostedModel:
    schema: FeatureSchema
    hyperparameters: Hyperparameters
    initial_score: float
    learning_rate: float
    trees: List[TreeNode] = field(default_factory=list)
    stage_losses: List[float] = field(default_factory=list)


def sigmoid(scores):
    return 0.5 * (1.0 + np.tanh(0.5 * np.asarray(scores, dtype=float)))


def logistic_loss(labels, scores):
    """Mean logistic loss of raw scores against 0/1 labels"""
    return float(np.mean(np.logaddexp(0.0, scores) - labels * scores))


def check_finite(features, ids, schema=None):
    """Raise TrainingError at the first infinite feature value"""
    rows, columns = np.nonzero(np.isinf(features))
    if rows.size:
        row, column = int(rows[0]), int(columns[0])
        name = schema.names[column] if schema is not None else column
        raise TrainingError(
            f'Non-finite feature {name} for claim {ids[row]}')


def base_score(labels):
    """Log-odds of the clamped label mean"""
    rate = float(np.mean(labels)) if labels.size else 0.5
    rate = min(max(rate, BASE_RATE_CLAMP), 1 - BASE_RATE_CLAMP)
    return math.log(rate / (1 - rate))


def fit_gbm(train, hyperparameters=None, schema=None):
    """Boosted trees for a labeled dataset"""
    hyperparameters = hyperparameters or Hyperparameters.from_settings()
    if len(train) == 0:
        raise TrainingError('No training rows')
    check_finite(train.features, train.ids, schema)

    features, labels = train.features, train.labels
    initial = base_score(labels)
    scores = np.full(len(train), initial)
    model = BoostedModel(
        schema=schema,
        hyperparameters=hyperparameters,
        initial_score=initial,
        learning_rate=hyperparameters.learning_rate,
        stage_losses=[logistic_loss(labels, scores)],
    )
    if labels.min() == labels.max():
        logger.warning(
            'Training labels hold one class; the model is the base rate')
        return model

    rate = hyperparameters.learning_rate
    for stage in range(1, hyperparameters.n_trees + 1):
        probabilities = sigmoid(scores)
        residual = labels - probabilities
        hessian = probabilities * (1 - probabilities)
        tree = fit_tree(features, residual, hessian,
                        hyperparameters.max_depth, hyperparameters.min_leaf)

        previous = model.stage_losses[-1]
        halvings = 0
        while True:
            candidate = scores + rate * tree.predict(features)
            loss = logistic_loss(labels, candidate)
            if loss <= previous:
                break
            if halvings == MAX_HALVINGS:
                tree = tree.scaled(0.0)
                candidate, loss = scores, previous
                break
            tree = tree.scaled(0.5)
            halvings += 1
        if halvings:
            logger.info('Stage %d: step halved %d time(s)', stage, halvings)

        scores = candidate
        model.trees.append(tree)
        model.stage_losses.append(loss)
        if stage % 10 == 0:
            logger.info('Stage %d: training loss %.6f', stage, loss)
    return model


def raw_scores(model, features):
    """Initial score plus every tree's shrunken output, stage by stage"""
    scores = np.full(features.shape[0], model.initial_score)
    for tree in model.trees:
        scores = scores + model.learning_rate * tree.predict(features)
    return scores


def feature_matrix(model, records, flags=None):
    """Encode claims, or check a ready matrix, against the model schema"""
    arity = model.schema.arity
    if isinstance(records, ClaimRecord):
        records = [records]
    if isinstance(records, np.ndarray):
        matrix = np.atleast_2d(np.asarray(records, dtype=float))
    elif records and isinstance(records[0], ClaimRecord):
        matrix = encode_claims(model.schema, records, flags)
    else:
        matrix = np.atleast_2d(np.asarray(records, dtype=float))
    if matrix.size == 0:
        return np.empty((0, arity))
    if matrix.shape[1] != arity:
        raise EncodingError(
            f'Expected {arity} feature(s) per row, got {matrix.shape[1]}')
    return matrix


def predict_proba(model, records, flags=None):
    """Fraud probability for one claim or vector, or an array for many"""
    single = isinstance(records, ClaimRecord) or (
        isinstance(records, np.ndarray) and records.ndim == 1)
    matrix = feature_matrix(model, records, flags)
    probabilities = np.clip(
        sigmoid(raw_scores(model, matrix)),
        PROBABILITY_CLIP, 1 - PROBABILITY_CLIP)
    return float(probabilities[0]) if single else probabilities
