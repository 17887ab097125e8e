"""Model files: the schema, hyperparameters and trees of a boosted model.

Floats are written at full precision so a loaded model predicts bit for
bit what the saved one did.
"""
import logging

from rest_framework import serializers

from core.exceptions import DataError
from core.reports import parse_document, render_document
from gbm.boosting import BoostedModel, Hyperparameters
from gbm.features import Feature, FeatureKind, FeatureSchema
from gbm.tree import TreeNode


logger = logging.getLogger(__name__)

MODEL_VERSION = 1


class TreeField(serializers.Field):
    """A tree as nested objects: {"value"} leaves, split nodes otherwise"""

    def to_representation(self, node):
        if node.is_leaf:
            return {'value': node.value}
        return {
            'feature': node.feature,
            'threshold': node.threshold,
            'left': self.to_representation(node.left),
            'right': self.to_representation(node.right),
        }

    def to_internal_value(self, data):
        if not isinstance(data, dict):
            raise serializers.ValidationError('Tree node must be an object')
        try:
            if 'value' in data:
                return TreeNode(value=float(data['value']))
            return TreeNode(
                feature=int(data['feature']),
                threshold=float(data['threshold']),
                left=self.to_internal_value(data['left']),
                right=self.to_internal_value(data['right']),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise serializers.ValidationError(
                f'Malformed tree node: {exc}')


class FeatureSerializer(serializers.Serializer):
    name = serializers.CharField()
    kind = serializers.ChoiceField(choices=FeatureKind.choices)
    source = serializers.CharField()
    end = serializers.CharField(allow_null=True, required=False)
    category = serializers.CharField(
        allow_null=True, allow_blank=True, required=False)
    frequencies = serializers.DictField(
        child=serializers.FloatField(), required=False)


class HyperparametersSerializer(serializers.Serializer):
    n_trees = serializers.IntegerField(min_value=0)
    max_depth = serializers.IntegerField(min_value=0)
    learning_rate = serializers.FloatField()
    min_leaf = serializers.IntegerField(min_value=1)


class BoostedModelSerializer(serializers.Serializer):
    features = FeatureSerializer(many=True, source='schema.features')
    hyperparameters = HyperparametersSerializer()
    initial_score = serializers.FloatField()
    learning_rate = serializers.FloatField()
    trees = serializers.ListField(child=TreeField())
    stage_losses = serializers.ListField(child=serializers.FloatField())


def render_model(model):
    return render_document(
        'model', MODEL_VERSION, BoostedModelSerializer(model).data)


def parse_model(stream):
    """Read and check a model file; raises DataError if it is malformed"""
    document = parse_document(stream, 'model', MODEL_VERSION)
    serializer = BoostedModelSerializer(data=document)
    if not serializer.is_valid():
        raise DataError(f'Malformed model file: {serializer.errors}')
    data = serializer.validated_data

    schema = FeatureSchema(tuple(
        Feature(
            name=feature['name'],
            kind=FeatureKind(feature['kind']),
            source=feature['source'],
            end=feature.get('end'),
            category=feature.get('category'),
            frequencies=dict(feature.get('frequencies', {})),
        )
        for feature in data['schema']['features']
    ))
    model = BoostedModel(
        schema=schema,
        hyperparameters=Hyperparameters(**data['hyperparameters']),
        initial_score=data['initial_score'],
        learning_rate=data['learning_rate'],
        trees=list(data['trees']),
        stage_losses=list(data['stage_losses']),
    )
    max_depth = model.hyperparameters.max_depth
    for index, tree in enumerate(model.trees):
        if any(feature >= schema.arity for feature in tree.features()):
            raise DataError(
                f'Tree {index} splits on a feature outside the schema')
        if tree.depth > max_depth:
            raise DataError(
                f'Tree {index} is deeper than max_depth {max_depth}')
    return model


def save_model(model, path):
    with open(path, 'wb') as handle:
        handle.write(render_model(model))
    logger.info('Saved model with %d tree(s) to %s', len(model.trees), path)


def load_model(path):
    with open(path, 'rb') as handle:
        return parse_model(handle)
