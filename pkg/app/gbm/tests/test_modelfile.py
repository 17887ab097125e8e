import io
import json
import os
import tempfile

import numpy as np
from django.test import SimpleTestCase

from core.exceptions import ConfigError, DataError
from core.tests.samples import sample_labeled_claims
from gbm.boosting import Hyperparameters, fit_gbm, predict_proba
from gbm.dataset import build_dataset
from gbm.features import build_schema
from gbm.modelfile import load_model, parse_model, render_model, save_model


def sample_model():
    claims = sample_labeled_claims(count=80)
    schema = build_schema(claims)
    dataset = build_dataset(schema, claims)
    hyperparameters = Hyperparameters(n_trees=8, max_depth=2, min_leaf=5)
    return fit_gbm(dataset, hyperparameters, schema), claims


def parse_json(document):
    return parse_model(io.BytesIO(json.dumps(document).encode('utf-8')))


class ModelFileTests(SimpleTestCase):

    def setUp(self):
        self.model, self.claims = sample_model()

    def test_saved_model_predicts_identically(self):
        """Test a reloaded model gives bit-identical probabilities"""
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'model.json')
            save_model(self.model, path)
            loaded = load_model(path)

        self.assertEqual(loaded.schema, self.model.schema)
        self.assertEqual(loaded.trees, self.model.trees)
        self.assertTrue(np.array_equal(
            predict_proba(loaded, self.claims),
            predict_proba(self.model, self.claims)))

    def test_header(self):
        """Test the model file carries its format tag and version"""
        document = json.loads(render_model(self.model))

        self.assertEqual(document['format'], 'fraudscope.model')
        self.assertEqual(document['version'], 1)
        self.assertEqual(len(document['trees']), 8)

    def test_feature_outside_schema(self):
        """Test a tree splitting on an unknown feature is rejected"""
        document = json.loads(render_model(self.model))
        document['trees'][0] = {
            'feature': 999, 'threshold': 0.0,
            'left': {'value': 0.0}, 'right': {'value': 0.0},
        }

        with self.assertRaises(DataError):
            parse_json(document)

    def test_malformed_tree(self):
        """Test a tree node without a value or split is rejected"""
        document = json.loads(render_model(self.model))
        document['trees'][0] = {'feature': 0}

        with self.assertRaises(DataError):
            parse_json(document)

    def test_wrong_format(self):
        """Test a metrics report is not accepted as a model"""
        document = json.loads(render_model(self.model))
        document['format'] = 'fraudscope.metrics'

        with self.assertRaises(ConfigError):
            parse_json(document)
