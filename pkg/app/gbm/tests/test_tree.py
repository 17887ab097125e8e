import numpy as np
from django.test import SimpleTestCase

from gbm.tree import TreeNode, best_split, fit_tree, newton_leaf


class TreeTests(SimpleTestCase):

    def test_missing_values_go_left(self):
        """Test NaN and values at the threshold take the left branch"""
        tree = TreeNode(feature=0, threshold=1.0,
                        left=TreeNode(value=-1.0), right=TreeNode(value=1.0))

        out = tree.predict(np.array([[np.nan], [1.0], [2.0]]))

        self.assertEqual(list(out), [-1.0, -1.0, 1.0])

    def test_tie_goes_to_lowest_feature(self):
        """Test equal gains split on the first feature"""
        features = np.array([[1, 1], [2, 2], [3, 3], [4, 4]], dtype=float)

        split = best_split(features, np.array([-1.0, -1.0, 1.0, 1.0]), 1)

        self.assertEqual((split.feature, split.threshold), (0, 2.0))

    def test_min_leaf_respected(self):
        """Test no leaf holds fewer rows than min_leaf"""
        features = np.arange(10, dtype=float).reshape(10, 1)
        residual = np.zeros(10)
        residual[-1] = 1.0

        tree = fit_tree(features, residual, np.full(10, 0.25), 1, 3)

        self.assertEqual(tree.threshold, 6.0)
        self.assertEqual(tree.depth, 1)

    def test_no_gain_gives_leaf(self):
        """Test constant residuals are not split"""
        features = np.arange(6, dtype=float).reshape(6, 1)

        tree = fit_tree(features, np.full(6, 0.5), np.full(6, 0.25), 3, 1)

        self.assertTrue(tree.is_leaf)
        self.assertEqual(tree.value, 2.0)

    def test_newton_leaf_floor(self):
        """Test a zero hessian sum does not divide by zero"""
        self.assertEqual(newton_leaf(np.zeros(1), np.zeros(1)), 0.0)

    def test_scaled(self):
        """Test scaling multiplies every leaf and keeps the splits"""
        tree = TreeNode(feature=0, threshold=1.0,
                        left=TreeNode(value=-1.0), right=TreeNode(value=3.0))

        half = tree.scaled(0.5)

        self.assertEqual(half.threshold, 1.0)
        self.assertEqual((half.left.value, half.right.value), (-0.5, 1.5))
