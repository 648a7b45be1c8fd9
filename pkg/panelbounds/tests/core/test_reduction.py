import numpy as np

from panelbounds.core.reduction import identity_partition, outcome_classes,\
    reduce_by_sufficient_statistic
from panelbounds.lib.exceptions import UnsupportedReductionError
from panelbounds.models.model_spec import ModelSpec
from panelbounds.tests.test_base import TestBase


class TestReduction(TestBase):

    def test_constant_covariate_groups_by_count(self):
        classes = reduce_by_sufficient_statistic(self._static_model(T=2),
                                                 self._z([1.0, 1.0]))

        self.assertEqual(classes, [[0], [1, 2], [3]])

    def test_varying_covariate_keeps_patterns_apart(self):
        classes = reduce_by_sufficient_statistic(self._static_model(T=2),
                                                 self._z([0.0, 1.0]))

        self.assertEqual(sorted(classes), [[0], [1], [2], [3]])

    def test_classes_partition_outcomes(self):
        model = self._static_model(T=4)
        classes = reduce_by_sufficient_statistic(
            model, self._z([0.0, 1.0, 1.0, 0.0]))

        self.assertEqual(sorted(i for c in classes for i in c),
                         list(range(16)))
        self.assertEqual(len(classes), 9)

    def test_kernel_constant_within_class(self):
        model = self._static_model(T=3)
        z = self._z([0.0, 1.0, 1.0])
        probs = model.prob_matrix(z, np.linspace(-3, 3, 7), [0.7])

        for members in reduce_by_sufficient_statistic(model, z):
            self.assertArrayAlmostEqual(
                probs[:, members] - probs[:, members[:1]],
                np.zeros((7, len(members))), 14)

    def test_unsupported(self):
        probit = ModelSpec.create('static_binary', 2, 1, 'probit')
        dynamic = ModelSpec.create('dynamic_binary', 2, 1)
        rc = ModelSpec.create('random_coef_static', 2, 1)
        rc_dynamic = ModelSpec.create('random_coef_dynamic', 2, 0)

        self.assertRaises(UnsupportedReductionError,
                          reduce_by_sufficient_statistic, probit,
                          self._z([0, 1]))
        self.assertRaises(UnsupportedReductionError,
                          reduce_by_sufficient_statistic, dynamic,
                          self._z([0, 1], y0=0), [[0.5, 1.0]])
        self.assertRaises(UnsupportedReductionError,
                          reduce_by_sufficient_statistic, rc,
                          self._z([0.0, 0.5]))
        self.assertRaises(UnsupportedReductionError,
                          reduce_by_sufficient_statistic, rc_dynamic,
                          self._z(np.zeros((2, 0)), y0=1))

    def test_dynamic_without_lag(self):
        dynamic = ModelSpec.create('dynamic_binary', 2, 1)
        classes = reduce_by_sufficient_statistic(
            dynamic, self._z([1, 1], y0=0), [[0.0, 1.0]])

        self.assertEqual(classes, [[0], [1, 2], [3]])

    def test_outcome_classes_fallback(self):
        probit = ModelSpec.create('static_binary', 3, 1, 'probit')
        classes, reduced = outcome_classes(probit, self._z([1, 1, 1]), [[1.0]])

        self.assertFalse(reduced)
        self.assertEqual(classes, identity_partition(3))

        classes, reduced = outcome_classes(self._static_model(T=3),
                                           self._z([1, 1, 1]), [[1.0]],
                                           reduce=False)
        self.assertFalse(reduced)
        self.assertEqual(len(classes), 8)
