import itertools

import numpy as np

from panelbounds.core.estimation import _unit_terms, conditional_logit_mle,\
    informative_units
from panelbounds.lib.exceptions import ArgumentError, IdentificationError
from panelbounds.models.model_spec import ModelSpec
from panelbounds.models.panel import PanelDataset
from panelbounds.tests.decorators import run_monte_carlo
from panelbounds.tests.test_base import TestBase


class TestEstimation(TestBase):

    def _two_cell_panel(self):
        y = [[0, 1]] * 300 + [[1, 0]] * 100 + [[0, 0]] * 40 + [[1, 1]] * 60
        x = np.tile([0.0, 1.0], (len(y), 1))

        return PanelDataset(y, x)

    def test_closed_form_two_periods(self):
        estimate = conditional_logit_mle(self._two_cell_panel())

        self.assertAlmostEqual(estimate.beta[0], np.log(3.0), 9)
        self.assertEqual(estimate.n_used, 400)
        self.assertTrue(estimate.converged)
        # information: n01 + n10 units times Lambda(1 - Lambda)
        self.assertAlmostEqual(estimate.vcov[0, 0], 1 / (400 * 0.75 * 0.25),
                               9)

    def test_fixture_panel(self):
        estimate = conditional_logit_mle(self.get_panel())

        self.assertAlmostEqual(estimate.beta[0], np.log(3.0), 9)
        self.assertEqual(estimate.n_used, 4)

    def test_informative_units(self):
        panel = self.get_panel()

        np.testing.assert_array_equal(informative_units(panel), [0, 1, 2, 3])
        np.testing.assert_array_equal(informative_units(panel, [2, 6, 7]),
                                      [2])

    def test_likelihood_matches_enumeration(self):
        generator = np.random.default_rng(3)
        x = generator.normal(size=(5, 3, 2))
        y = np.array([[1, 0, 0], [1, 1, 0], [0, 1, 0], [0, 1, 1], [1, 0, 1]])
        beta = np.array([0.4, -0.8])
        loglik, score, hessian = _unit_terms(y, x, beta)

        for i in range(5):
            k = y[i].sum()
            total = sum(np.exp(np.dot(d, x[i].dot(beta)))
                        for d in itertools.product((0, 1), repeat=3)
                        if sum(d) == k)
            expected = y[i].dot(x[i].dot(beta)) - np.log(total)

            self.assertAlmostEqual(loglik[i], expected, 12)

        step = 1e-6
        for j in range(2):
            shift = np.zeros(2)
            shift[j] = step
            numeric = (_unit_terms(y, x, beta + shift)[0] -
                       _unit_terms(y, x, beta - shift)[0]) / (2 * step)
            self.assertArrayAlmostEqual(score[:, j], numeric, 6)

            numeric = (_unit_terms(y, x, beta + shift)[1] -
                       _unit_terms(y, x, beta - shift)[1]) / (2 * step)
            self.assertArrayAlmostEqual(hessian[:, :, j], numeric, 6)

    def test_sandwich(self):
        panel = self._random_panel(n=500, T=3)
        hessian = conditional_logit_mle(panel)
        sandwich = conditional_logit_mle(panel, vcov_type='sandwich')

        self.assertAlmostEqual(hessian.beta[0], sandwich.beta[0], 12)
        self.assertEqual(sandwich.vcov_type, 'sandwich')
        self.assertTrue(sandwich.vcov[0, 0] > 0)
        self.assertAlmostEqual(sandwich.se[0] / hessian.se[0], 1.0, 0)

    def test_no_informative_units(self):
        panel = PanelDataset([[0, 0], [1, 1]], [[0.0, 1.0], [1.0, 0.0]])

        self.assertRaises(IdentificationError, conditional_logit_mle, panel)

    def test_argument_checks(self):
        panel = self.get_panel()

        self.assertRaises(ArgumentError, conditional_logit_mle, panel,
                          model=ModelSpec.create('dynamic_binary', 2))
        self.assertRaises(ArgumentError, conditional_logit_mle, panel,
                          vcov_type='cluster')
        self.assertRaises(ArgumentError, conditional_logit_mle, panel, [])

    def test_iteration_limit_warns(self):
        estimate = conditional_logit_mle(self._random_panel(), max_iter=1)

        self.assertFalse(estimate.converged)
        self.assertEqual(len(estimate.warnings), 1)

    @run_monte_carlo
    def test_consistency(self):
        estimate = conditional_logit_mle(self._random_panel(n=4000, T=3,
                                                            beta=1.0))

        self.assertTrue(abs(estimate.beta[0] - 1.0) <= 3 * estimate.se[0])

    def test_vcov_from_per_unit_terms(self):
        panel = self._random_panel(n=300, T=3)
        used = informative_units(panel)

        for vcov_type in ('hessian', 'sandwich'):
            estimate = conditional_logit_mle(panel, vcov_type=vcov_type)
            _, score, hessian = _unit_terms(panel.y[used], panel.x[used],
                                            estimate.beta)
            bread = np.linalg.inv(-hessian.sum(axis=0))
            expected = bread if vcov_type == 'hessian' else\
                bread.dot(score.T.dot(score)).dot(bread)

            self.assertEqual(estimate.n_used, used.size)
            self.assertArrayAlmostEqual(estimate.vcov, expected, 12)
