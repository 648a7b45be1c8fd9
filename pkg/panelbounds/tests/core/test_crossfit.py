import numpy as np

from panelbounds.core.crossfit import beta_box, confidence_box,\
    estimate_bounds_crossfit, estimate_bounds_crossfit_set,\
    estimate_bounds_known_beta, fit_halves, split_half
from panelbounds.lib.exceptions import ArgumentError, EstimationError
from panelbounds.models.model_spec import ModelSpec
from panelbounds.models.panel import PanelDataset
from panelbounds.models.results import BetaEstimate
from panelbounds.tests.test_base import TestBase


class TestCrossFit(TestBase):

    def setUp(self):
        TestBase.setUp(self)
        self.model = self._static_model(T=3)
        self.panel = self._random_panel(n=120, T=3)
        self.effect = self._shift()
        self.grid = self._grid(count=21)

    def test_split_half(self):
        first, second = split_half(5)

        np.testing.assert_array_equal(first, [0, 1])
        np.testing.assert_array_equal(second, [2, 3, 4])
        self.assertRaises(ArgumentError, split_half, 1)

    def test_shuffled_split(self):
        first, second = split_half(10, shuffle_seed=3)
        again = split_half(10, shuffle_seed=3)

        self.assertEqual(sorted(np.concatenate([first, second])),
                         list(range(10)))
        self.assertEqual(len(first), 5)
        np.testing.assert_array_equal(first, again[0])
        self.assertTrue(np.all(np.diff(first) > 0))

    def test_known_beta(self):
        estimate = estimate_bounds_known_beta(self.panel, self.model,
                                              self.effect, [1.0], self.grid)

        self.assertEqual(estimate.method, 'known_beta')
        self.assertEqual(estimate.n, 120)
        self.assertTrue(estimate.L_hat <= estimate.U_hat)
        self.assertAlmostEqual(estimate.L_hat, estimate.lower.mean(), 12)
        self.assertTrue(len(estimate.functions) <= 8)
        self.assertEqual(estimate.to_record()['distinct_programs'],
                         len(estimate.functions))

    def test_collapses_to_known_beta(self):
        known = estimate_bounds_known_beta(self.panel, self.model,
                                           self.effect, [1.0], self.grid)
        crossed = estimate_bounds_crossfit(self.panel, self.model,
                                           self.effect, self.grid,
                                           beta_hats=[[1.0], [1.0]])

        np.testing.assert_array_equal(crossed.lower, known.lower)
        np.testing.assert_array_equal(crossed.upper, known.upper)
        self.assertEqual(crossed.method, 'cross_fit')

    def test_half_records(self):
        estimate = estimate_bounds_crossfit(self.panel, self.model,
                                            self.effect, self.grid,
                                            beta_hats=[[0.8], [1.2]])
        first, second = estimate.halves

        # units of half 1 use the estimate from half 2
        self.assertEqual(first['anchor_betas'], [[1.2]])
        self.assertEqual(second['anchor_betas'], [[0.8]])
        self.assertAlmostEqual(
            (first['L_hat'] * first['n'] + second['L_hat'] * second['n']) /
            120.0, estimate.L_hat, 12)

    def test_estimated_halves(self):
        estimate = estimate_bounds_crossfit(self.panel, self.model,
                                            self.effect, self.grid)

        self.assertEqual(len(estimate.fits), 2)
        self.assertTrue(all(fit.n_used > 0 for fit in estimate.fits))

    def test_half_failure_names_half(self):
        y = [[0, 0]] * 4 + [[0, 1], [1, 0], [0, 1], [0, 1]]
        panel = PanelDataset(y, np.tile([0.0, 1.0], (8, 1)))
        model = self._static_model(T=2)

        with self.assertRaises(EstimationError) as context:
            fit_halves(panel, model, split_half(8))

        self.assertEqual(context.exception.half, 1)

    def test_confidence_box(self):
        fit = BetaEstimate([1.0], [[0.01]], 100, True)
        box = confidence_box(fit, 0.05)

        self.assertArrayAlmostEqual(box[:, 0], [0.775860, 1.224140], 6)
        self.assertEqual(confidence_box(BetaEstimate(
            [1.0, 2.0], np.eye(2), 100, True), 0.05).shape, (4, 2))
        self.assertRaises(EstimationError, confidence_box,
                          BetaEstimate.known([1.0]), 0.05)
        self.assertRaises(ArgumentError, confidence_box, fit, 1.5)

    def test_singleton_sets_match_cross_fit(self):
        crossed = estimate_bounds_crossfit(self.panel, self.model,
                                           self.effect, self.grid,
                                           beta_hats=[[0.8], [1.2]])
        constrained = estimate_bounds_crossfit_set(
            self.panel, self.model, self.effect, 0.05, self.grid,
            beta_sets=[[[0.8]], [[1.2]]])

        np.testing.assert_array_equal(constrained.lower, crossed.lower)
        np.testing.assert_array_equal(constrained.upper, crossed.upper)
        self.assertEqual(constrained.method, 'cross_fit_set')
        self.assertEqual(constrained.halves[0]['set_diameter'], [0.0])

    def test_set_diameter(self):
        fits = [BetaEstimate([0.9], [[0.01]], 60, True),
                BetaEstimate([1.1], [[0.01]], 60, True)]
        constrained = estimate_bounds_crossfit_set(
            self.panel, self.model, self.effect, 0.05, self.grid,
            beta_hats=fits)

        self.assertEqual(constrained.fits, fits)
        self.assertAlmostEqual(constrained.halves[0]['set_diameter'][0],
                               2 * 0.1 * 2.241403, 5)

    def test_checks(self):
        self.assertRaises(ArgumentError, estimate_bounds_known_beta,
                          self.panel, self._static_model(T=2), self.effect,
                          [1.0])
        self.assertRaises(ArgumentError, estimate_bounds_crossfit_set,
                          self.panel, self.model, self.effect, 0.05,
                          self.grid, beta_sets=[[[1.0]]])
        dynamic = ModelSpec.create('dynamic_binary', 3, 1)
        self.assertRaises(ArgumentError, estimate_bounds_known_beta,
                          self.panel, dynamic, self.effect, [0.5, 1.0])

    def test_beta_box(self):
        lo, hi = beta_box([[0.5, 2.0], [1.0, -1.0]])

        np.testing.assert_array_equal(lo, [0.5, -1.0])
        np.testing.assert_array_equal(hi, [1.0, 2.0])

    def test_order_within_halves_is_irrelevant(self):
        generator = np.random.default_rng(5)
        order = np.concatenate([generator.permutation(60),
                                60 + generator.permutation(60)])
        shuffled = self.panel.subset(order)
        kwargs = dict(beta_hats=[[0.8], [1.2]])
        crossed = estimate_bounds_crossfit(self.panel, self.model,
                                           self.effect, self.grid, **kwargs)
        again = estimate_bounds_crossfit(shuffled, self.model, self.effect,
                                         self.grid, **kwargs)

        self.assertAlmostEqual(again.L_hat, crossed.L_hat, 12)
        self.assertAlmostEqual(again.U_hat, crossed.U_hat, 12)
        np.testing.assert_array_equal(again.lower, crossed.lower[order])
        np.testing.assert_array_equal(again.upper, crossed.upper[order])

    def test_sigma_from_per_unit_values(self):
        known = estimate_bounds_known_beta(self.panel, self.model,
                                           self.effect, [1.0], self.grid)
        constrained = estimate_bounds_crossfit_set(
            self.panel, self.model, self.effect, 0.05, self.grid,
            beta_sets=[[[0.8], [1.0]], [[1.1], [1.3]]])

        for estimate in (known, constrained):
            lower, upper = estimate.per_unit.T

            self.assertAlmostEqual(estimate.sigma_L ** 2,
                                   np.mean((lower - lower.mean()) ** 2), 12)
            self.assertAlmostEqual(estimate.sigma_U ** 2,
                                   np.mean((upper - upper.mean()) ** 2), 12)

        for record, index in zip(constrained.halves, split_half(120)):
            lower = constrained.lower[index]

            self.assertEqual(record['n'], 60)
            self.assertAlmostEqual(record['sigma_L'] ** 2,
                                   np.mean((lower - lower.mean()) ** 2), 12)
