import itertools

import numpy as np

from panelbounds.config.settings import BOUND_TOL
from panelbounds.core.bounds import BoundBuilder, as_beta_set,\
    build_bound_program, default_objective, solve_bound_function,\
    verify_bound_condition
from panelbounds.core.simplex import solve_lp
from panelbounds.lib.exceptions import ArgumentError
from panelbounds.models.bound_function import BoundFunction
from panelbounds.models.effect import Effect
from panelbounds.models.model_spec import ModelSpec
from panelbounds.tests.test_base import TestBase


class TestBounds(TestBase):

    def setUp(self):
        TestBase.setUp(self)
        self.model = self._static_model(T=2)
        self.effect = self._shift()
        self.z = self._z([0.0, 1.0])
        self.grid = self._grid(count=41, fine_factor=10)

    def test_bound_condition_holds(self):
        bf = solve_bound_function(self.model, self.effect, self.z, [1.0],
                                  self.grid)

        self.assertTrue(verify_bound_condition(
            bf, self.model, self.effect, self.z, [1.0], self.grid) <= 1e-8)
        self.assertTrue(np.all(bf.ell <= bf.u))
        self.assertTrue(np.all(bf.ell >= -1.0) and np.all(bf.u <= 1.0))
        self.assertEqual(bf.objective, BoundFunction.OBJECTIVE_UNIFORM)

    def test_refinement_holds_on_fine_grid(self):
        coarse = self._grid(count=6, fine_factor=50)
        bf = solve_bound_function(self.model, self.effect, self.z, [1.0],
                                  coarse, refine=True)

        self.assertTrue(bf.refined)
        self.assertTrue(verify_bound_condition(
            bf, self.model, self.effect, self.z, [1.0], coarse.fine()) <=
            1e-12)

    def test_refinement_on_every_pattern(self):
        coarse = self._grid(count=11, fine_factor=10)

        for x in itertools.product((0.0, 1.0), repeat=2):
            z = self._z(x)

            for objective in BoundFunction.OBJECTIVES:
                bf = solve_bound_function(self.model, self.effect, z, [1.0],
                                          coarse, objective, refine=True)
                violation = verify_bound_condition(
                    bf, self.model, self.effect, z, [1.0], coarse.fine())

                # clamping at the effect range is only checked to BOUND_TOL
                self.assertTrue(violation <= (BOUND_TOL if bf.capped else
                                              1e-12))

    def test_reduction_keeps_objective(self):
        z = self._z([1.0, 1.0, 0.0])
        model = self._static_model(T=3)
        reduced = solve_bound_function(model, self.effect, z, [1.0],
                                       self.grid)
        full = solve_bound_function(model, self.effect, z, [1.0], self.grid,
                                    reduce=False)

        self.assertEqual(reduced.n_classes, 6)
        self.assertEqual(full.n_classes, 8)
        self.assertAlmostEqual(reduced.objective_value,
                               full.objective_value, 7)

    def test_reduction_keeps_baseline_optimum(self):
        generator = np.random.default_rng(11)
        grid = self._grid(count=21)

        for _ in range(20):
            T = int(generator.integers(2, 4))
            model = self._static_model(T=T)
            z = self._z(generator.integers(0, 2, size=T).astype(float))
            beta = [float(generator.uniform(-2.0, 2.0))]
            reduced = solve_bound_function(model, self.effect, z, beta, grid,
                                           BoundFunction.OBJECTIVE_BASELINE)
            full = solve_bound_function(model, self.effect, z, beta, grid,
                                        BoundFunction.OBJECTIVE_BASELINE,
                                        reduce=False)

            self.assertEqual(full.n_classes, 2 ** T)
            self.assertTrue(reduced.n_classes <= full.n_classes)
            self.assertTrue(abs(reduced.objective_value -
                                full.objective_value) <= 1e-7)

    def test_constant_pair_is_feasible(self):
        b_min, b_max = self.effect.b_min, self.effect.b_max

        for objective in BoundFunction.OBJECTIVES:
            for betas in ([1.0], [[0.5], [1.5]], [-2.0]):
                program = build_bound_program(self.model, self.effect, self.z,
                                              betas, self.grid, objective)
                C = program.n_classes
                v = np.concatenate([np.full(C, b_min), np.full(C, b_max)])

                if program.s_index is not None:
                    v = np.append(v, b_max - b_min)

                self.assertTrue(program.lp.max_residual(v) <= 1e-12)
                self.assertTrue(solve_lp(program.lp).is_optimal)

    def test_baseline_optimum_grows_with_grid(self):
        z = self._z([1.0, 1.0])
        coarse = self._grid(count=11)
        # every coarse point is also a point of the dense grid
        dense = self._grid(count=41)
        values = [solve_bound_function(
            self.model, self.effect, z, [1.0], grid,
            BoundFunction.OBJECTIVE_BASELINE).objective_value
            for grid in (coarse, dense)]

        self.assertTrue(values[0] <= values[1] + 1e-9)

    def test_anchor_set_widens_bounds(self):
        z = self._z([1.0, 1.0])

        for objective in BoundFunction.OBJECTIVES:
            single = solve_bound_function(self.model, self.effect, z, [1.0],
                                          self.grid, objective)
            # the set is centered on 1.0, so both programs share an objective
            anchored = solve_bound_function(self.model, self.effect, z,
                                            [[0.5], [1.0], [1.5]], self.grid,
                                            objective)

            self.assertTrue(single.objective_value <=
                            anchored.objective_value + 1e-9)

    def test_uniform_optimum_is_widest_expected_width(self):
        for x in ([0.0, 1.0], [1.0, 1.0]):
            z = self._z(x)
            bf = solve_bound_function(self.model, self.effect, z, [1.0],
                                      self.grid)
            probs = self.model.prob_matrix(z, self.grid.points,
                                           np.array([1.0]))
            widths = probs.dot(bf.u_by_pattern - bf.ell_by_pattern)

            self.assertAlmostEqual(widths.max(), bf.objective_value, 9)

    def test_simplex_matches_highs(self):
        for objective in BoundFunction.OBJECTIVES:
            simplex = solve_bound_function(self.model, self.effect, self.z,
                                           [1.0], self.grid, objective)
            highs = solve_bound_function(self.model, self.effect, self.z,
                                         [1.0], self.grid, objective,
                                         method='highs')

            self.assertAlmostEqual(simplex.objective_value,
                                   highs.objective_value, 7)

    def test_zero_beta_collapses(self):
        bf = solve_bound_function(self.model, self.effect, self.z, [0.0],
                                  self.grid)

        self.assertTrue(np.max(bf.u - bf.ell) <= 1e-6)

    def test_set_of_betas(self):
        betas = [[0.5], [1.5]]
        bf = solve_bound_function(self.model, self.effect, self.z, betas,
                                  self.grid)
        self.assertEqual(bf.betas.shape, (2, 1))

        for beta in betas:
            self.assertTrue(verify_bound_condition(
                bf, self.model, self.effect, self.z, beta, self.grid) <= 1e-8)

    def test_program_layout(self):
        uniform = build_bound_program(self.model, self.effect, self.z, [1.0],
                                      self.grid)
        baseline = build_bound_program(self.model, self.effect, self.z,
                                       [[0.5], [1.0]], self.grid, 'baseline')

        self.assertEqual(uniform.lp.n_vars, 9)
        self.assertEqual(uniform.s_index, 8)
        self.assertEqual(uniform.lp.names[-1], 's')
        self.assertEqual(baseline.lp.n_vars, 8)
        self.assertIsNone(baseline.s_index)
        # C ordering rows + two rows per grid point and beta
        self.assertEqual(baseline.lp.n_ub, 4 + 2 * 2 * 41)
        self.assertEqual(uniform.lp.n_ub, 4 + 2 * 41 + 41)

    def test_program_checks(self):
        self.assertRaises(ArgumentError, build_bound_program, self.model,
                          Effect.create('discrete_shift'), self.z, [1.0],
                          self.grid)
        self.assertRaises(ArgumentError, build_bound_program, self.model,
                          self.effect, self.z, [1.0], self.grid, 'widest')
        self.assertRaises(ArgumentError, build_bound_program, self.model,
                          self.effect, self.z, [2.0], self.grid,
                          beta_box=([0.0], [1.0]))
        self.assertRaises(ArgumentError, build_bound_program, self.model,
                          self.effect, self.z, [1.0], self.grid, 'baseline',
                          prior=np.ones(3))
        self.assertRaises(ArgumentError, as_beta_set, self.model, None)

    def test_random_coefficient_beta_set(self):
        model = ModelSpec.create('random_coef_static', 2, 1)

        self.assertEqual(as_beta_set(model, None).shape, (1, 0))
        self.assertEqual(default_objective(model), 'uniform')
        self.assertEqual(default_objective(
            ModelSpec.create('random_coef_dynamic', 2, 0)), 'baseline')

    def test_builder_cache(self):
        builder = BoundBuilder(self.model, self.effect, self.grid)
        first = builder.get(self.z, [1.0])
        again = builder.get(self._z([0.0, 1.0 + 1e-14]), [1.0])

        self.assertIs(first, again)
        self.assertEqual(builder.cache_size, 1)

        builder.get(self.z, [1.5])
        self.assertEqual(builder.cache_size, 2)

    def test_build_many_keeps_order(self):
        builder = BoundBuilder(self.model, self.effect, self.grid)
        z_values = [self._z([0.0, 1.0]), self._z([1.0, 1.0]),
                    self._z([0.0, 1.0])]
        functions = builder.build_many([(z, [1.0], i)
                                        for i, z in enumerate(z_values)])

        self.assertEqual(builder.cache_size, 2)
        self.assertIs(functions[0], functions[2])
        np.testing.assert_array_equal(functions[1].z.x, z_values[1].x)

    def test_evaluate_panel(self):
        panel = self.get_panel()
        builder = BoundBuilder(self.model, self.effect, self.grid)
        lower, upper, functions = builder.evaluate_panel(panel,
                                                         lambda i: [1.0])

        self.assertEqual(len(functions), 4)
        self.assertEqual(lower.shape, (8,))
        self.assertTrue(np.all(lower <= upper))

        bf = functions[0]
        self.assertEqual(lower[0], bf.lower(panel.y[0]))
        self.assertEqual(upper[3], bf.upper(panel.y[3]))
