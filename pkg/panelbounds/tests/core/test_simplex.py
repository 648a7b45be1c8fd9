import itertools

import numpy as np

from panelbounds.core.simplex import LinearProgram, LpStatus,\
    enumerate_vertices_oracle, solve_lp, write_lp_file
from panelbounds.lib.exceptions import ArgumentError
from panelbounds.tests.test_base import TestBase


class TestSimplex(TestBase):

    def setUp(self):
        TestBase.setUp(self)
        # optimum at the intersection (1.6, 1.2) with value -2.8
        self.lp = LinearProgram([-1.0, -1.0], [[1.0, 2.0], [3.0, 1.0]],
                                [4.0, 6.0], var_bounds=[(0, np.inf)] * 2)

    def _random_programs(self, count=20, n=3, m=4):
        generator = np.random.default_rng(2024)

        for _ in range(count):
            yield LinearProgram(generator.normal(size=n),
                                generator.normal(size=(m, n)),
                                np.abs(generator.normal(size=m)) + 0.1,
                                var_bounds=[(-1.0, 1.0)] * n)

    def _integer_programs(self, count=500):
        """Small integer programs; the origin is always feasible."""
        generator = np.random.default_rng(6)

        for _ in range(count):
            n = int(generator.integers(1, 7))
            m = int(generator.integers(1, min(10, 12 - n) + 1))
            box = int(generator.integers(1, 5))

            yield LinearProgram(generator.integers(-5, 6, size=n),
                                generator.integers(-5, 6, size=(m, n)),
                                generator.integers(0, 11, size=m),
                                var_bounds=[(-box, box)] * n)

    def test_optimum(self):
        solution = solve_lp(self.lp)

        self.assertEqual(solution.status, LpStatus.OPTIMAL)
        self.assertAlmostEqual(solution.objective, -2.8, 9)
        self.assertArrayAlmostEqual(solution.v, [1.6, 1.2], 9)
        self.assertTrue(solution.max_primal_residual <= 1e-9)

    def test_dual_certificate(self):
        solution = solve_lp(self.lp)
        G, h = self.lp.inequality_form()

        self.assertTrue(np.all(solution.dual >= 0))
        self.assertArrayAlmostEqual(G.T.dot(solution.dual), -self.lp.c, 8)
        self.assertAlmostEqual(-h.dot(solution.dual), solution.objective, 8)

    def test_equality_and_free_variables(self):
        equality = LinearProgram([1.0, 2.0], A_eq=[[1.0, 1.0]], b_eq=[1.0],
                                 var_bounds=[(0, np.inf)] * 2)
        # min s with s >= |v - 3| and v in [0, 1]
        free = LinearProgram([0.0, 1.0], [[1.0, -1.0], [-1.0, -1.0]],
                             [3.0, -3.0],
                             var_bounds=[(0.0, 1.0), (-np.inf, np.inf)])

        self.assertAlmostEqual(solve_lp(equality).objective, 1.0, 9)
        self.assertAlmostEqual(solve_lp(free).objective, 2.0, 9)
        self.assertArrayAlmostEqual(solve_lp(free).v, [1.0, 2.0], 9)

    def test_infeasible(self):
        lp = LinearProgram([1.0, 1.0], [[1.0, 1.0]], [-1.0],
                           var_bounds=[(0, np.inf)] * 2)

        for method in ('simplex', 'highs'):
            solution = solve_lp(lp, method=method)

            self.assertEqual(solution.status, LpStatus.INFEASIBLE)
            self.assertFalse(solution.is_optimal)

        self.assertEqual(enumerate_vertices_oracle(lp).status,
                         LpStatus.INFEASIBLE)

    def test_unbounded(self):
        lp = LinearProgram([-1.0, -1.0], [[1.0, -1.0]], [1.0],
                           var_bounds=[(0, np.inf)] * 2)

        self.assertEqual(solve_lp(lp).status, LpStatus.UNBOUNDED)

    def test_matches_oracle_and_highs(self):
        for lp in self._random_programs():
            expected = enumerate_vertices_oracle(lp)
            solution = solve_lp(lp)

            self.assertEqual(expected.status, LpStatus.OPTIMAL)
            self.assertAlmostEqual(solution.objective, expected.objective, 7)
            self.assertAlmostEqual(solve_lp(lp, method='highs').objective,
                                   expected.objective, 7)

    def test_integer_programs_match_oracle(self):
        for lp in self._integer_programs():
            expected = enumerate_vertices_oracle(lp)
            solution = solve_lp(lp)

            self.assertEqual(solution.status, expected.status)
            self.assertTrue(abs(solution.objective - expected.objective) <=
                            1e-7)

    def test_scaled_costs_keep_solution(self):
        for lp in itertools.islice(self._integer_programs(), 100):
            solution = solve_lp(lp)
            scaled = solve_lp(lp.scaled(8.0))

            self.assertEqual(scaled.status, solution.status)
            self.assertArrayAlmostEqual(scaled.v, solution.v, 9)
            self.assertAlmostEqual(scaled.objective, 8.0 * solution.objective,
                                   7)

    def test_bland_fallback_terminates(self):
        # Beale's cycling example in inequality form
        beale = LinearProgram([-0.75, 20.0, -0.5, 6.0],
                              [[0.25, -8.0, -1.0, 9.0],
                               [0.5, -12.0, -0.5, 3.0],
                               [0.0, 0.0, 1.0, 0.0]],
                              [0.0, 0.0, 1.0],
                              var_bounds=[(0, np.inf)] * 4)
        angles = np.linspace(0.0, np.pi / 2, 60)
        A = np.column_stack([np.cos(angles), np.sin(angles)])
        tall = LinearProgram([-1.0, -1.0], A, A.sum(axis=1) * 0.5,
                             var_bounds=[(0, 10)] * 2)

        for lp in (beale, tall):
            expected = solve_lp(lp, method='highs')

            for stall_count in (1, 2):
                solution = solve_lp(lp, stall_count=stall_count)

                self.assertEqual(solution.status, LpStatus.OPTIMAL)
                self.assertAlmostEqual(solution.objective,
                                       expected.objective, 8)

        self.assertAlmostEqual(solve_lp(beale, stall_count=1).objective,
                               enumerate_vertices_oracle(beale).objective, 8)
        self.assertAlmostEqual(solve_lp(beale, stall_count=1).objective,
                               -1.25, 8)

    def test_tall_program_uses_dual_route(self):
        # many rows through one vertex: degenerate
        angles = np.linspace(0.0, np.pi / 2, 60)
        A = np.column_stack([np.cos(angles), np.sin(angles)])
        lp = LinearProgram([-1.0, -1.0], A, A.sum(axis=1) * 0.5,
                           var_bounds=[(0, 10)] * 2)
        first = solve_lp(lp)
        second = solve_lp(lp)

        self.assertAlmostEqual(first.objective, -1.0, 8)
        np.testing.assert_array_equal(first.v, second.v)
        self.assertAlmostEqual(
            first.objective, solve_lp(lp, method='highs').objective, 8)

    def test_oracle_size_limit(self):
        lp = LinearProgram(np.ones(10), np.ones((8, 10)), np.ones(8))

        self.assertRaises(ArgumentError, enumerate_vertices_oracle, lp)

    def test_invalid_programs(self):
        self.assertRaises(ArgumentError, LinearProgram, [1.0, np.nan])
        self.assertRaises(ArgumentError, LinearProgram, [1.0], [[1.0]],
                          [1.0, 2.0])
        self.assertRaises(ArgumentError, LinearProgram, [1.0],
                          var_bounds=[(1.0, 0.0)])
        self.assertRaises(ArgumentError, solve_lp, self.lp, method='barrier')

    def test_write_lp_file(self):
        path = self.tmp_path('program.lp')
        named = LinearProgram([-1.0, -1.0], [[1.0, 2.0]], [4.0],
                              A_eq=[[1.0, -1.0]], b_eq=[0.0],
                              var_bounds=[(0, 1), (-np.inf, np.inf)],
                              names=['ell_0', 's'])
        write_lp_file(named, path)

        with open(path) as f:
            content = f.read()

        for section in ('Minimize', 'Subject To', 'Bounds', 'End'):
            self.assertIn(section, content)

        self.assertIn(' obj: - 1.0 ell_0 - 1.0 s', content)
        self.assertIn(' ub_0: 1.0 ell_0 + 2.0 s <= 4.0', content)
        self.assertIn(' eq_0: 1.0 ell_0 - 1.0 s = 0.0', content)
        self.assertIn(' s free', content)
