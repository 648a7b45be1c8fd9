import numpy as np

from panelbounds.lib.exceptions import ArgumentError
from panelbounds.models.grid import HeterogeneityGrid
from panelbounds.models.model_spec import ModelSpec
from panelbounds.tests.test_base import TestBase


class TestGrid(TestBase):

    def test_default_scalar_grid(self):
        grid = HeterogeneityGrid.default_for(self._static_model())

        self.assertEqual(grid.size, 100)
        self.assertEqual(grid.dim, 1)
        self.assertEqual(grid.points[0, 0], -5.0)
        self.assertEqual(grid.points[-1, 0], 5.0)
        self.assertEqual(grid.fine_points.shape[0], 1000)

    def test_default_random_coefficient_grid(self):
        model = ModelSpec.create('random_coef_static', 2, 1)
        grid = HeterogeneityGrid.default_for(model, fine_factor=None)

        self.assertEqual(grid.size, 2500)
        self.assertEqual(grid.dim, 2)
        self.assertArrayAlmostEqual(grid.points.min(axis=0), [-5.0, -7.0])
        self.assertArrayAlmostEqual(grid.points.max(axis=0), [5.0, 7.0])
        self.assertFalse(grid.has_fine)

    def test_fine_grid(self):
        grid = HeterogeneityGrid.equidistant(-1.0, 1.0, 5, fine_factor=4)
        fine = grid.fine()

        self.assertEqual(fine.size, 20)
        self.assertEqual(fine.description['level'], 'fine')
        self.assertRaises(ArgumentError, fine.fine)

    def test_record_round_trip(self):
        rectangular = HeterogeneityGrid.rectangular(
            [(-2, 2), (-3, 3)], [4, 5], fine_factor=10)
        explicit = HeterogeneityGrid([0.0, 0.5, 2.0], [0.0, 1.0])

        for grid in (rectangular, explicit):
            loaded = HeterogeneityGrid.from_record(grid.to_record())

            np.testing.assert_array_equal(loaded.points, grid.points)
            np.testing.assert_array_equal(loaded.fine_points,
                                          grid.fine_points)

    def test_with_points(self):
        grid = HeterogeneityGrid.equidistant(0.0, 1.0, 2)
        extended = grid.with_points([[0.5]])

        self.assertEqual(extended.size, 3)

    def test_invalid(self):
        self.assertRaises(ArgumentError, HeterogeneityGrid, np.zeros((0, 1)))
        self.assertRaises(ArgumentError, HeterogeneityGrid, [0.0, np.nan])
        self.assertRaises(ArgumentError, HeterogeneityGrid.rectangular,
                          [(0, 1)], [0])
        self.assertRaises(ArgumentError, HeterogeneityGrid,
                          np.zeros((3, 2)), np.zeros((3, 1)))
