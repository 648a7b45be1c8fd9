import os
import shutil
import tempfile
import unittest

import numpy as np

from panelbounds.lib.io import load_panel_csv
from panelbounds.lib.parallel import set_async
from panelbounds.models.effect import Effect
from panelbounds.models.grid import HeterogeneityGrid
from panelbounds.models.model_spec import ConditioningValue, ModelSpec
from panelbounds.models.panel import PanelDataset


class TestBase(unittest.TestCase):

    FIXTURE_PATH = os.path.join(os.path.dirname(__file__), 'fixtures')
    PLACES = 6

    test_panels = {}

    def setUp(self):
        set_async(False)
        self.tmp_dir = tempfile.mkdtemp(prefix='panelbounds-test-')

    def tearDown(self):
        shutil.rmtree(self.tmp_dir, ignore_errors=True)

    def fixture_path(self, filename):
        return os.path.join(self.FIXTURE_PATH, filename)

    def tmp_path(self, filename):
        return os.path.join(self.tmp_dir, filename)

    def get_panel(self, filename='small_panel.csv'):
        panel = self.test_panels.get(filename)

        if panel is None:
            panel = self.test_panels[filename] = load_panel_csv(
                self.fixture_path(filename))

        return panel

    def _static_model(self, T=2, K=1):
        return ModelSpec.create('static_binary', T, K)

    def _shift(self, b_min=-1.0, b_max=1.0):
        return Effect.create('discrete_shift', k=1, x1=1.0, x2=0.0)\
            .with_range(b_min, b_max)

    def _grid(self, lo=-5.0, hi=5.0, count=41, fine_factor=None):
        return HeterogeneityGrid.equidistant(lo, hi, count, fine_factor)

    def _z(self, x, y0=None):
        return ConditioningValue(np.asarray(x, dtype=float), y0)

    def _random_panel(self, n=400, T=3, beta=1.0, seed=7):
        generator = np.random.default_rng(seed)
        x = generator.integers(0, 2, size=(n, T, 1)).astype(float)
        a = generator.normal(size=(n, 1))
        eps = generator.logistic(size=(n, T))
        y = (x[:, :, 0] * beta + a >= eps).astype(int)

        return PanelDataset(y, x)

    def assertArrayAlmostEqual(self, first, second, places=None):
        np.testing.assert_allclose(
            np.asarray(first, dtype=float), np.asarray(second, dtype=float),
            rtol=0, atol=10.0 ** -(places or self.PLACES))
