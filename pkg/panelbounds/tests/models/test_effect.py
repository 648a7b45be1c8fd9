import numpy as np

from panelbounds.lib.exceptions import ArgumentError
from panelbounds.models.effect import Effect, default_effect_range, effect_m
from panelbounds.models.model_spec import ModelSpec
from panelbounds.tests.test_base import TestBase


class TestEffect(TestBase):

    def test_discrete_shift(self):
        model = self._static_model(T=1)
        effect = self._shift()

        self.assertAlmostEqual(effect_m(effect, model, self._z([0.0]), [0.0],
                                        [1.0]), 0.231059, 6)

    def test_discrete_shift_matches_choice_probs(self):
        model = self._static_model(T=1)
        effect = self._shift()

        for a in (-2.0, 0.3, 1.7):
            difference = model.choice_prob([1], self._z([1.0]), [a], [0.8]) -\
                model.choice_prob([1], self._z([0.0]), [a], [0.8])

            self.assertAlmostEqual(effect_m(effect, model, self._z([0.4]),
                                            [a], [0.8]), difference, 12)

    def test_relative_shift(self):
        model = self._static_model(T=2)
        effect = Effect.create('discrete_shift', k=1, x1=1.0, x2=0.0,
                               relative=True)
        z = self._z([0.5, -0.5])
        value = effect.value(model, z, [0.0], [1.0])
        expected = np.mean(1 / (1 + np.exp(-np.array([1.5, 0.5])))) -\
            np.mean(1 / (1 + np.exp(-np.array([0.5, -0.5]))))

        self.assertAlmostEqual(value, expected, 12)

    def test_derivative(self):
        model = self._static_model(T=1)
        effect = Effect.create('derivative', k=1)

        self.assertAlmostEqual(effect.value(model, self._z([0.0]), [0.0],
                                            [1.0]), 0.25, 12)

        fixed = Effect.create('derivative', k=1, rule='fixed', point=0.0)
        self.assertAlmostEqual(fixed.value(model, self._z([3.0]), [0.0],
                                           [1.0]), 0.25, 12)

    def test_derivative_default_range(self):
        probit = ModelSpec.create('static_binary', 2, 1, 'probit')
        effect = Effect.create('derivative', k=1)
        b_min, b_max = default_effect_range(effect, probit,
                                            ([-1.0], [1.0]))

        self.assertAlmostEqual(b_min, -0.398942, 6)
        self.assertAlmostEqual(b_max, 0.398942, 6)
        self.assertRaises(ArgumentError, effect.resolve, probit)
        self.assertRaises(ArgumentError, effect.resolve, probit,
                          ([-np.inf], [1.0]))

    def test_resolve_default(self):
        effect = Effect.create('discrete_shift', k=1)
        resolved = effect.resolve(self._static_model())

        self.assertEqual((resolved.b_min, resolved.b_max), (-1.0, 1.0))
        self.assertEqual(resolved.range_source, 'default')

    def test_values_within_range(self):
        model = self._static_model(T=3)
        points = np.linspace(-10, 10, 41)
        values = self._shift().values(model, self._z([0.0, 1.0, 2.0]),
                                      points, [2.0])

        self.assertEqual(values.shape, (41,))
        self.assertTrue(np.all((values >= -1) & (values <= 1)))

    def test_sample_values(self):
        model = self._static_model(T=2)
        x = np.array([[[0.0], [1.0]], [[1.0], [1.0]]])
        points = np.array([[0.0], [1.0]])
        values = self._shift().sample_values(model, x, points, [1.0])

        for i in range(2):
            self.assertAlmostEqual(values[i], self._shift().value(
                model, self._z(x[i, :, 0]), points[i], [1.0]), 12)

    def test_random_coefficient_shift(self):
        model = ModelSpec.create('random_coef_static', 1, 1)
        effect = Effect.create('random_coef_shift', k=1)
        value = effect.value(model, self._z([0.0]), [0.0, 1.0], [])

        self.assertAlmostEqual(value, 0.231059, 6)

    def test_transition(self):
        model = ModelSpec.create('dynamic_binary', 1, 1)
        effect = Effect.create('transition')
        value = effect.value(model, self._z([0.0], y0=0), [0.0], [1.0, 0.5])

        self.assertAlmostEqual(value, 0.231059, 6)

    def test_family_checks(self):
        effect = Effect.create('transition')

        self.assertRaises(ArgumentError, effect.resolve, self._static_model())
        self.assertRaises(ArgumentError, Effect.create, 'elasticity')
        self.assertRaises(ArgumentError, Effect.create, 'discrete_shift',
                          b_min=1.0, b_max=0.0)
        self.assertRaises(ArgumentError, Effect.create('discrete_shift',
                          k=2).value, self._static_model(), self._z([0, 1]),
                          [0.0], [1.0])

    def test_record_round_trip(self):
        effect = Effect.create('derivative', k=1, rule='average', b_min=-0.5,
                               b_max=0.5)
        loaded = Effect.from_record(effect.to_record())

        self.assertEqual(loaded.to_record(), effect.to_record())

    def test_sign_symmetry(self):
        z = self._z([0.0, 1.0, 1.0])

        for link in ('logit', 'probit'):
            model = ModelSpec.create('static_binary', 3, 1, link)
            effect = self._shift()

            for a, beta in ((0.3, 1.0), (-1.2, 0.4), (2.5, -1.7)):
                self.assertAlmostEqual(effect.value(model, z, [a], [beta]),
                                       -effect.value(model, z, [-a], [-beta]),
                                       12)

    def test_derivative_matches_central_difference(self):
        model = self._static_model(T=2)
        step = 1e-5
        # shifts x by +-step around its observed value
        shift = Effect.create('discrete_shift', k=1, x1=step, x2=-step,
                              relative=True)
        derivative = Effect.create('derivative', k=1)

        for x, a, beta in (([0.0, 1.0], 0.0, 1.0), ([0.5, -0.2], 1.3, -0.7),
                           ([2.0, 1.0], -0.4, 0.3)):
            z = self._z(x)
            numeric = shift.value(model, z, [a], [beta]) / (2 * step)

            self.assertTrue(abs(derivative.value(model, z, [a], [beta]) -
                                numeric) <= 1e-8)
