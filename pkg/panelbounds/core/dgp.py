"""Seeded data-generating processes and the true-effect oracle.

Every design draws from named counter-based streams (see `lib.rng`), so the
panel of replication r depends only on ``seed + r``.

Designs:

- ``static_discrete``: A ~ N(0,1), X_t = 1{A >= eta_t}, eta_t ~ N(0,1).
- ``static_continuous``: A ~ N(0,1), X_t ~ N(A, 1).
- ``discrete_uniform``: x_t uniform on {0..S-1}, X_t = x_t / (S - 1),
  A ~ N(mean_t X_t - 1/2, 1).
- ``rc_static``: A1 ~ N(0, v), A2 ~ N(a2, v), X_t = 1{A1 >= eta_t}, with
  v = 1 / sqrt(2) the variance.
- ``dynamic_continuous``: X_t ~ N(A, 1) for t = 0..T,
  Y_0 = 1{X_0 beta + A >= eps_0}, Y_t = 1{Y_t-1 gamma + X_t beta + A >= eps_t}.
- ``rc_dynamic``: Y_0 = 1{A1 >= eps_0}, Y_t = 1{Y_t-1 A2 + A1 >= eps_t}.

All errors are standard logistic.
"""
import itertools
import logging

import numpy as np
from scipy import special, stats

from panelbounds.config.settings import DEFAULT_SEED, ORACLE_DRAWS,\
    QUADRATURE_NODES, RC_VARIANCE
from panelbounds.lib.exceptions import ArgumentError
from panelbounds.lib.quadrature import normal_nodes, product_normal_nodes
from panelbounds.lib.rng import logistic, stream
from panelbounds.lib.utils import outcome_patterns
from panelbounds.models.effect import DiscreteShift, Derivative,\
    RandomCoefShift, TransitionEffect
from panelbounds.models.model_spec import ConditioningValue, ModelSpec
from panelbounds.models.panel import PanelDataset


LOGGER = logging.getLogger(__name__)

SUPPORT_LIMIT = 4096
ORACLE_CHUNK = 100000


class Dgp(object):
    """Base class of the simulation designs.

    Attributes:

    - kind: registry name.
    - family: model family the design follows.
    - PARAMS: design parameters with their defaults.
    - sweep_parameter: the parameter varied by sweeps.

    :param n: Number of units.
    :param T: Number of periods.
    :param seed: Base seed; replication r uses ``seed + r``.
    """
    kind = None
    family = None
    PARAMS = {}
    sweep_parameter = 'beta0'
    K = 1

    def __init__(self, n=1000, T=3, seed=DEFAULT_SEED, **params):
        unknown = set(params) - set(self.PARAMS)

        if unknown:
            raise ArgumentError('unknown parameters %s for design %s' % (
                sorted(unknown), self.kind))

        if int(n) < 1 or int(T) < 2:
            raise ArgumentError('need n >= 1 and T >= 2, got n=%r, T=%r' % (
                n, T))

        self.n = int(n)
        self.T = int(T)
        self.seed = int(seed)
        self.params = dict(self.PARAMS)

        for key, value in params.items():
            self.params[key] = type(self.PARAMS[key])(value)

        self.check_params()

    def check_params(self):
        pass

    @classmethod
    def create(cls, kind, n=1000, T=3, seed=DEFAULT_SEED, **params):
        try:
            dgp_class = DGPS[kind]
        except KeyError:
            raise ArgumentError('unknown design %r, expected one of %s' % (
                kind, sorted(DGPS)))

        return dgp_class(n, T, seed, **params)

    def replace(self, **changes):
        """A copy with some of n, T, seed or the design parameters changed."""
        settings = dict(self.params, n=self.n, T=self.T, seed=self.seed)
        settings.update(changes)

        return self.__class__(**settings)

    def to_record(self):
        return dict(self.params, kind=self.kind, n=self.n, T=self.T,
                    seed=self.seed)

    def __repr__(self):
        return '%s(n=%d, T=%d, seed=%d, %s)' % (
            self.__class__.__name__, self.n, self.T, self.seed, self.params)

    @property
    def model(self):
        return ModelSpec.create(self.family, self.T, self.K)

    @property
    def beta0(self):
        """The common parameter of the model, as a vector."""
        return np.array([self.params['beta0']])

    def default_effect(self):
        raise NotImplementedError

    def generate(self, seed=None):
        """Draw a panel of `n` units from streams keyed by `seed`.

        :returns: A `PanelDataset`.
        """
        panel, _ = self._draw(self.n, self.seed if seed is None else seed)

        return panel

    def _draw(self, n, seed, chunk=0):
        """Return ``(panel, heterogeneity)`` with heterogeneity (n, d)."""
        raise NotImplementedError

    def _streams(self, seed, chunk, *roles):
        return [stream(seed, role, chunk) for role in roles]

    # population side

    def prior_nodes(self, n_nodes=QUADRATURE_NODES):
        """Quadrature rule for the marginal law of the heterogeneity."""
        nodes, weights = normal_nodes(n_nodes)

        return nodes[:, None], weights

    def z_likelihood(self, z, nodes):
        """P(Z = z | a) (or its density) at each node, shape (Q,)."""
        raise NotImplementedError

    def z_support(self):
        """Finite covariate support as conditioning values, or None."""
        return None

    def conditional_nodes(self, z, n_nodes=QUADRATURE_NODES):
        """Quadrature rule for pi(a | z) and the weight of z.

        :returns: ``(nodes, weights, mass)`` where `weights` sum to one and
            `mass` is P(Z = z) for discrete designs.
        """
        nodes, weights = self.prior_nodes(n_nodes)
        joint = weights * self.z_likelihood(z, nodes)
        mass = joint.sum()

        if not mass > 0:
            raise ArgumentError('conditioning value %r has zero probability'
                                % z)

        return nodes, joint / mass, float(mass)


def _binary_supports(T):
    return [ConditioningValue(x[:, None]) for x in outcome_patterns(T)]


def _bernoulli_likelihood(x, prob):
    """prod_t prob^x_t (1 - prob)^(1 - x_t) for node probabilities (Q,)."""
    ones = x.sum()

    return prob ** ones * (1.0 - prob) ** (x.size - ones)


class StaticDiscrete(Dgp):
    kind = 'static_discrete'
    family = 'static_binary'
    PARAMS = {'beta0': 1.0}

    def default_effect(self):
        return DiscreteShift(k=1, x1=1.0, x2=0.0)

    def _draw(self, n, seed, chunk=0):
        h, c, e = self._streams(seed, chunk, 'heterogeneity', 'covariate',
                                'error')
        a = h.standard_normal(n)
        x = (a[:, None] >= c.standard_normal((n, self.T))).astype(float)
        eps = logistic(e, (n, self.T))
        y = (x * self.params['beta0'] + a[:, None] >= eps).astype(int)

        return PanelDataset(y, x), a[:, None]

    def z_support(self):
        return _binary_supports(self.T) if 2 ** self.T <= SUPPORT_LIMIT\
            else None

    def z_likelihood(self, z, nodes):
        return _bernoulli_likelihood(z.x[:, 0], special.ndtr(nodes[:, 0]))


class StaticContinuous(Dgp):
    kind = 'static_continuous'
    family = 'static_binary'
    PARAMS = {'beta0': 1.0}

    def default_effect(self):
        return Derivative(k=1, rule='observed')

    def _draw(self, n, seed, chunk=0):
        h, c, e = self._streams(seed, chunk, 'heterogeneity', 'covariate',
                                'error')
        a = h.standard_normal(n)
        x = a[:, None] + c.standard_normal((n, self.T))
        eps = logistic(e, (n, self.T))
        y = (x * self.params['beta0'] + a[:, None] >= eps).astype(int)

        return PanelDataset(y, x), a[:, None]

    def z_likelihood(self, z, nodes):
        return stats.norm.pdf(z.x[:, 0][None, :] - nodes).prod(axis=1)

    def conditional_nodes(self, z, n_nodes=QUADRATURE_NODES):
        # A | x ~ N(sum_t x_t / (T + 1), 1 / (T + 1))
        precision = self.T + 1.0
        nodes, weights = normal_nodes(n_nodes, z.x[:, 0].sum() / precision,
                                      precision ** -0.5)

        return nodes[:, None], weights, None


class DiscreteUniform(Dgp):
    kind = 'discrete_uniform'
    family = 'static_binary'
    PARAMS = {'beta0': 1.0, 'support': 6}

    @property
    def support(self):
        return int(self.params['support'])

    def check_params(self):
        if self.support < 2:
            raise ArgumentError('support needs at least 2 points, got %d' %
                                self.support)

    def default_effect(self):
        return DiscreteShift(k=1, x1=1.0, x2=0.0)

    def _draw(self, n, seed, chunk=0):
        h, c, e = self._streams(seed, chunk, 'heterogeneity', 'covariate',
                                'error')
        x = c.integers(0, self.support, (n, self.T)) / (self.support - 1.0)
        a = x.mean(axis=1) - 0.5 + h.standard_normal(n)
        eps = logistic(e, (n, self.T))
        y = (x * self.params['beta0'] + a[:, None] >= eps).astype(int)

        return PanelDataset(y, x), a[:, None]

    def z_support(self):
        if self.support ** self.T > SUPPORT_LIMIT:
            return None

        values = np.arange(self.support) / (self.support - 1.0)

        return [ConditioningValue(np.array(x)[:, None])
                for x in itertools.product(values, repeat=self.T)]

    def conditional_nodes(self, z, n_nodes=QUADRATURE_NODES):
        nodes, weights = normal_nodes(n_nodes, z.x[:, 0].mean() - 0.5)

        return nodes[:, None], weights, float(self.support) ** -self.T


class RcStatic(Dgp):
    kind = 'rc_static'
    family = 'random_coef_static'
    PARAMS = {'a2': 0.0}
    sweep_parameter = 'a2'

    @property
    def beta0(self):
        return np.zeros(0)

    def default_effect(self):
        return RandomCoefShift(k=1)

    def _draw(self, n, seed, chunk=0):
        h, s, c, e = self._streams(seed, chunk, 'heterogeneity', 'slope',
                                   'covariate', 'error')
        sd = RC_VARIANCE ** 0.5
        a1 = sd * h.standard_normal(n)
        a2 = self.params['a2'] + sd * s.standard_normal(n)
        x = (a1[:, None] >= c.standard_normal((n, self.T))).astype(float)
        eps = logistic(e, (n, self.T))
        y = (a1[:, None] + x * a2[:, None] >= eps).astype(int)

        return PanelDataset(y, x), np.column_stack([a1, a2])

    def prior_nodes(self, n_nodes=QUADRATURE_NODES):
        sd = RC_VARIANCE ** 0.5

        return product_normal_nodes(n_nodes, [0.0, self.params['a2']],
                                    [sd, sd])

    def z_support(self):
        return _binary_supports(self.T) if 2 ** self.T <= SUPPORT_LIMIT\
            else None

    def z_likelihood(self, z, nodes):
        return _bernoulli_likelihood(z.x[:, 0], special.ndtr(nodes[:, 0]))


class DynamicContinuous(Dgp):
    kind = 'dynamic_continuous'
    family = 'dynamic_binary'
    PARAMS = {'gamma': 0.5, 'beta': 1.0}
    sweep_parameter = 'gamma'

    @property
    def beta0(self):
        return np.array([self.params['gamma'], self.params['beta']])

    def default_effect(self):
        return TransitionEffect()

    def _draw(self, n, seed, chunk=0):
        h, c, e, i = self._streams(seed, chunk, 'heterogeneity', 'covariate',
                                   'error', 'initial')
        gamma, beta = self.params['gamma'], self.params['beta']
        a = h.standard_normal(n)
        x0 = a + i.standard_normal(n)
        y0 = (x0 * beta + a >= logistic(i, n)).astype(int)
        x = a[:, None] + c.standard_normal((n, self.T))
        eps = logistic(e, (n, self.T))
        y = np.empty((n, self.T), dtype=int)
        previous = y0

        for t in range(self.T):
            y[:, t] = previous * gamma + x[:, t] * beta + a >= eps[:, t]
            previous = y[:, t]

        return PanelDataset(y, x, y0), a[:, None]

    def initial_probability(self, nodes, n_nodes=QUADRATURE_NODES):
        """P(Y_0 = 1 | a) with X_0 ~ N(a, 1) integrated out."""
        u, v = normal_nodes(n_nodes)
        a = nodes[:, 0][:, None]

        return special.expit((a + u[None, :]) * self.params['beta'] + a)\
            .dot(v)

    def z_likelihood(self, z, nodes):
        density = stats.norm.pdf(z.x[:, 0][None, :] - nodes).prod(axis=1)
        p1 = self.initial_probability(nodes)

        return density * (p1 if z.y0 == 1 else 1.0 - p1)

    def conditional_nodes(self, z, n_nodes=QUADRATURE_NODES):
        precision = self.T + 1.0
        nodes, weights = normal_nodes(n_nodes, z.x[:, 0].sum() / precision,
                                      precision ** -0.5)
        nodes = nodes[:, None]
        p1 = self.initial_probability(nodes, n_nodes)
        weights = weights * (p1 if z.y0 == 1 else 1.0 - p1)

        return nodes, weights / weights.sum(), None


class RcDynamic(Dgp):
    kind = 'rc_dynamic'
    family = 'random_coef_dynamic'
    PARAMS = {'a2': 0.0}
    sweep_parameter = 'a2'
    K = 0

    @property
    def beta0(self):
        return np.zeros(0)

    def default_effect(self):
        return TransitionEffect()

    def _draw(self, n, seed, chunk=0):
        h, s, e, i = self._streams(seed, chunk, 'heterogeneity', 'slope',
                                   'error', 'initial')
        sd = RC_VARIANCE ** 0.5
        a1 = sd * h.standard_normal(n)
        a2 = self.params['a2'] + sd * s.standard_normal(n)
        y0 = (a1 >= logistic(i, n)).astype(int)
        eps = logistic(e, (n, self.T))
        y = np.empty((n, self.T), dtype=int)
        previous = y0

        for t in range(self.T):
            y[:, t] = previous * a2 + a1 >= eps[:, t]
            previous = y[:, t]

        return (PanelDataset(y, np.zeros((n, self.T, 0)), y0),
                np.column_stack([a1, a2]))

    def prior_nodes(self, n_nodes=QUADRATURE_NODES):
        sd = RC_VARIANCE ** 0.5

        return product_normal_nodes(n_nodes, [0.0, self.params['a2']],
                                    [sd, sd])

    def z_support(self):
        return [ConditioningValue(np.zeros((self.T, 0)), y0)
                for y0 in (0, 1)]

    def z_likelihood(self, z, nodes):
        p1 = special.expit(nodes[:, 0])

        return p1 if z.y0 == 1 else 1.0 - p1


DGPS = dict((dgp_class.kind, dgp_class) for dgp_class in (
    StaticDiscrete, StaticContinuous, DiscreteUniform, RcStatic,
    DynamicContinuous, RcDynamic))


class TrueEffect(object):
    """Oracle value of the average effect with its Monte Carlo error."""

    def __init__(self, value, se, method, draws=0):
        self.value = float(value)
        self.se = float(se)
        self.method = method
        self.draws = int(draws)

    def to_record(self):
        return {'value': self.value, 'se': self.se, 'method': self.method,
                'draws': self.draws}


def true_average_effect(dgp, effect=None, beta0=None, draws=ORACLE_DRAWS,
                        n_nodes=QUADRATURE_NODES):
    """E[m(Z, A, beta0)] under the design.

    Designs with a finite covariate support are integrated exactly over z and
    by Gauss-Hermite quadrature over A (standard error 0); otherwise `draws`
    Monte Carlo draws from a dedicated oracle stream are averaged.

    :returns: A `TrueEffect`.
    """
    effect = effect or dgp.default_effect()
    model = dgp.model
    beta0 = dgp.beta0 if beta0 is None else np.asarray(beta0, dtype=float)
    support = dgp.z_support()

    if support is not None:
        total = 0.0

        for z in support:
            nodes, weights, mass = dgp.conditional_nodes(z, n_nodes)
            total += mass * weights.dot(effect.values(model, z, nodes, beta0))

        return TrueEffect(total, 0.0, 'quadrature')

    oracle_seed = int(stream(dgp.seed, 'oracle').integers(2 ** 31))
    draws = int(draws)
    total, total_sq, done, chunk = 0.0, 0.0, 0, 0

    while done < draws:
        size = min(ORACLE_CHUNK, draws - done)
        panel, a = dgp._draw(size, oracle_seed, chunk)
        values = effect.sample_values(model, panel.x, a, beta0)
        total += values.sum()
        total_sq += np.square(values).sum()
        done += size
        chunk += 1

    mean = total / done
    variance = max(total_sq / done - mean ** 2, 0.0)

    return TrueEffect(mean, np.sqrt(variance / done), 'monte_carlo', done)
