"""Effect functions m(z, a, beta) with known ranges [b_min, b_max].

Covariate indices `k` are 1-based, matching the ``x1..xK`` CSV columns.
"""
import numpy as np

from panelbounds.lib.exceptions import ArgumentError
from panelbounds.lib.utils import as_finite_array


class Effect(object):
    """Base class for effect functions.

    Subclasses implement `_values`, which evaluates m for covariate arrays
    paired row by row with heterogeneity points. `values` broadcasts one
    conditioning value over a grid; `sample_values` takes a drawn sample.

    Attributes:

    - kind: registry name.
    - families: model families the effect is defined for.
    - range_source: 'explicit' when the caller gave b_min/b_max, 'default'
      when they came from `default_effect_range`.

    """
    kind = None
    families = ()

    def __init__(self, b_min=None, b_max=None, range_source='explicit'):
        if (b_min is None) != (b_max is None):
            raise ArgumentError('give both b_min and b_max or neither')

        if b_min is not None:
            b_min, b_max = float(b_min), float(b_max)

            if not (np.isfinite(b_min) and np.isfinite(b_max)):
                raise ArgumentError('effect range must be finite')

            if b_min > b_max:
                raise ArgumentError('b_min %g exceeds b_max %g' % (
                    b_min, b_max))

        self.b_min = b_min
        self.b_max = b_max
        self.range_source = range_source if b_min is not None else None

    @classmethod
    def create(cls, kind, **params):
        try:
            effect_class = EFFECTS[kind]
        except KeyError:
            raise ArgumentError('unknown effect kind %r, expected one of %s' %
                                (kind, sorted(EFFECTS)))

        return effect_class(**params)

    @property
    def has_range(self):
        return self.b_min is not None

    def params(self):
        return {}

    def with_range(self, b_min, b_max, range_source='explicit'):
        params = self.params()
        params.update(b_min=b_min, b_max=b_max, range_source=range_source)

        return self.__class__(**params)

    def to_record(self):
        record = {'kind': self.kind, 'b_min': self.b_min,
                  'b_max': self.b_max, 'range_source': self.range_source}
        record.update(self.params())

        return record

    @classmethod
    def from_record(cls, record):
        params = dict(record)
        return cls.create(params.pop('kind'), **params)

    def check_model(self, model):
        if model.family not in self.families:
            raise ArgumentError('effect %s is not defined for %s' % (
                self.kind, model.family))

    def _check_covariate(self, model, k):
        if not 1 <= k <= model.K:
            raise ArgumentError('covariate index k=%d outside 1..%d' % (
                k, model.K))

    def values(self, model, z, points, beta):
        """m(z, a, beta) at every row of `points`, shape (G,)."""
        self.check_model(model)
        model.check_conditioning(z)
        points = model.check_grid(points)
        x = np.broadcast_to(z.x, (points.shape[0],) + z.x.shape)

        return self._values(model, x, points, model.check_beta(beta))

    def sample_values(self, model, x, points, beta):
        """m(z_i, a_i, beta) for paired rows, shape (N,).

        :param x: Covariates, shape (N, T, K).
        :param points: Heterogeneity, shape (N, d).
        """
        self.check_model(model)
        x = as_finite_array(x, 'x', ndim=3)
        points = model.check_grid(points)

        if x.shape[0] != points.shape[0]:
            raise ArgumentError('need one heterogeneity row per unit')

        return self._values(model, x, points, model.check_beta(beta))

    def value(self, model, z, a, beta):
        a = as_finite_array(a, 'a').ravel()

        return float(self.values(model, z, a[None, :], beta)[0])

    def default_range(self, model, beta_box):
        return (-1.0, 1.0)

    def resolve(self, model, beta_box=None):
        """Return this effect with a range, filling in the default if unset."""
        self.check_model(model)

        if self.has_range:
            return self

        b_min, b_max = default_effect_range(self, model, beta_box)

        return self.with_range(b_min, b_max, range_source='default')

    def _values(self, model, x, points, beta):
        """Vectorized m for x of shape (N, T, K) paired with points (N, d)."""
        raise NotImplementedError


def _replace(x, k, value, relative=False):
    x = np.array(x, dtype=float)
    x[..., k - 1] = x[..., k - 1] + value if relative else value

    return x


class DiscreteShift(Effect):
    """Average over t of F(x1-version index) - F(x2-version index).

    With `relative` the values x1 and x2 are offsets added to the observed
    covariate, e.g. (1, 0) for one more year of schooling.
    """
    kind = 'discrete_shift'
    families = ('static_binary',)

    def __init__(self, k=1, x1=1.0, x2=0.0, relative=False, **kwargs):
        Effect.__init__(self, **kwargs)
        self.k = int(k)
        self.x1 = float(x1)
        self.x2 = float(x2)
        self.relative = bool(relative)

    def params(self):
        return {'k': self.k, 'x1': self.x1, 'x2': self.x2,
                'relative': self.relative}

    def _values(self, model, x, points, beta):
        self._check_covariate(model, self.k)
        upper = _replace(x, self.k, self.x1, self.relative).dot(beta)
        lower = _replace(x, self.k, self.x2, self.relative).dot(beta)
        a = points[:, :1]

        return (model.link.cdf(upper + a) - model.link.cdf(lower + a))\
            .mean(axis=1)


class Derivative(Effect):
    """Average over t of beta_k F'(x_t beta + a).

    `rule` chooses where x_t is evaluated: 'observed' (default), 'average'
    (the time average of x) or 'fixed' (covariate k set to `point`).
    """
    kind = 'derivative'
    families = ('static_binary',)
    RULES = ('observed', 'average', 'fixed')

    def __init__(self, k=1, rule='observed', point=None, **kwargs):
        Effect.__init__(self, **kwargs)

        if rule not in self.RULES:
            raise ArgumentError('derivative rule must be one of %s' % (
                self.RULES,))

        if rule == 'fixed' and point is None:
            raise ArgumentError('fixed derivative rule needs a point')

        self.k = int(k)
        self.rule = rule
        self.point = None if point is None else float(point)

    def params(self):
        return {'k': self.k, 'rule': self.rule, 'point': self.point}

    def _values(self, model, x, points, beta):
        self._check_covariate(model, self.k)

        if self.rule == 'average':
            x = x.mean(axis=1, keepdims=True)
        elif self.rule == 'fixed':
            x = _replace(x, self.k, self.point)

        index = x.dot(beta) + points[:, :1]

        return beta[self.k - 1] * model.link.pdf(index).mean(axis=1)

    def default_range(self, model, beta_box):
        if beta_box is None:
            raise ArgumentError('derivative effects need explicit b_min/b_max'
                                ' or a finite beta box')

        lo, hi = [np.asarray(side, dtype=float).ravel() for side in beta_box]

        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ArgumentError('beta box is unbounded; give b_min and b_max'
                                ' explicitly')

        self._check_covariate(model, self.k)
        scale = max(abs(lo[self.k - 1]), abs(hi[self.k - 1])) *\
            model.link.density_peak

        return (-scale, scale)


class RandomCoefShift(Effect):
    """Average over t of F(a1 + x(k=1) a2) - F(a1 + x(k=0) a2)."""
    kind = 'random_coef_shift'
    families = ('random_coef_static',)

    def __init__(self, k=1, **kwargs):
        Effect.__init__(self, **kwargs)
        self.k = int(k)

    def params(self):
        return {'k': self.k}

    def _values(self, model, x, points, beta):
        self._check_covariate(model, self.k)
        slopes = points[:, 1:]
        one = np.einsum('ntk,nk->nt', _replace(x, self.k, 1.0), slopes)
        zero = np.einsum('ntk,nk->nt', _replace(x, self.k, 0.0), slopes)
        a = points[:, :1]

        return (model.link.cdf(a + one) - model.link.cdf(a + zero))\
            .mean(axis=1)


class TransitionEffect(Effect):
    """Average over t of F(lag coefficient + rest) - F(rest).

    The rest of the index is evaluated at the observed covariates.
    """
    kind = 'transition'
    families = ('dynamic_binary', 'random_coef_dynamic')

    def params(self):
        return {}

    def _values(self, model, x, points, beta):
        if model.family == 'dynamic_binary':
            rest = x.dot(beta[1:]) + points[:, :1]
            lag = beta[0]
        else:
            rest = points[:, :1] + np.einsum('ntk,nk->nt', x, points[:, 2:])
            lag = points[:, 1:2]

        return (model.link.cdf(rest + lag) - model.link.cdf(rest))\
            .mean(axis=1)


EFFECTS = {
    DiscreteShift.kind: DiscreteShift,
    Derivative.kind: Derivative,
    RandomCoefShift.kind: RandomCoefShift,
    TransitionEffect.kind: TransitionEffect,
}


def effect_m(effect, model, z, a, beta):
    """m(z, a, beta) for one heterogeneity vector."""
    return effect.value(model, z, a, beta)


def default_effect_range(effect, model, beta_box=None):
    """Default (b_min, b_max) when the user gives none.

    Probability differences are bounded by (-1, 1); derivatives by the
    largest |beta_k| in `beta_box` times the peak of the link density.

    :param beta_box: Pair (lo, hi) of parameter vectors.

    :raises: `ArgumentError` for derivatives with an unbounded box.
    """
    effect.check_model(model)

    return tuple(float(b) for b in effect.default_range(model, beta_box))
