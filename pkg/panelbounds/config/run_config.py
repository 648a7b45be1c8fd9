"""Run configuration for the command line.

A `RunConfig` is a dict of typed keys for one subcommand. Values come from
an optional JSON config file and from flags, flags winning; `effective()`
returns every key with its default filled in, which is echoed into each
result record and can be fed back as a config file.
"""
from panelbounds.config.settings import DEFAULT_SEED, DESK_REPS,\
    FINE_GRID_FACTOR, GRID_RANGE, IDSET_SLACK, MIN_CELL_COUNT,\
    ORACLE_DRAWS, RC_SLOPE_RANGE, SCHEMA_VERSION
from panelbounds.lib.exceptions import ConfigError


META_KEYS = ('subcommand', 'schema_version')

TRUE_STRINGS = ('1', 'true', 'yes', 'on')
FALSE_STRINGS = ('0', 'false', 'no', 'off')


def to_bool(value):
    if isinstance(value, bool):
        return value

    text = str(value).strip().lower()

    if text in TRUE_STRINGS:
        return True

    if text in FALSE_STRINGS:
        return False

    raise ValueError('not a boolean: %r' % value)


def _as_list(value):
    if isinstance(value, (list, tuple)):
        return list(value)

    return [part for part in str(value).split(',') if part.strip()]


def to_float_list(value):
    items = []

    for item in _as_list(value):
        items.extend(_as_list(item) if isinstance(item, str) else [item])

    return [float(item) for item in items]


def to_str_list(value):
    return [str(item) for item in value] if isinstance(
        value, (list, tuple)) else [str(value)]


def to_params(value):
    """Design parameters from a dict or from ``key=value`` strings."""
    if isinstance(value, dict):
        return dict((str(k), float(v)) for k, v in value.items())

    params = {}

    for item in to_str_list(value):
        key, sep, number = item.partition('=')

        if not sep:
            raise ValueError('expected key=value, got %r' % item)

        params[key.strip()] = float(number)

    return params


def coerce_scalar(text):
    """Best-effort typing of an effect parameter string."""
    lowered = text.strip().lower()

    if lowered in ('true', 'false'):
        return lowered == 'true'

    for kind in (int, float):
        try:
            return kind(text)
        except ValueError:
            pass

    return text.strip()


def parse_effect_spec(text):
    """Split ``kind[:key=value,...]`` into (kind, params).

    >>> parse_effect_spec('discrete_shift:k=2,x1=1,x2=0')
    ('discrete_shift', {'k': 2, 'x1': 1, 'x2': 0})
    """
    kind, _, rest = str(text).partition(':')
    params = {}

    for item in rest.split(','):
        if not item.strip():
            continue

        key, sep, value = item.partition('=')

        if not sep:
            raise ConfigError('effects', 'expected key=value in %r' % text)

        params[key.strip()] = coerce_scalar(value)

    return kind.strip(), params


def _choice(*options):
    def coerce(value):
        if value not in options:
            raise ValueError('expected one of %s' % (options,))

        return value

    return coerce


def _optional(kind):
    def coerce(value):
        return None if value is None else kind(value)

    return coerce


# name -> (coercion, default, help)
KEYS = {
    'panel': (str, None, 'long-format panel CSV with id, t, y, x1..xK[, y0]'),
    'model': (str, 'static_binary', 'model family'),
    'link': (_choice('logit', 'probit'), 'logit', 'link function'),
    'effects': (to_str_list, None,
                'effect as kind[:key=value,...]; repeat for several'),
    'beta': (_optional(to_float_list), None, 'known common parameter'),
    'bounds_method': (_choice('auto', 'known_beta', 'cross_fit',
                              'cross_fit_set'), 'auto', 'bound estimator'),
    'grid_points': (_optional(int), None, 'points per grid axis'),
    'grid_lo': (float, GRID_RANGE[0], 'lower end of the intercept grid'),
    'grid_hi': (float, GRID_RANGE[1], 'upper end of the intercept grid'),
    'slope_lo': (float, RC_SLOPE_RANGE[0], 'lower end of slope grids'),
    'slope_hi': (float, RC_SLOPE_RANGE[1], 'upper end of slope grids'),
    'fine_factor': (int, FINE_GRID_FACTOR, 'size ratio of the fine grid'),
    'refine': (to_bool, False, 'two-grid refinement'),
    'objective': (_optional(_choice('baseline', 'uniform')), None,
                  'bound objective, default by model family'),
    'reduce': (to_bool, True, 'sufficient-statistic reduction'),
    'lp_method': (_choice('simplex', 'highs'), 'simplex', 'LP solver'),
    'shuffle_seed': (_optional(int), None, 'permute units before the split'),
    'vcov': (_choice('hessian', 'sandwich'), 'hessian', 'MLE covariance'),
    'interval': (_choice('theorem1', 'method1', 'method2', 'tradeoff'),
                 'theorem1', 'confidence interval method'),
    'alpha': (float, 0.05, 'level for the bounds'),
    'gamma': (_optional(float), None,
              'level for the parameter set (default 0, or 0.01 for '
              'method1/method2)'),
    'c_total': (float, 0.05, 'total level split by the tradeoff search'),
    'beta_grid_size': (_optional(int), None, 'method 1 grid size'),
    'dump': (_optional(str), None, 'directory for bound-function records'),
    'dump_lp': (_optional(str), None, 'directory for LP files'),
    'threads': (_optional(int), None, 'worker count'),
    'slack': (float, IDSET_SLACK, 'identified-set feasibility slack'),
    'escalate': (to_bool, True, 'escalate the slack when infeasible'),
    'fallback': (to_bool, False, 'use minimal feasible slack when needed'),
    'min_cell_count': (int, MIN_CELL_COUNT, 'thin-cell threshold'),
    'allow_continuous': (to_bool, False,
                         'skip the discrete-covariate check'),
    'table': (_optional(str), None, 'choice-probability table CSV'),
    'table_out': (_optional(str), None, 'write the table used as CSV'),
    'design': (str, 'static_discrete', 'simulation design'),
    'n': (int, 1000, 'units per panel'),
    'T': (int, 3, 'periods'),
    'seed': (int, DEFAULT_SEED, 'base seed'),
    'params': (to_params, {}, 'design parameter as key=value; repeatable'),
    'reps': (_optional(int), None, 'replications (default %d)' % DESK_REPS),
    'full': (to_bool, False, 'full-scale replication count'),
    'pipeline': (str, 'known_beta', 'replication pipeline'),
    'parameter': (_optional(str), None, 'swept design parameter'),
    'values': (_optional(to_float_list), None, 'swept values'),
    'draws': (int, ORACLE_DRAWS, 'Monte Carlo draws of the oracle'),
    'csv': (_optional(str), None, 'write the summary table as CSV'),
    'per_rep': (to_bool, False, 'include per-replication records'),
    'bound_function': (_optional(str), None, 'bound-function JSON record'),
}

MODEL_KEYS = ['model', 'link']
GRID_KEYS = ['grid_points', 'grid_lo', 'grid_hi', 'slope_lo', 'slope_hi',
             'fine_factor']
LP_KEYS = ['refine', 'objective', 'reduce', 'lp_method']
DESIGN_KEYS = ['design', 'n', 'T', 'seed', 'params']
SIM_KEYS = DESIGN_KEYS + ['effects'] + GRID_KEYS + LP_KEYS + [
    'reps', 'full', 'pipeline', 'alpha', 'gamma', 'beta_grid_size', 'csv',
    'per_rep', 'threads']

SUBCOMMAND_KEYS = {
    'bounds': MODEL_KEYS + ['panel', 'effects', 'beta', 'bounds_method',
                            'gamma', 'shuffle_seed', 'vcov', 'dump',
                            'dump_lp', 'threads'] + GRID_KEYS + LP_KEYS,
    'infer': MODEL_KEYS + ['panel', 'effects', 'beta', 'interval', 'alpha',
                           'gamma', 'c_total', 'beta_grid_size',
                           'shuffle_seed', 'vcov', 'threads'] + GRID_KEYS +
    LP_KEYS,
    'idset': MODEL_KEYS + DESIGN_KEYS + [
        'panel', 'table', 'table_out', 'effects', 'beta', 'slack',
        'escalate', 'fallback', 'min_cell_count', 'allow_continuous',
        'threads'] + GRID_KEYS + LP_KEYS,
    'simulate': SIM_KEYS,
    'sweep': SIM_KEYS + ['parameter', 'values'],
    'true-effect': DESIGN_KEYS + ['effects', 'draws'],
    'validate-bounds': ['bound_function'] + GRID_KEYS,
    'version': [],
}


class RunConfig(dict):
    """Typed configuration for one subcommand.

    :raises: `ConfigError` for unknown keys or values that do not coerce.
    """

    def __init__(self, subcommand, values=None):
        if subcommand not in SUBCOMMAND_KEYS:
            raise ConfigError('subcommand', 'unknown subcommand %r' %
                              subcommand)

        dict.__init__(self)
        self.subcommand = subcommand
        self.update_checked(values or {})

    @property
    def keys_allowed(self):
        return SUBCOMMAND_KEYS[self.subcommand]

    def update_checked(self, values):
        for key, value in values.items():
            if key in META_KEYS:
                self._check_meta(key, value)
                continue

            if key not in self.keys_allowed:
                raise ConfigError(key, 'unknown key for %s' %
                                  self.subcommand)

            if value is not None:
                self[key] = self.coerce(key, value)

    def _check_meta(self, key, value):
        if key == 'subcommand' and value != self.subcommand:
            raise ConfigError(key, 'config is for %r, not %r' % (
                value, self.subcommand))

        if key == 'schema_version' and int(value) != SCHEMA_VERSION:
            raise ConfigError(key, 'unsupported schema version %r' % value)

    @staticmethod
    def coerce(key, value):
        coerce = KEYS[key][0]

        try:
            return coerce(value)
        except (TypeError, ValueError) as err:
            raise ConfigError(key, str(err))

    @classmethod
    def merge(cls, subcommand, file_config=None, flag_config=None):
        """Combine file values with flag values; flags set to None are
        ignored so the file value (or default) survives."""
        config = cls(subcommand, file_config)
        config.update_checked(dict(
            (k, v) for k, v in (flag_config or {}).items() if v is not None))

        return config

    def get_value(self, key):
        if key not in self.keys_allowed:
            raise ConfigError(key, 'unknown key for %s' % self.subcommand)

        default = KEYS[key][1]

        return self.get(key, dict(default) if isinstance(default, dict)
                        else default)

    def effective(self):
        """Every key of the subcommand with defaults materialized."""
        record = dict((key, self.get_value(key)) for key in self.keys_allowed)
        record.update(subcommand=self.subcommand,
                      schema_version=SCHEMA_VERSION)

        return record
