import logging

from panelbounds.config.settings import GRID_POINTS, RC_GRID_POINTS,\
    SCHEMA_VERSION
from panelbounds.config.run_config import parse_effect_spec
from panelbounds.core.dgp import Dgp
from panelbounds.lib.exceptions import ConfigError, PanelBoundsError
from panelbounds.lib.io import load_panel_csv
from panelbounds.models.effect import Effect
from panelbounds.models.grid import HeterogeneityGrid
from panelbounds.models.model_spec import ModelSpec


LOGGER = logging.getLogger(__name__)

VERSION_NUMBER = '0.3.0'

DEFAULT_EFFECTS = {
    'static_binary': 'discrete_shift:k=1',
    'dynamic_binary': 'transition',
    'random_coef_static': 'random_coef_shift:k=1',
    'random_coef_dynamic': 'transition',
}


class AbstractController(object):
    """Base class of the command-line controllers.

    Actions take a `RunConfig` and return a result mapping. `_safe_call`
    wraps the result into a record and converts library errors into an
    error record and exit code.

    Attributes:

    - ERROR: constant string for error messages.
    - SUCCESS: constant string for success messages.

    """
    ERROR = 'error'
    SUCCESS = 'success'

    SEED_KEYS = ('seed', 'shuffle_seed')

    def _safe_call(self, action, config):
        """Call `action(config)` and return ``(exit_code, record)``."""
        try:
            result = action(config)
            status, code = self.SUCCESS, 0
        except PanelBoundsError as err:
            LOGGER.error('%s failed: %s', config.subcommand, err)
            result = {self.ERROR: str(err),
                      'error_type': err.__class__.__name__}
            status, code = self.ERROR, err.EXIT_CODE

        return code, self.record(status, result, config)

    def record(self, status, result, config):
        effective = config.effective()

        return {
            'status': status,
            'subcommand': config.subcommand,
            'result': result,
            'version': VERSION_NUMBER,
            'schema_version': SCHEMA_VERSION,
            'config': effective,
            'seeds': dict((key, effective[key]) for key in self.SEED_KEYS
                          if key in effective),
        }

    def _panel(self, config):
        path = config.get_value('panel')

        if path is None:
            raise ConfigError('panel', 'a panel CSV is required')

        return load_panel_csv(path)

    def _model(self, config, panel):
        return ModelSpec.create(config.get_value('model'), panel.T, panel.K,
                                config.get_value('link'))

    def _dgp(self, config):
        return Dgp.create(config.get_value('design'), config.get_value('n'),
                          config.get_value('T'), config.get_value('seed'),
                          **config.get_value('params'))

    def _effects(self, config, model, default=None):
        specs = config.get_value('effects')

        if not specs:
            if default is not None:
                return [default]

            specs = [DEFAULT_EFFECTS[model.family]]

        effects = []

        for spec in specs:
            kind, params = parse_effect_spec(spec)
            effect = Effect.create(kind, **params)
            effect.check_model(model)
            effects.append(effect)

        return effects

    def _grid(self, config, model):
        """Rectangular grid from the grid keys; a fine grid is added when
        refinement is on."""
        dim = model.heterogeneity_dim
        count = config.get_value('grid_points') or (
            GRID_POINTS if dim == 1 else RC_GRID_POINTS)
        ranges = [(config.get_value('grid_lo'), config.get_value('grid_hi'))]
        ranges += [(config.get_value('slope_lo'),
                    config.get_value('slope_hi'))] * (dim - 1)
        refine = config.get('refine', False)

        return HeterogeneityGrid.rectangular(
            ranges, [count] * dim,
            config.get_value('fine_factor') if refine else None)

    def _beta(self, config, model):
        beta = config.get_value('beta')

        return None if beta is None or model.beta_dim == 0 else beta

    @staticmethod
    def _gamma(config, method):
        gamma = config.get_value('gamma')

        if gamma is None:
            return 0.01 if method in ('method1', 'method2',
                                      'cross_fit_set') else 0.0

        return gamma
