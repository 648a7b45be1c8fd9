import logging

import pandas as pd

from panelbounds.config.settings import DESK_REPS, FULL_REPS
from panelbounds.controllers.abstract_controller import AbstractController
from panelbounds.core.dgp import true_average_effect
from panelbounds.core.replications import run_replications, sweep
from panelbounds.lib.exceptions import ConfigError
from panelbounds.lib.io import write_table
from panelbounds.lib.jsontools import frame_to_records


LOGGER = logging.getLogger(__name__)


class Simulations(AbstractController):

    def _reps(self, config):
        reps = config.get_value('reps')

        if reps is None:
            reps = FULL_REPS if config.get_value('full') else DESK_REPS

        return reps

    def _options(self, config, dgp):
        return dict(grid=self._grid(config, dgp.model),
                    objective=config.get_value('objective'),
                    refine=config.get_value('refine'),
                    beta_grid_size=config.get_value('beta_grid_size'))

    def _effect(self, config, dgp):
        return self._effects(config, dgp.model, dgp.default_effect())[0]

    def simulate(self, config):
        dgp = self._dgp(config)
        pipeline = config.get_value('pipeline')
        summary = run_replications(
            dgp, pipeline, self._reps(config), config.get_value('alpha'),
            self._gamma(config, pipeline), self._effect(config, dgp),
            threads=config.get_value('threads'),
            **self._options(config, dgp))

        if config.get_value('csv'):
            write_table(pd.DataFrame([summary.to_row()]),
                        config.get_value('csv'))

        return {'design': dgp.to_record(),
                'summary': summary.to_record(config.get_value('per_rep'))}

    def sweep(self, config):
        values = config.get_value('values')

        if not values:
            raise ConfigError('values', 'a sweep needs parameter values')

        dgp = self._dgp(config)
        pipeline = config.get_value('pipeline')
        frame = sweep(dgp, values, pipeline, self._reps(config),
                      config.get_value('parameter'),
                      config.get_value('alpha'),
                      self._gamma(config, pipeline),
                      self._effect(config, dgp),
                      threads=config.get_value('threads'),
                      **self._options(config, dgp))

        if config.get_value('csv'):
            write_table(frame, config.get_value('csv'))

        return {'design': dgp.to_record(),
                'parameter': config.get_value('parameter') or
                dgp.sweep_parameter,
                'rows': frame_to_records(frame)}

    def true_effect(self, config):
        dgp = self._dgp(config)
        effect = self._effect(config, dgp)
        truth = true_average_effect(dgp, effect,
                                    draws=config.get_value('draws'))
        LOGGER.info('true effect %.6f (se %.2g) by %s', truth.value,
                    truth.se, truth.method)

        return {'design': dgp.to_record(), 'effect': effect.to_record(),
                'true_effect': truth.to_record()}
