import functools
import logging
import os

from panelbounds.controllers.abstract_controller import AbstractController
from panelbounds.core.bounds import build_bound_program
from panelbounds.core.crossfit import estimate_bounds_crossfit,\
    estimate_bounds_crossfit_set, estimate_bounds_known_beta
from panelbounds.core.estimation import conditional_logit_mle
from panelbounds.core.simplex import write_lp_file
from panelbounds.lib.exceptions import ConfigError
from panelbounds.lib.io import write_record


LOGGER = logging.getLogger(__name__)


class Bounds(AbstractController):

    def estimate(self, config):
        """Outer bounds for each requested effect.

        With `beta` given (or no common parameter) every unit uses it;
        otherwise the bounds are cross-fitted, over parameter boxes for
        ``bounds_method=cross_fit_set``.
        """
        panel = self._panel(config)
        model = self._model(config, panel)
        grid = self._grid(config, model)
        beta = self._beta(config, model)
        method = config.get_value('bounds_method')

        if method == 'auto':
            method = 'known_beta' if beta is not None or\
                model.beta_dim == 0 else 'cross_fit'

        if method == 'known_beta' and beta is None and model.beta_dim:
            raise ConfigError('beta', 'known-beta bounds need beta')

        estimator = functools.partial(conditional_logit_mle,
                                      vcov_type=config.get_value('vcov'))
        common = dict(grid=grid, objective=config.get_value('objective'),
                      refine=config.get_value('refine'),
                      method=config.get_value('lp_method'),
                      threads=config.get_value('threads'))
        estimates = []

        for effect in self._effects(config, model):
            if method == 'known_beta':
                estimate = estimate_bounds_known_beta(
                    panel, model, effect, beta, **common)
            elif method == 'cross_fit':
                estimate = estimate_bounds_crossfit(
                    panel, model, effect, estimator=estimator,
                    shuffle_seed=config.get_value('shuffle_seed'), **common)
            else:
                estimate = estimate_bounds_crossfit_set(
                    panel, model, effect, self._gamma(config, method),
                    estimator=estimator,
                    shuffle_seed=config.get_value('shuffle_seed'), **common)

            self._dump(config, model, grid, estimate, len(estimates))
            estimates.append(estimate.to_record())

        return {'model': model.to_record(), 'grid': grid.to_record(),
                'estimates': estimates}

    def _dump(self, config, model, grid, estimate, index):
        dump, dump_lp = config.get_value('dump'), config.get_value('dump_lp')

        for g, bf in enumerate(estimate.functions):
            name = 'effect%d_z%d' % (index, g)

            if dump:
                write_record({'model': model.to_record(),
                              'effect': estimate.effect.to_record(),
                              'bound_function': bf.to_record()},
                             os.path.join(dump, name + '.json'))

            if dump_lp:
                if not os.path.isdir(dump_lp):
                    os.makedirs(dump_lp)

                program = build_bound_program(
                    model, estimate.effect, bf.z, bf.betas, grid,
                    bf.objective, classes=bf.classes)
                write_lp_file(program.lp, os.path.join(dump_lp, name + '.lp'))

        if dump or dump_lp:
            LOGGER.info('dumped %d bound functions', len(estimate.functions))
