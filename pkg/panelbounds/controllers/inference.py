import functools

from panelbounds.controllers.abstract_controller import AbstractController
from panelbounds.core.crossfit import estimate_bounds_crossfit,\
    estimate_bounds_known_beta
from panelbounds.core.estimation import conditional_logit_mle
from panelbounds.core.inference import ci_method1, ci_method2, ci_theorem1,\
    effect_table, tradeoff_search_method2
from panelbounds.lib.jsontools import frame_to_records


class Inference(AbstractController):

    def interval(self, config):
        """Confidence intervals for the requested effects.

        Several effects with an estimated parameter give one table row per
        effect from shared half-sample fits.
        """
        panel = self._panel(config)
        model = self._model(config, panel)
        beta = self._beta(config, model)
        method = config.get_value('interval')
        effects = self._effects(config, model)
        notes = []

        if (model.beta_dim == 0 or beta is not None) and\
                method != 'theorem1':
            notes.append('%s replaced by theorem1: the common parameter is '
                         'known' % method)
            method = 'theorem1'

        gamma = self._gamma(config, method)
        estimator = functools.partial(conditional_logit_mle,
                                      vcov_type=config.get_value('vcov'))
        grid = self._grid(config, model)

        if len(effects) > 1 and beta is None and method != 'tradeoff':
            frame = effect_table(
                panel, model, effects, config.get_value('alpha'), gamma,
                method, grid, estimator, config.get_value('objective'),
                config.get_value('shuffle_seed'),
                config.get_value('beta_grid_size'),
                config.get_value('threads'))

            return {'method': method, 'rows': frame_to_records(frame),
                    'notes': notes}

        intervals = [{
            'effect': effect.to_record(),
            'interval': self._interval(config, panel, model, effect, beta,
                                       method, gamma, estimator,
                                       grid).to_record(),
        } for effect in effects]

        return {'method': method, 'intervals': intervals, 'notes': notes}

    def _interval(self, config, panel, model, effect, beta, method, gamma,
                  estimator, grid):
        alpha = config.get_value('alpha')
        shuffle_seed = config.get_value('shuffle_seed')
        common = dict(grid=grid, objective=config.get_value('objective'),
                      refine=config.get_value('refine'),
                      threads=config.get_value('threads'))

        if method == 'theorem1':
            if beta is not None or model.beta_dim == 0:
                estimate = estimate_bounds_known_beta(
                    panel, model, effect, beta,
                    method=config.get_value('lp_method'), **common)
            else:
                estimate = estimate_bounds_crossfit(
                    panel, model, effect, estimator=estimator,
                    shuffle_seed=shuffle_seed,
                    method=config.get_value('lp_method'), **common)

            return ci_theorem1(estimate, alpha)

        if method == 'method1':
            fit = estimator(panel, model=model)

            return ci_method1(panel, model, effect, fit, alpha, gamma,
                              beta_grid_size=config.get_value(
                                  'beta_grid_size'), **common)

        if method == 'method2':
            return ci_method2(panel, model, effect, alpha, gamma,
                              estimator=estimator, shuffle_seed=shuffle_seed,
                              **common)

        return tradeoff_search_method2(
            panel, model, effect, config.get_value('c_total'),
            estimator=estimator, shuffle_seed=shuffle_seed, **common)
