from panelbounds.controllers.abstract_controller import AbstractController
from panelbounds.core.idset import ChoiceProbTable, estimated_choice_probs,\
    population_choice_probs, population_outer_bounds, sharp_idset
from panelbounds.lib.exceptions import ConfigError
from panelbounds.lib.io import read_table, write_table
from panelbounds.models.model_spec import ModelSpec


class IdSet(AbstractController):

    def identified_set(self, config):
        """Sharp identified set from a probability table, a panel or a
        simulation design.

        For a design the population outer bounds on the same grid are
        reported alongside.
        """
        dgp, outer = None, None

        if config.get_value('table'):
            table = ChoiceProbTable.from_frame(read_table(
                config.get_value('table')))
            z = table.support[0]
            model = ModelSpec.create(config.get_value('model'), z.T, z.K,
                                     config.get_value('link'))
        elif config.get_value('panel'):
            panel = self._panel(config)
            model = self._model(config, panel)
            table = estimated_choice_probs(
                panel, config.get_value('min_cell_count'),
                check_discrete=not config.get_value('allow_continuous'))
        else:
            dgp = self._dgp(config)
            model = dgp.model
            table = population_choice_probs(dgp, self._beta(config, model))

        beta = self._beta(config, model)

        if beta is None and dgp is not None:
            beta = dgp.beta0

        if beta is None and model.beta_dim:
            raise ConfigError('beta', 'the identified set needs beta')

        effect = self._effects(config, model, default=None if dgp is None
                               else dgp.default_effect())[0]
        grid = self._grid(config, model)
        idset = sharp_idset(table, model, effect, beta, grid,
                            config.get_value('slack'),
                            config.get_value('escalate'),
                            config.get_value('fallback'),
                            config.get_value('lp_method'),
                            config.get_value('threads'))

        if dgp is not None:
            lower, upper = population_outer_bounds(
                table, model, effect, beta, grid,
                config.get_value('objective'), config.get_value('refine'),
                config.get_value('lp_method'), config.get_value('threads'))
            outer = {'lower': lower, 'upper': upper}

        if config.get_value('table_out'):
            write_table(table.to_frame(), config.get_value('table_out'))

        return {
            'model': model.to_record(),
            'effect': effect.to_record(),
            'grid': grid.to_record(),
            'table': {'source': table.source, 'cells': table.size,
                      'thin_cells': table.thin,
                      'warnings': table.warnings},
            'identified_set': idset.to_record(),
            'population_outer_bounds': outer,
            'design': None if dgp is None else dgp.to_record(),
        }
