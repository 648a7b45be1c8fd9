from panelbounds.config.settings import BOUND_TOL
from panelbounds.controllers.abstract_controller import AbstractController
from panelbounds.core.bounds import verify_bound_condition
from panelbounds.lib.exceptions import ConfigError
from panelbounds.lib.io import read_record
from panelbounds.models.bound_function import BoundFunction
from panelbounds.models.effect import Effect
from panelbounds.models.grid import HeterogeneityGrid
from panelbounds.models.model_spec import ModelSpec


class Validate(AbstractController):

    def validate_bounds(self, config):
        """Check a dumped bound function on a grid.

        The grid keys choose the check grid when `grid_points` is set;
        otherwise the construction grid of the record is used, at its fine
        level when it has one.
        """
        path = config.get_value('bound_function')

        if path is None:
            raise ConfigError('bound_function', 'a bound-function record is '
                              'required')

        record = read_record(path)
        model = ModelSpec.create(**record['model'])
        effect = Effect.from_record(record['effect'])
        bf = BoundFunction.from_record(record['bound_function'])

        if bf.z is None:
            raise ConfigError('bound_function', 'record has no conditioning '
                              'value')

        if config.get_value('grid_points'):
            grid = self._grid(config, model)
        else:
            grid = HeterogeneityGrid.from_record(bf.grid)

            if grid.has_fine:
                grid = grid.fine()

        violation = verify_bound_condition(bf, model, effect, bf.z, bf.betas,
                                           grid)

        return {
            'max_violation': violation,
            'holds': violation <= BOUND_TOL,
            'tolerance': BOUND_TOL,
            'grid_size': grid.size,
            'refined': bf.refined,
            'capped': bf.capped,
        }
