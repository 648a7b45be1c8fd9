from panelbounds.config.run_config import KEYS, SUBCOMMAND_KEYS, to_bool
from panelbounds.controllers.bounds import Bounds
from panelbounds.controllers.idset import IdSet
from panelbounds.controllers.inference import Inference
from panelbounds.controllers.simulations import Simulations
from panelbounds.controllers.validate import Validate
from panelbounds.controllers.version import Version

# define routes as tuples:
# (subcommand, controller, action, help)
ROUTES = [
    ('bounds', 'bounds', 'estimate',
        'outer bounds from a panel CSV'),
    ('infer', 'inference', 'interval',
        'confidence intervals from a panel CSV'),
    ('idset', 'idset', 'identified_set',
        'sharp identified set from a table, a panel or a design'),
    ('simulate', 'simulations', 'simulate',
        'replications of a pipeline on a simulation design'),
    ('sweep', 'simulations', 'sweep',
        'replications over values of a design parameter'),
    ('true-effect', 'simulations', 'true_effect',
        'true average effect of a design'),
    ('validate-bounds', 'validate', 'validate_bounds',
        'check the bound condition of a dumped bound function'),
    ('version', 'version', 'index',
        'library version'),
]

LIST_KEYS = ('effects', 'beta', 'params', 'values')


def _flag(key):
    return '--%s' % key.replace('_', '-')


def _add_key(parser, key):
    coerce, default, help_text = KEYS[key]
    kwargs = {'dest': key, 'default': None, 'help': help_text}

    if key in LIST_KEYS:
        kwargs['action'] = 'append'
    elif coerce is to_bool:
        kwargs.update(nargs='?', const='true', metavar='BOOL')

    parser.add_argument(_flag(key), **kwargs)


def connect_routes(subparsers, parents=()):
    """Attach one subparser per route, with a flag per config key.

    The chosen controller instance and action name are stored in the parsed
    namespace as `controller` and `action`.
    """
    # controller instances map
    controllers = {
        'bounds': Bounds(),
        'inference': Inference(),
        'idset': IdSet(),
        'simulations': Simulations(),
        'validate': Validate(),
        'version': Version(),
    }

    for subcommand, controller, action, help_text in ROUTES:
        parser = subparsers.add_parser(subcommand, help=help_text,
                                       parents=list(parents))

        for key in SUBCOMMAND_KEYS[subcommand]:
            _add_key(parser, key)

        parser.set_defaults(subcommand=subcommand,
                            controller=controllers[controller],
                            action=action)
