"""Command-line entry point.

    panelbounds <subcommand> [--config FILE] [--output FILE] [-v|-q] [flags]

Every run prints (or writes) one JSON record. The exit code is 0 on
success, 2 for invalid input and 3 for numerical failures.
"""
import argparse
import sys

from panelbounds.config.routes import connect_routes
from panelbounds.config.run_config import RunConfig, SUBCOMMAND_KEYS
from panelbounds.lib import log
from panelbounds.lib.exceptions import ArgumentError, ConfigError
from panelbounds.lib.io import read_record, write_record


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='JSON config file; flags win')
    common.add_argument('--output', help='write the JSON record here')
    common.add_argument('-v', '--verbose', action='count', default=0)
    common.add_argument('-q', '--quiet', action='store_true')

    parser = argparse.ArgumentParser(
        prog='panelbounds',
        description='Outer bounds and confidence intervals for average '
        'effects in fixed-effects binary-choice panels.')
    subparsers = parser.add_subparsers(dest='subcommand')
    subparsers.required = True
    connect_routes(subparsers, [common])

    return parser


def _config(args):
    file_config = {}

    if args.config:
        file_config = read_record(args.config)

        if not isinstance(file_config, dict):
            raise ConfigError('config', 'config file must hold an object')

    flags = dict((key, getattr(args, key, None))
                 for key in SUBCOMMAND_KEYS[args.subcommand])

    return RunConfig.merge(args.subcommand, file_config, flags)


def dispatch(argv, stdout=None):
    """Parse `argv`, run the routed action and emit its record.

    :returns: The exit code.
    """
    stdout = stdout or sys.stdout
    parser = build_parser()

    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return ArgumentError.EXIT_CODE if err.code else 0

    log.configure(-1 if args.quiet else args.verbose)

    try:
        config = _config(args)
    except ArgumentError as err:
        stdout.write(write_record({'status': 'error', 'error': str(err),
                                   'error_type': err.__class__.__name__}))

        return err.EXIT_CODE

    controller = args.controller
    code, record = controller._safe_call(getattr(controller, args.action),
                                         config)
    content = write_record(record, args.output)

    if not args.output:
        stdout.write(content)

    return code


def main():
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == '__main__':
    main()
