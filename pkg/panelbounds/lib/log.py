import logging
import sys


LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def configure(verbosity=0, stream=None):
    """Attach one stderr handler to the package logger.

    Verbosity 0 shows warnings, 1 info and 2 or more debug messages; a
    negative verbosity shows errors only. Called once by the command line.
    """
    if verbosity < 0:
        level = logging.ERROR
    else:
        level = (logging.WARNING, logging.INFO)[verbosity] if verbosity < 2\
            else logging.DEBUG

    logger = logging.getLogger('panelbounds')
    logger.setLevel(level)

    for handler in list(logger.handlers):
        logger.removeHandler(handler)

    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(handler)
    logger.propagate = False

    return logger
