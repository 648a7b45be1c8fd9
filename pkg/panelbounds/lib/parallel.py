"""Worker pool helpers.

Work is fanned out with joblib when async processing is on and run inline
otherwise. Results always come back in task order.
"""
import logging
import os

from joblib import Parallel, delayed


ASYNC_FLAG = 'PANELBOUNDS_ASYNC_OFF'
THREADS_ENV = 'PANELBOUNDS_THREADS'

LOGGER = logging.getLogger(__name__)


def is_async():
    return not os.getenv(ASYNC_FLAG)


def set_async(on):
    if on:
        if not is_async():
            del os.environ[ASYNC_FLAG]
    else:
        os.environ[ASYNC_FLAG] = 'True'


def default_threads():
    """Return the worker count from the environment, else all cores."""
    threads = os.getenv(THREADS_ENV)

    if threads:
        try:
            return max(1, int(threads))
        except ValueError:
            LOGGER.warning('ignoring non-integer %s=%r', THREADS_ENV, threads)

    return os.cpu_count() or 1


def map_async(function, tasks, threads=None, backend='loky'):
    """Potentially asynchronously map `function` over `tasks`.

    :param function: The function to call on each task.
    :param tasks: An iterable of argument tuples.
    :param threads: Number of workers, defaults to `default_threads()`.
    :param backend: The joblib backend.

    :returns: A list of results in the order of `tasks`.
    """
    tasks = list(tasks)
    threads = threads or default_threads()

    if is_async() and threads > 1 and len(tasks) > 1:
        LOGGER.debug('dispatching %d tasks to %d workers', len(tasks), threads)
        return Parallel(n_jobs=threads, backend=backend)(
            delayed(function)(*args) for args in tasks)

    return [function(*args) for args in tasks]
