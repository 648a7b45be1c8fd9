"""Sufficient-statistic partitions of the outcome space.

Under a logit kernel, f(y | z, a; beta) depends on y only through
(sum_t y_t, sum_t y_t x_t) once z and beta are fixed, so patterns sharing
those values can share one (ell, u) pair in every bound program.
"""
from collections import OrderedDict
import logging

import numpy as np

from panelbounds.config.settings import Z_DECIMALS
from panelbounds.lib.exceptions import UnsupportedReductionError


LOGGER = logging.getLogger(__name__)


def identity_partition(T):
    return [[i] for i in range(2 ** T)]


def _partition(outcomes, statistics):
    keys = np.column_stack([outcomes.sum(axis=1), statistics])
    keys = np.round(keys, Z_DECIMALS) + 0.0
    groups = OrderedDict()

    for index in np.lexsort(keys.T[::-1]):
        groups.setdefault(tuple(keys[index]), []).append(int(index))

    return [sorted(members) for members in groups.values()]


def reduce_by_sufficient_statistic(model, z, betas=None):
    """Partition 2^T outcome patterns into sufficient-statistic classes.

    :param model: The `ModelSpec`.
    :param z: The `ConditioningValue`.
    :param betas: Parameter set the partition must be valid for; only
        needed for dynamic models, where reduction requires gamma = 0.

    :raises: `UnsupportedReductionError` for probit links, dynamic kernels
        with a nonzero lag coefficient, random-coefficient models with a
        non-binary covariate and random-coefficient dynamic models.

    :returns: A list of classes, each a sorted list of pattern indices,
        ordered by (sum_t y_t, sum_t y_t x_t).
    """
    if not model.is_logit:
        raise UnsupportedReductionError(
            'sufficient-statistic reduction needs a logit link')

    outcomes = model.outcomes
    statistics = outcomes.dot(z.x)

    if model.family == 'static_binary':
        return _partition(outcomes, statistics)

    if model.family == 'dynamic_binary':
        betas = np.atleast_2d(betas) if betas is not None else None

        if betas is None or np.any(betas[:, 0] != 0):
            raise UnsupportedReductionError(
                'dynamic kernel does not factorize when gamma != 0')

        return _partition(outcomes, statistics)

    if model.family == 'random_coef_static':
        if not np.all((z.x == 0) | (z.x == 1)):
            raise UnsupportedReductionError(
                'random-coefficient reduction needs binary covariates')

        return _partition(outcomes, statistics)

    raise UnsupportedReductionError('no reduction for %s' % model.family)


def outcome_classes(model, z, betas, reduce=True):
    """Reduced classes when available, else the identity partition.

    :returns: ``(classes, reduced)``.
    """
    if reduce:
        try:
            return reduce_by_sufficient_statistic(model, z, betas), True
        except UnsupportedReductionError as err:
            LOGGER.debug('using full outcome space: %s', err)

    return identity_partition(model.T), False
