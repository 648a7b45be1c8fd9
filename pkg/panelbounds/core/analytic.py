"""Closed-form outer bounds for a binary treatment under stationarity.

These need no model for A_i beyond stationarity of Y_it given (X_it, A_i)
and serve as a benchmark for the linear-programming bounds.
"""
import numpy as np

from panelbounds.lib.exceptions import ArgumentError


def _binary_matrix(values, name):
    values = np.atleast_2d(np.asarray(values, dtype=float))

    if not np.all((values == 0) | (values == 1)):
        raise ArgumentError('%s must be binary' % name)

    return values


def analytic_panel_bounds(x, y):
    """Analytic (L, U) for every row of (n, T) binary matrices x and y.

    With v(d) = 1 if x_t = d in some period and Ybar(d) the mean outcome over
    those periods (0 if there are none):

        L = v(1) Ybar(1) - v(0) Ybar(0) - [1 - v(0)]
        U = v(1) Ybar(1) - v(0) Ybar(0) + [1 - v(1)]
    """
    x = _binary_matrix(x, 'x')
    y = _binary_matrix(y, 'y')

    if x.shape != y.shape:
        raise ArgumentError('x has shape %s but y has shape %s' % (
            x.shape, y.shape))

    treated = x.sum(axis=1)
    untreated = x.shape[1] - treated
    v1 = (treated > 0).astype(float)
    v0 = (untreated > 0).astype(float)
    ybar1 = (x * y).sum(axis=1) / np.maximum(treated, 1)
    ybar0 = ((1 - x) * y).sum(axis=1) / np.maximum(untreated, 1)
    center = v1 * ybar1 - v0 * ybar0

    return center - (1 - v0), center + (1 - v1)


def analytic_stationary_bounds(x, y):
    """Analytic (L, U) for one unit's binary covariate and outcome vectors.

    >>> analytic_stationary_bounds([1, 0], [1, 0])
    (1.0, 1.0)
    """
    x = np.asarray(x).ravel()
    y = np.asarray(y).ravel()
    lower, upper = analytic_panel_bounds(x[None, :], y[None, :])

    return float(lower[0]), float(upper[0])
