import itertools

import numpy as np

from panelbounds.lib.exceptions import ArgumentError


def parse_int(value, default=None):
    return _parse_type(int, value, default)


def parse_float(value, default=None):
    return _parse_type(float, value, default)


def _parse_type(_type, value, default):
    try:
        return _type(value)
    except (TypeError, ValueError):
        return default


def is_float_nan(num):
    """Return True is `num` is a float and NaN."""
    return isinstance(num, float) and np.isnan(num)


def outcome_patterns(T):
    """All binary outcome vectors of length `T` as a (2^T, T) int array.

    Rows are in lexicographic order, so row index equals the binary number
    read with period 1 as the most significant digit.
    """
    return np.array(list(itertools.product((0, 1), repeat=T)), dtype=int)\
        .reshape(-1, T)


def pattern_index(y):
    """Row index of outcome vector `y` in `outcome_patterns(len(y))`."""
    index = 0

    for value in y:
        index = 2 * index + int(value)

    return index


def as_finite_array(value, name, ndim=None, dtype=float):
    """Convert to a numpy array and check all entries are finite.

    :raises: `ArgumentError` if any entry is NaN or infinite, or the
        dimension does not match `ndim`.
    """
    array = np.asarray(value, dtype=dtype)

    if ndim is not None and array.ndim != ndim:
        raise ArgumentError('%s must have %d dimensions, got shape %s' % (
            name, ndim, array.shape))

    if not np.all(np.isfinite(array)):
        raise ArgumentError('%s has non-finite entries' % name)

    return array


def quantize(array, decimals):
    """Hashable key for an array rounded to `decimals` digits."""
    array = np.round(np.asarray(array, dtype=float), decimals) + 0.0
    return (array.shape, array.tobytes())
