import os
import re

import numpy as np
import pandas as pd

from panelbounds.lib.exceptions import ArgumentError, PanelFormatError
from panelbounds.lib.jsontools import dump_record, load_record
from panelbounds.models.panel import PanelDataset


REQUIRED_COLUMNS = ['id', 't', 'y']
X_COLUMN = re.compile(r'^x(\d+)$')


def _read_csv(path):
    try:
        return pd.read_csv(path)
    except (IOError, OSError) as err:
        raise ArgumentError('cannot read %s: %s' % (path, err))
    except (ValueError, pd.errors.ParserError) as err:
        raise PanelFormatError('cannot parse %s: %s' % (path, err))


def _x_columns(frame):
    numbers = sorted(int(X_COLUMN.match(c).group(1)) for c in frame.columns
                     if X_COLUMN.match(str(c)))

    if numbers != list(range(1, len(numbers) + 1)):
        raise PanelFormatError('covariate columns must be x1..xK, got %s' % (
            ['x%d' % k for k in numbers],))

    return ['x%d' % k for k in numbers]


def _first_bad_row(mask):
    """1-based data row of the first True entry."""
    return int(np.flatnonzero(np.asarray(mask))[0]) + 1


def frame_to_panel(frame):
    """Validate a long-format frame and reshape it into a `PanelDataset`.

    Units are ordered by first appearance and periods by t.

    :raises: `PanelFormatError` naming the offending row or unit ids.
    """
    missing = [c for c in REQUIRED_COLUMNS if c not in frame.columns]

    if missing:
        raise PanelFormatError('missing columns %s' % missing)

    x_columns = _x_columns(frame)
    has_initial = 'y0' in frame.columns
    value_columns = ['t', 'y'] + x_columns + (['y0'] if has_initial else [])
    nulls = frame[['id'] + value_columns].isnull().any(axis=1)

    if nulls.any():
        raise PanelFormatError('missing value', row=_first_bad_row(nulls))

    numeric = frame[value_columns].apply(pd.to_numeric, errors='coerce')
    bad = numeric.isnull().any(axis=1)

    if bad.any():
        raise PanelFormatError('non-numeric value', row=_first_bad_row(bad))

    y = numeric['y'].values

    if not np.all((y == 0) | (y == 1)):
        raise PanelFormatError('y must be 0 or 1', row=_first_bad_row(
            (y != 0) & (y != 1)))

    t = numeric['t'].values

    if not np.all(t == np.round(t)) or np.any(t < 1):
        raise PanelFormatError('t must be a positive integer',
                               row=_first_bad_row((t != np.round(t)) |
                                                  (t < 1)))

    if has_initial:
        y0 = numeric['y0'].values

        if not np.all((y0 == 0) | (y0 == 1)):
            raise PanelFormatError('y0 must be 0 or 1', row=_first_bad_row(
                (y0 != 0) & (y0 != 1)))

    frame = pd.concat([frame[['id']], numeric], axis=1)
    duplicated = frame.duplicated(['id', 't'])

    if duplicated.any():
        raise PanelFormatError('duplicate (id, t)',
                               row=_first_bad_row(duplicated),
                               ids=pd.unique(frame['id'][duplicated]))

    ids = pd.unique(frame['id'])
    T = int(frame['t'].max())
    counts = frame.groupby('id', sort=False)['t'].agg(['count', 'max'])
    unbalanced = counts.index[(counts['count'] != T) | (counts['max'] != T)]

    if len(unbalanced):
        raise PanelFormatError('unbalanced panel, expected t = 1..%d' % T,
                               ids=unbalanced)

    if has_initial:
        varying = frame.groupby('id', sort=False)['y0'].nunique()

        if (varying > 1).any():
            raise PanelFormatError('y0 varies within a unit',
                                   ids=varying.index[varying > 1])

    order = pd.Series(np.arange(len(ids)), index=ids)
    frame = frame.assign(_unit=frame['id'].map(order)).sort_values(
        ['_unit', 't'])
    n = len(ids)
    x = frame[x_columns].values.reshape(n, T, len(x_columns))
    y0 = frame['y0'].values.reshape(n, T)[:, 0] if has_initial else None

    return PanelDataset(frame['y'].values.reshape(n, T).astype(int), x, y0,
                        list(ids))


def load_panel_csv(path):
    """Load a long-format panel with columns id, t, y, x1..xK[, y0]."""
    return frame_to_panel(_read_csv(path))


def write_panel_csv(panel, path):
    panel.to_frame().to_csv(path, index=False)


def read_table(path):
    return _read_csv(path)


def write_table(frame, path):
    frame.to_csv(path, index=False)


def read_record(path):
    try:
        with open(path) as f:
            return load_record(f.read())
    except (IOError, OSError) as err:
        raise ArgumentError('cannot read %s: %s' % (path, err))


def write_record(record, path=None):
    """Write a JSON record to `path`, or return it as text when no path."""
    content = dump_record(record)

    if path is None:
        return content

    directory = os.path.dirname(path)

    if directory and not os.path.isdir(directory):
        os.makedirs(directory)

    with open(path, 'w') as f:
        f.write(content)

    return content
