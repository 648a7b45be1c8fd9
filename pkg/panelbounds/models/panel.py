import numpy as np
import pandas as pd

from panelbounds.lib.exceptions import ArgumentError
from panelbounds.models.model_spec import ConditioningValue


class PanelDataset(object):
    """A balanced binary-outcome panel of n units over T periods.

    :param y: Outcomes, shape (n, T), entries 0 or 1.
    :param x: Covariates, shape (n, T, K) or (n, T) for K = 1.
    :param y0: Optional initial outcomes, shape (n,).
    :param ids: Optional unit identifiers in row order.
    """

    def __init__(self, y, x, y0=None, ids=None):
        y = np.asarray(y)
        x = np.asarray(x, dtype=float)

        if y.ndim != 2:
            raise ArgumentError('y must be an n x T matrix')

        if x.ndim == 2:
            x = x[:, :, None]

        if x.shape[:2] != y.shape:
            raise ArgumentError('x has shape %s but y has shape %s' % (
                x.shape, y.shape))

        if not np.all((y == 0) | (y == 1)):
            raise ArgumentError('y must be binary')

        if not np.all(np.isfinite(x)):
            raise ArgumentError('x has missing or non-finite cells')

        self.y = y.astype(int)
        self.x = x

        if y0 is not None:
            y0 = np.asarray(y0).ravel()

            if y0.size != self.n or not np.all((y0 == 0) | (y0 == 1)):
                raise ArgumentError('y0 must be a binary vector of length n')

            y0 = y0.astype(int)

        self.y0 = y0
        self.ids = list(ids) if ids is not None else list(range(1, self.n + 1))

        for array in (self.y, self.x) + ((self.y0,) if y0 is not None
                                          else ()):
            array.setflags(write=False)

    @property
    def n(self):
        return self.y.shape[0]

    @property
    def T(self):
        return self.y.shape[1]

    @property
    def K(self):
        return self.x.shape[2]

    @property
    def has_initial(self):
        return self.y0 is not None

    def conditioning_value(self, i):
        return ConditioningValue(self.x[i],
                                 None if self.y0 is None else self.y0[i])

    def subset(self, index):
        index = np.asarray(index, dtype=int)

        return PanelDataset(self.y[index], self.x[index],
                            None if self.y0 is None else self.y0[index],
                            [self.ids[i] for i in index])

    def distinct_conditioning(self, decimals):
        """Group units by conditioning value rounded to `decimals` digits.

        :returns: ``(representatives, inverse)`` where `representatives` are
            the row indices of the first unit of each group (in order of
            first appearance) and `inverse[i]` is the group of unit i.
        """
        keys = np.round(self.x.reshape(self.n, -1), decimals) + 0.0

        if self.y0 is not None:
            keys = np.column_stack([keys, self.y0])

        _, first, inverse = np.unique(keys, axis=0, return_index=True,
                                      return_inverse=True)
        order = np.argsort(first, kind='stable')
        rank = np.empty_like(order)
        rank[order] = np.arange(order.size)

        return first[order], rank[np.ravel(inverse)]

    def to_frame(self):
        """Long-format DataFrame with columns id, t, y, x1..xK[, y0]."""
        n, T, K = self.n, self.T, self.K
        frame = pd.DataFrame({
            'id': np.repeat(self.ids, T),
            't': np.tile(np.arange(1, T + 1), n),
            'y': self.y.ravel(),
        })

        for k in range(K):
            frame['x%d' % (k + 1)] = self.x[:, :, k].ravel()

        if self.y0 is not None:
            frame['y0'] = np.repeat(self.y0, T)

        return frame

    def __repr__(self):
        return 'PanelDataset(n=%d, T=%d, K=%d, initial=%s)' % (
            self.n, self.T, self.K, self.has_initial)
