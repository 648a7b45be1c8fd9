import numpy as np

from panelbounds.config.settings import FINE_GRID_FACTOR, GRID_POINTS,\
    GRID_RANGE, RC_GRID_POINTS, RC_INTERCEPT_RANGE, RC_SLOPE_RANGE
from panelbounds.lib.exceptions import ArgumentError
from panelbounds.lib.utils import as_finite_array


class HeterogeneityGrid(object):
    """Construction grid of heterogeneity points plus an optional fine grid.

    :param points: Array of shape (G, d) (or (G,) for d = 1).
    :param fine_points: Optional check grid used by two-grid refinement.
    :param description: Record of how the grid was built.
    """

    def __init__(self, points, fine_points=None, description=None):
        self.points = self._as_points(points)

        if fine_points is not None:
            fine_points = self._as_points(fine_points)

            if fine_points.shape[1] != self.dim:
                raise ArgumentError('fine grid dimension differs from grid')

        self.fine_points = fine_points
        self.description = description or {'kind': 'explicit',
                                           'size': self.size}

    @staticmethod
    def _as_points(points):
        points = as_finite_array(points, 'grid points')

        if points.ndim == 1:
            points = points[:, None]

        if points.shape[0] == 0:
            raise ArgumentError('heterogeneity grid is empty')

        points.setflags(write=False)

        return points

    @property
    def size(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]

    @property
    def has_fine(self):
        return self.fine_points is not None

    def fine(self):
        """The fine grid as a grid of its own."""
        if not self.has_fine:
            raise ArgumentError('grid has no fine points')

        return HeterogeneityGrid(self.fine_points, description=dict(
            self.description, level='fine'))

    def with_points(self, points):
        return HeterogeneityGrid(np.vstack([self.points, points]),
                                 self.fine_points)

    @classmethod
    def rectangular(cls, ranges, counts, fine_factor=None):
        """Tensor grid of equidistant points.

        :param ranges: One (lo, hi) pair per heterogeneity component.
        :param counts: Points per component.
        :param fine_factor: If set, also build a fine grid with about
            `fine_factor` times as many points in total.
        """
        def build(sizes):
            axes = [np.linspace(lo, hi, size) for (lo, hi), size in
                    zip(ranges, sizes)]
            mesh = np.meshgrid(*axes, indexing='ij')

            return np.column_stack([m.ravel() for m in mesh])

        counts = [int(c) for c in counts]

        if any(c < 1 for c in counts) or len(counts) != len(ranges):
            raise ArgumentError('grid needs one positive count per range')

        fine = None

        if fine_factor:
            scale = float(fine_factor) ** (1.0 / len(counts))
            fine = build([int(round(c * scale)) for c in counts])

        description = {
            'kind': 'rectangular',
            'ranges': [list(map(float, r)) for r in ranges],
            'counts': counts,
            'fine_factor': fine_factor,
        }

        return cls(build(counts), fine, description)

    @classmethod
    def equidistant(cls, lo, hi, count, fine_factor=None):
        return cls.rectangular([(lo, hi)], [count], fine_factor)

    @classmethod
    def default_for(cls, model, fine_factor=FINE_GRID_FACTOR, points=None):
        """Default grids: 100 points on [-5, 5] for a scalar intercept;
        50 points on [-5, 5] for the intercept and on [-7, 7] for every
        random slope otherwise.
        """
        if model.heterogeneity_dim == 1:
            return cls.equidistant(GRID_RANGE[0], GRID_RANGE[1],
                                   points or GRID_POINTS, fine_factor)

        ranges = [RC_INTERCEPT_RANGE] +\
            [RC_SLOPE_RANGE] * (model.heterogeneity_dim - 1)
        count = points or RC_GRID_POINTS

        return cls.rectangular(ranges, [count] * len(ranges), fine_factor)

    def to_record(self):
        record = dict(self.description, size=self.size,
                      fine_size=self.fine_points.shape[0] if self.has_fine
                      else 0)

        if record.get('kind') != 'rectangular':
            record['points'] = self.points.tolist()

            if self.has_fine:
                record['fine_points'] = self.fine_points.tolist()

        return record

    @classmethod
    def from_record(cls, record):
        if record.get('kind') == 'rectangular':
            return cls.rectangular(record['ranges'], record['counts'],
                                   record.get('fine_factor'))

        if 'points' not in record:
            raise ArgumentError('grid record has neither ranges nor points')

        return cls(record['points'], record.get('fine_points'))
