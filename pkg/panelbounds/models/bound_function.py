import numpy as np

from panelbounds.lib.exceptions import ArgumentError
from panelbounds.models.model_spec import ConditioningValue


class BoundFunction(object):
    """Outcome-class maps y -> (ell(y), u(y)) for one conditioning value.

    Attributes:

    - OBJECTIVE_BASELINE: prior-weighted expected width objective.
    - OBJECTIVE_UNIFORM: worst-case expected width objective.

    :param T: Number of periods.
    :param classes: Partition of the 2^T pattern indices into outcome
        classes (list of lists of ints).
    :param ell: Lower values per class.
    :param u: Upper values per class.
    :param betas: Anchor parameter set, shape (B, dim beta).
    :param objective: OBJECTIVE_BASELINE or OBJECTIVE_UNIFORM.
    :param z: The `ConditioningValue` the function was built for.
    :param grid: Record of the construction grid.
    :param refined: Whether two-grid refinement was applied.
    :param capped: Whether refinement hit the effect range.
    :param objective_value: Optimal value of the program.
    :param effect_range: The (b_min, b_max) used.
    """
    OBJECTIVE_BASELINE = 'baseline'
    OBJECTIVE_UNIFORM = 'uniform'
    OBJECTIVES = (OBJECTIVE_BASELINE, OBJECTIVE_UNIFORM)

    def __init__(self, T, classes, ell, u, betas, objective, z=None,
                 grid=None, refined=False, capped=False, objective_value=None,
                 effect_range=None):
        self.T = int(T)
        self.classes = [sorted(int(i) for i in members) for members in classes]
        self.ell = np.asarray(ell, dtype=float).ravel()
        self.u = np.asarray(u, dtype=float).ravel()

        if not (len(self.classes) == self.ell.size == self.u.size):
            raise ArgumentError('need one ell and one u value per class')

        self.class_of = np.full(2 ** self.T, -1, dtype=int)

        for c, members in enumerate(self.classes):
            self.class_of[members] = c

        if np.any(self.class_of < 0) or\
                sum(len(m) for m in self.classes) != 2 ** self.T:
            raise ArgumentError('classes do not partition the outcome space')

        if objective not in self.OBJECTIVES:
            raise ArgumentError('objective must be one of %s' % (
                self.OBJECTIVES,))

        self.betas = np.atleast_2d(np.asarray(betas, dtype=float))
        self.objective = objective
        self.z = z
        self.grid = grid
        self.refined = refined
        self.capped = capped
        self.objective_value = objective_value
        self.effect_range = effect_range

    @property
    def n_classes(self):
        return len(self.classes)

    @property
    def ell_by_pattern(self):
        return self.ell[self.class_of]

    @property
    def u_by_pattern(self):
        return self.u[self.class_of]

    def pattern_rows(self, y):
        """Pattern indices of the rows of an (n, T) binary matrix."""
        y = np.atleast_2d(np.asarray(y, dtype=int))
        weights = 2 ** np.arange(self.T - 1, -1, -1)

        return y.dot(weights)

    def evaluate(self, y):
        """Return (L, U) arrays for the rows of `y`."""
        classes = self.class_of[self.pattern_rows(y)]

        return self.ell[classes], self.u[classes]

    def lower(self, y):
        return float(self.evaluate(y)[0][0])

    def upper(self, y):
        return float(self.evaluate(y)[1][0])

    def shifted(self, ell, u, capped):
        return BoundFunction(self.T, self.classes, ell, u, self.betas,
                             self.objective, self.z, self.grid, True, capped,
                             self.objective_value, self.effect_range)

    def to_record(self):
        return {
            'T': self.T,
            'classes': self.classes,
            'ell': self.ell.tolist(),
            'u': self.u.tolist(),
            'betas': self.betas.tolist(),
            'objective': self.objective,
            'z': None if self.z is None else self.z.to_record(),
            'grid': self.grid,
            'refined': self.refined,
            'capped': self.capped,
            'objective_value': self.objective_value,
            'effect_range': None if self.effect_range is None else
            list(self.effect_range),
        }

    @classmethod
    def from_record(cls, record):
        z = record.get('z')
        betas = np.array(record['betas'], dtype=float).reshape(
            len(record['betas']), -1)

        return cls(record['T'], record['classes'], record['ell'],
                   record['u'], betas, record['objective'],
                   None if z is None else ConditioningValue.from_record(z),
                   record.get('grid'), record.get('refined', False),
                   record.get('capped', False),
                   record.get('objective_value'),
                   record.get('effect_range'))

    def __repr__(self):
        return 'BoundFunction(T=%d, classes=%d, objective=%s, refined=%s)' % (
            self.T, self.n_classes, self.objective, self.refined)
