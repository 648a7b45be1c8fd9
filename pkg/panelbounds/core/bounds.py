"""Bound-function construction.

For one conditioning value z the bound program chooses class values
(ell, u) with b_min <= ell <= u <= b_max such that, at every grid point a
and every anchor beta,

    sum_y ell(y) f(y|z,a;beta) <= m(z,a,beta) <= sum_y u(y) f(y|z,a;beta),

while minimizing either the prior-weighted expected width (baseline) or
its maximum over the grid (uniform).
"""
import logging
import threading

import numpy as np

from panelbounds.config.settings import BOUND_TOL, Z_DECIMALS
from panelbounds.core.reduction import identity_partition, outcome_classes
from panelbounds.core.simplex import LinearProgram, solve_lp
from panelbounds.lib.exceptions import ArgumentError, SolverError
from panelbounds.lib.parallel import map_async
from panelbounds.lib.utils import quantize
from panelbounds.models.bound_function import BoundFunction
from panelbounds.models.grid import HeterogeneityGrid


LOGGER = logging.getLogger(__name__)


def default_objective(model):
    """Uniform for fixed-effect models, baseline for random-coefficient
    dynamic logit, where the uniform program is too conservative."""
    if model.family == 'random_coef_dynamic':
        return BoundFunction.OBJECTIVE_BASELINE

    return BoundFunction.OBJECTIVE_UNIFORM


def as_beta_set(model, betas):
    """Parameter set as a (B, dim beta) array, each row checked.

    Random-coefficient families carry no common parameter; their set is a
    single empty row.
    """
    if model.beta_dim == 0:
        rows = np.shape(betas)[0] if np.ndim(betas) == 2 else 1
        return np.zeros((max(rows, 1), 0))

    if betas is None:
        raise ArgumentError('%s needs a common parameter' % model.family)

    betas = np.asarray(betas, dtype=float)

    if betas.ndim < 2:
        betas = betas.reshape(1, -1)

    if betas.shape[0] < 1:
        raise ArgumentError('need at least one anchor beta')

    return np.array([model.check_beta(b) for b in betas]).reshape(
        betas.shape[0], model.beta_dim)


def _points(grid):
    return grid.points if isinstance(grid, HeterogeneityGrid) else\
        HeterogeneityGrid(grid).points


def class_matrix(classes, n_patterns):
    """Membership matrix of shape (n_patterns, n_classes)."""
    matrix = np.zeros((n_patterns, len(classes)))

    for c, members in enumerate(classes):
        matrix[members, c] = 1.0

    return matrix


class BoundProgram(object):
    """A bound `LinearProgram` plus its variable map.

    Variables are ordered ell_1..ell_C, u_1..u_C and, for the uniform
    objective, the auxiliary width s.
    """

    def __init__(self, lp, classes, objective, betas, grid_size):
        self.lp = lp
        self.classes = classes
        self.objective = objective
        self.betas = betas
        self.grid_size = grid_size

    @property
    def n_classes(self):
        return len(self.classes)

    @property
    def ell_slice(self):
        return slice(0, self.n_classes)

    @property
    def u_slice(self):
        return slice(self.n_classes, 2 * self.n_classes)

    @property
    def s_index(self):
        return 2 * self.n_classes if\
            self.objective == BoundFunction.OBJECTIVE_UNIFORM else None


def build_bound_program(model, effect, z, betas, grid,
                        objective=BoundFunction.OBJECTIVE_UNIFORM, prior=None,
                        classes=None, beta_box=None):
    """Assemble the bound program for one conditioning value.

    :param model: The `ModelSpec`.
    :param effect: An `Effect` with a known range.
    :param z: The `ConditioningValue`.
    :param betas: One parameter vector or a set of them, shape (B, dim).
    :param grid: A `HeterogeneityGrid` or array of points.
    :param objective: 'baseline' or 'uniform'.
    :param prior: Baseline weights p(a|z) per grid point, default 1.
    :param classes: Outcome partition; defaults to the full outcome space.
    :param beta_box: Optional (lo, hi); betas outside it are rejected.

    :returns: A `BoundProgram`.
    """
    if not effect.has_range:
        raise ArgumentError('effect has no range; resolve it first')

    if objective not in BoundFunction.OBJECTIVES:
        raise ArgumentError('unknown objective %r' % objective)

    betas = as_beta_set(model, betas)
    points = _points(grid)

    if beta_box is not None:
        lo, hi = [np.asarray(side, dtype=float) for side in beta_box]

        if np.any(betas < lo - 1e-12) or np.any(betas > hi + 1e-12):
            raise ArgumentError('anchor betas lie outside the parameter box')

    if classes is None:
        classes = identity_partition(model.T)

    G, C = points.shape[0], len(classes)
    membership = class_matrix(classes, model.n_outcomes)
    uniform = objective == BoundFunction.OBJECTIVE_UNIFORM
    n_vars = 2 * C + int(uniform)

    rows = [np.hstack([np.eye(C), -np.eye(C), np.zeros((C, n_vars - 2 * C))])]
    rhs = [np.zeros(C)]

    for beta in betas:
        probs = model.prob_matrix(z, points, beta).dot(membership)
        m = effect.values(model, z, points, beta)
        zeros = np.zeros((G, C))
        pad = np.zeros((G, n_vars - 2 * C))

        rows.append(np.hstack([probs, zeros, pad]))
        rhs.append(m)
        rows.append(np.hstack([zeros, -probs, pad]))
        rhs.append(-m)

    beta_bar = betas.mean(axis=0)
    center = model.prob_matrix(z, points, beta_bar).dot(membership)

    if uniform:
        rows.append(np.hstack([-center, center, -np.ones((G, 1))]))
        rhs.append(np.zeros(G))
        c = np.zeros(n_vars)
        c[-1] = 1.0
    else:
        weights = np.ones(G) if prior is None else\
            np.asarray(prior, dtype=float).ravel()

        if weights.size != G or np.any(weights < 0):
            raise ArgumentError('prior needs %d nonnegative weights' % G)

        width = weights.dot(center)
        c = np.concatenate([-width, width])

    var_bounds = [(effect.b_min, effect.b_max)] * (2 * C)
    names = ['ell_%d' % i for i in range(C)] + ['u_%d' % i for i in range(C)]

    if uniform:
        var_bounds.append((-np.inf, np.inf))
        names.append('s')

    lp = LinearProgram(c, np.vstack(rows), np.concatenate(rhs),
                       var_bounds=var_bounds, names=names)

    return BoundProgram(lp, classes, objective, betas, G)


def solve_bound_function(model, effect, z, betas, grid,
                         objective=BoundFunction.OBJECTIVE_UNIFORM,
                         prior=None, reduce=True, refine=False,
                         method='simplex', z_index=None):
    """Solve the bound program for z and return its `BoundFunction`.

    :param reduce: Use sufficient-statistic classes when available.
    :param refine: Shift the result to hold on `grid.fine_points`.
    :param method: LP method passed to `solve_lp`.
    :param z_index: Index reported in solver errors.

    :raises: `SolverError` if the program does not reach an optimum.
    """
    betas = as_beta_set(model, betas)
    classes, reduced = outcome_classes(model, z, betas, reduce)
    program = build_bound_program(model, effect, z, betas, grid, objective,
                                  prior, classes)
    solution = solve_lp(program.lp, method=method)

    if not solution.is_optimal:
        raise SolverError('bound program ended with status %s' %
                          solution.status, solution.status, z_index)

    v = solution.v
    ell = np.clip(v[program.ell_slice], effect.b_min, effect.b_max)
    u = np.clip(v[program.u_slice], effect.b_min, effect.b_max)
    u = np.maximum(u, ell)

    grid_record = grid.to_record() if isinstance(grid, HeterogeneityGrid)\
        else {'kind': 'explicit', 'points': np.asarray(grid).tolist()}
    bf = BoundFunction(model.T, classes, ell, u, betas, objective, z,
                       grid_record, objective_value=solution.objective,
                       effect_range=(effect.b_min, effect.b_max))

    if refine and isinstance(grid, HeterogeneityGrid) and grid.has_fine:
        bf = refine_to_fine_grid(bf, model, effect, z, betas,
                                 grid.fine_points)

    return bf


def _deviations(bf, model, effect, z, betas, points):
    """Per-beta (m - P ell, m - P u) on `points`."""
    membership = class_matrix(bf.classes, model.n_outcomes)
    lower, upper = [], []

    for beta in as_beta_set(model, betas):
        probs = model.prob_matrix(z, points, beta).dot(membership)
        m = effect.values(model, z, points, beta)
        lower.append(m - probs.dot(bf.ell))
        upper.append(m - probs.dot(bf.u))

    return np.concatenate(lower), np.concatenate(upper)


def verify_bound_condition(bf, model, effect, z, betas, grid):
    """Largest violation of the bound condition over grid x betas.

    :returns: max of (sum ell f - m) and (m - sum u f); a value <= 0 means
        the condition holds everywhere.
    """
    lower, upper = _deviations(bf, model, effect, z, betas, _points(grid))

    return float(max(np.max(-lower), np.max(upper)))


def refine_to_fine_grid(bf, model, effect, z, betas, fine):
    """Shift ell down and u up by the worst violation on the fine grid.

    When a shifted value leaves [b_min, b_max] it is clamped to the box; if
    the clamped side still violates the condition it falls back to the
    constant b_min (or b_max). The result is flagged `capped`.
    """
    points = _points(fine)
    lower, upper = _deviations(bf, model, effect, z, betas, points)
    ell = bf.ell + min(0.0, float(lower.min()))
    u = bf.u + max(0.0, float(upper.max()))

    b_min, b_max = effect.b_min, effect.b_max
    capped = bool(np.any(ell < b_min) or np.any(u > b_max))

    if capped:
        ell = np.maximum(ell, b_min)
        u = np.minimum(u, b_max)
        trial = bf.shifted(ell, u, True)
        lower, upper = _deviations(trial, model, effect, z, betas, points)

        if lower.min() < -BOUND_TOL:
            ell = np.full_like(ell, b_min)

        if upper.max() > BOUND_TOL:
            u = np.full_like(u, b_max)

        LOGGER.warning('refinement shift capped at the effect range for %r',
                       z)

    return bf.shifted(ell, u, capped)


def _solve_task(model, effect, z, betas, grid, objective, prior, reduce,
                refine, method, z_index):
    return solve_bound_function(model, effect, z, betas, grid, objective,
                                prior, reduce, refine, method, z_index)


class BoundBuilder(object):
    """Builds bound functions for one model, effect and grid.

    Identical conditioning values (after rounding to 12 decimals) with
    identical anchor sets share one solved function. The cache is safe to
    use from several threads.
    """

    def __init__(self, model, effect, grid, objective=None, prior=None,
                 reduce=True, refine=False, method='simplex', threads=None):
        self.model = model
        self.effect = effect
        self.grid = grid
        self.objective = objective or default_objective(model)
        self.prior = prior
        self.reduce = reduce
        self.refine = refine
        self.method = method
        self.threads = threads
        self._cache = {}
        self._lock = threading.Lock()

    def _key(self, z, betas):
        return (z.key(Z_DECIMALS), quantize(betas, Z_DECIMALS))

    @property
    def cache_size(self):
        return len(self._cache)

    def get(self, z, betas, z_index=None):
        betas = as_beta_set(self.model, betas)
        key = self._key(z, betas)

        with self._lock:
            bf = self._cache.get(key)

        if bf is None:
            bf = solve_bound_function(
                self.model, self.effect, z, betas, self.grid, self.objective,
                self.prior, self.reduce, self.refine, self.method, z_index)

            with self._lock:
                bf = self._cache.setdefault(key, bf)

        return bf

    def build_many(self, requests):
        """Solve (z, betas, z_index) requests, fanning uncached ones out.

        :returns: Bound functions in request order.
        """
        requests = [(z, as_beta_set(self.model, betas), z_index)
                    for z, betas, z_index in requests]
        missing, seen = [], set()

        for z, betas, z_index in requests:
            key = self._key(z, betas)

            if key not in self._cache and key not in seen:
                seen.add(key)
                missing.append((self.model, self.effect, z, betas, self.grid,
                                self.objective, self.prior, self.reduce,
                                self.refine, self.method, z_index))

        if missing:
            LOGGER.debug('solving %d bound programs', len(missing))
            solved = map_async(_solve_task, missing, self.threads)

            with self._lock:
                for task, bf in zip(missing, solved):
                    self._cache.setdefault(self._key(task[2], task[3]), bf)

        return [self.get(z, betas, z_index) for z, betas, z_index in requests]

    def evaluate_panel(self, panel, betas_for_units):
        """Per-unit (L_i, U_i) for a panel.

        :param panel: The `PanelDataset`.
        :param betas_for_units: Function from unit index to its anchor
            parameter set.

        :returns: ``(L, U, functions)`` where `functions[g]` is the bound
            function of each distinct (z, betas) group in order of first
            appearance.
        """
        first, inverse = panel.distinct_conditioning(Z_DECIMALS)
        groups = {}
        requests = []
        unit_group = np.empty(panel.n, dtype=int)

        for i in range(panel.n):
            betas = as_beta_set(self.model, betas_for_units(i))
            key = (int(inverse[i]), quantize(betas, Z_DECIMALS))

            if key not in groups:
                groups[key] = len(requests)
                rep = first[inverse[i]]
                requests.append((panel.conditioning_value(rep), betas, rep))

            unit_group[i] = groups[key]

        functions = self.build_many(requests)
        L = np.empty(panel.n)
        U = np.empty(panel.n)

        for g, bf in enumerate(functions):
            members = np.flatnonzero(unit_group == g)
            L[members], U[members] = bf.evaluate(panel.y[members])

        return L, U, functions
