"""Sharp identified set and the choice-probability tables it starts from.

For each conditioning value z the identified set of the conditional mean
effect is the range of sum_a m(z,a,beta0) pi_a over heterogeneity
distributions pi on the grid whose implied outcome probabilities match
p(.|z) within a slack. Aggregating with the weights w(z) gives
[L_id, U_id].
"""
import logging

import numpy as np
import pandas as pd

from panelbounds.config.settings import DISCRETE_CARDINALITY, IDSET_MAX_SLACK,\
    IDSET_SLACK, IDSET_SLACK_FACTOR, MIN_CELL_COUNT, QUADRATURE_NODES,\
    Z_DECIMALS
from panelbounds.core.bounds import BoundBuilder, as_beta_set
from panelbounds.core.simplex import LinearProgram, LpStatus, solve_lp
from panelbounds.lib.exceptions import ArgumentError, InfeasibleSlackError,\
    SolverError
from panelbounds.lib.parallel import map_async
from panelbounds.lib.utils import outcome_patterns
from panelbounds.models.grid import HeterogeneityGrid
from panelbounds.models.model_spec import ConditioningValue
from panelbounds.models.results import IdentifiedSet, Result


LOGGER = logging.getLogger(__name__)

PROB_TOL = 1e-10
FALLBACK_MARGIN = 1e-9


def _pattern_label(pattern):
    return 'p_' + ''.join(str(int(v)) for v in pattern)


class ChoiceProbTable(Result):
    """Outcome probabilities p(y|z) on a finite set of conditioning values.

    :param support: List of `ConditioningValue`.
    :param weights: w(z), nonnegative and summing to one.
    :param probs: Array (Z, 2^T); each row a probability vector.
    :param counts: Optional cell counts for estimated tables.
    :param thin: Indices of cells below the minimum count.
    """

    def __init__(self, support, weights, probs, counts=None, thin=None,
                 source='population', warnings=None):
        Result.__init__(self, warnings)
        self.support = list(support)
        self.weights = np.array(weights, dtype=float).ravel()
        self.probs = np.atleast_2d(np.array(probs, dtype=float))

        if not self.support:
            raise ArgumentError('choice probability table is empty')

        if not (len(self.support) == self.weights.size ==
                self.probs.shape[0]):
            raise ArgumentError('need one weight and one probability row per '
                                'conditioning value')

        if np.any(self.weights < 0) or\
                abs(self.weights.sum() - 1.0) > PROB_TOL:
            raise ArgumentError('weights must be nonnegative and sum to one')

        if np.any(self.probs < -PROB_TOL) or np.any(
                np.abs(self.probs.sum(axis=1) - 1.0) > PROB_TOL):
            raise ArgumentError('every probability row must be nonnegative '
                                'and sum to one')

        self.probs = np.clip(self.probs, 0.0, None)
        self.counts = None if counts is None else\
            np.asarray(counts, dtype=int).ravel()
        self.thin = list(thin or [])
        self.source = source

        for array in (self.weights, self.probs):
            array.setflags(write=False)

    @property
    def size(self):
        return len(self.support)

    @property
    def T(self):
        return self.support[0].T

    def __iter__(self):
        return iter(zip(self.support, self.weights, self.probs))

    def to_frame(self):
        """One row per conditioning value: x, y0, weight, count, p_<y>."""
        rows = []
        labels = [_pattern_label(p) for p in outcome_patterns(self.T)]

        for i, (z, weight, probs) in enumerate(self):
            row = dict(('x%d_t%d' % (k + 1, t + 1), z.x[t, k])
                       for t in range(z.T) for k in range(z.K))
            row.update(zip(labels, probs))
            row.update(y0=z.y0, weight=weight,
                       count=None if self.counts is None else self.counts[i])
            rows.append(row)

        return pd.DataFrame(rows)

    @classmethod
    def from_frame(cls, frame, source='file'):
        labels = sorted(c for c in frame.columns if c.startswith('p_'))
        x_columns = [c for c in frame.columns if c.startswith('x')]

        if not labels or not x_columns:
            raise ArgumentError('table needs x<k>_t<t> and p_<y> columns')

        T = len(labels[0]) - 2
        K = len(x_columns) // T
        ordered = ['x%d_t%d' % (k + 1, t + 1) for t in range(T)
                   for k in range(K)]
        labels = [_pattern_label(p) for p in outcome_patterns(T)]
        missing = set(ordered + labels) - set(frame.columns)

        if missing:
            raise ArgumentError('table lacks columns %s' % sorted(missing))

        support = []

        for _, row in frame.iterrows():
            y0 = row.get('y0')
            y0 = None if y0 is None or pd.isnull(y0) else int(y0)
            support.append(ConditioningValue(
                row[ordered].values.astype(float).reshape(T, K), y0))

        counts = frame['count'].values if 'count' in frame and\
            frame['count'].notnull().all() else None

        return cls(support, frame['weight'].values,
                   frame[labels].values.astype(float), counts, source=source)


def _check_discrete(panel):
    for k in range(panel.K):
        values = np.unique(np.round(panel.x[:, :, k], Z_DECIMALS))

        if values.size > DISCRETE_CARDINALITY:
            raise ArgumentError(
                'covariate x%d takes %d distinct values (more than %d); '
                'frequency tables need discrete covariates' % (
                    k + 1, values.size, DISCRETE_CARDINALITY))


def estimated_choice_probs(panel, min_cell_count=MIN_CELL_COUNT,
                           check_discrete=True):
    """Frequency estimate of p(y|z) on the observed cells of a panel.

    Cells with fewer than `min_cell_count` units are kept and listed in
    `thin`.
    """
    if check_discrete:
        _check_discrete(panel)

    first, inverse = panel.distinct_conditioning(Z_DECIMALS)
    counts = np.bincount(inverse, minlength=len(first))
    weights = np.power(2, np.arange(panel.T - 1, -1, -1))
    patterns = panel.y.dot(weights)
    probs = np.zeros((len(first), 2 ** panel.T))
    np.add.at(probs, (inverse, patterns), 1.0)
    probs /= counts[:, None]

    thin = [int(c) for c in np.flatnonzero(counts < min_cell_count)]
    table = ChoiceProbTable(
        [panel.conditioning_value(i) for i in first], counts / float(panel.n),
        probs, counts, thin, source='estimated')

    if thin:
        table.warn('%d of %d covariate cells have fewer than %d units',
                   len(thin), table.size, min_cell_count)

    return table


def mixture_choice_probs(model, z, beta, nodes, weights):
    """sum_q weights_q f(y | z, node_q; beta) over all patterns."""
    weights = np.asarray(weights, dtype=float).ravel()

    return weights.dot(model.prob_matrix(z, nodes, beta))


def population_choice_probs(dgp, beta0=None, z_values=None,
                            n_nodes=QUADRATURE_NODES):
    """Exact outcome probabilities under a design's heterogeneity law.

    :param z_values: Conditioning values to use; required for designs with
        continuous covariates, whose weights are then proportional to one.

    :raises: `ArgumentError` for a continuous design without `z_values`.
    """
    model = dgp.model
    beta0 = dgp.beta0 if beta0 is None else np.asarray(beta0, dtype=float)
    support = dgp.z_support() if z_values is None else list(z_values)

    if support is None:
        raise ArgumentError('design %s has no finite covariate support; pass '
                            'conditioning values' % dgp.kind)

    probs, masses = [], []

    for z in support:
        nodes, weights, mass = dgp.conditional_nodes(z, n_nodes)
        probs.append(mixture_choice_probs(model, z, beta0, nodes, weights))
        masses.append(1.0 if mass is None or z_values is not None else mass)

    masses = np.array(masses)

    return ChoiceProbTable(support, masses / masses.sum(), probs)


def _feasibility_program(F, p, slack):
    """Rows F pi - p <= slack and p - F pi <= slack, sum pi = 1, pi >= 0."""
    G = F.shape[1]

    return (np.vstack([F, -F]), np.concatenate([p + slack, slack - p]),
            np.ones((1, G)), np.ones(1), [(0.0, np.inf)] * G)


def minimal_feasible_slack(model, z, p, beta0, grid, method='simplex'):
    """Smallest slack at which some pi on the grid reproduces p.

    Solves min t subject to |F pi - p| <= t, pi in the simplex.
    """
    points = grid.points if isinstance(grid, HeterogeneityGrid) else\
        np.atleast_2d(grid)
    F = model.prob_matrix(z, points, beta0).T
    G, Y = points.shape[0], F.shape[0]
    column = -np.ones((Y, 1))
    c = np.zeros(G + 1)
    c[-1] = 1.0
    lp = LinearProgram(
        c, np.vstack([np.hstack([F, column]), np.hstack([-F, column])]),
        np.concatenate([p, -p]), np.hstack([np.ones((1, G)), np.zeros((1, 1))]),
        np.ones(1), [(0.0, np.inf)] * (G + 1))
    solution = solve_lp(lp, method=method)

    if not solution.is_optimal:
        raise SolverError('minimal slack program ended with status %s' %
                          solution.status, solution.status)

    return float(solution.objective)


def _slack_schedule(slack, escalate):
    schedule = [slack]

    while escalate and schedule[-1] * IDSET_SLACK_FACTOR <= IDSET_MAX_SLACK *\
            (1 + 1e-12):
        schedule.append(schedule[-1] * IDSET_SLACK_FACTOR)

    return schedule


def _idset_for_z(model, effect, z, p, beta0, points, slack, escalate,
                 fallback, method, z_index):
    """Return (L_id(z), U_id(z), slack used)."""
    F = model.prob_matrix(z, points, beta0).T
    m = effect.values(model, z, points, beta0)
    schedule = _slack_schedule(slack, escalate)

    if fallback:
        minimal = minimal_feasible_slack(model, z, p, beta0, points, method)

        if minimal > schedule[-1]:
            schedule = [minimal * (1.0 + FALLBACK_MARGIN) + FALLBACK_MARGIN]

    for used in schedule:
        A_ub, b_ub, A_eq, b_eq, bounds = _feasibility_program(F, p, used)
        low = solve_lp(LinearProgram(m, A_ub, b_ub, A_eq, b_eq, bounds),
                       method=method)

        if low.status == LpStatus.INFEASIBLE:
            continue

        high = solve_lp(LinearProgram(-m, A_ub, b_ub, A_eq, b_eq, bounds),
                        method=method)

        if not (low.is_optimal and high.is_optimal):
            raise SolverError('identified-set program ended with status %s' %
                              (low.status if not low.is_optimal else
                               high.status), low.status, z_index)

        return low.objective, -high.objective, used

    raise InfeasibleSlackError(used, minimal_feasible_slack(
        model, z, p, beta0, points, method), z_index)


def sharp_idset(table, model, effect, beta0, grid=None, slack=IDSET_SLACK,
                escalate=True, fallback=False, method='simplex',
                threads=None):
    """[L_id, U_id] for a table of outcome probabilities.

    When the program for some z is infeasible at `slack`, the slack is
    multiplied by 10 up to 1e-3 (unless `escalate` is off) and the
    escalation is recorded as a warning. With `fallback`, cells that stay
    infeasible (typical for frequency estimates from thin cells) use their
    minimal feasible slack instead of raising.

    :returns: An `IdentifiedSet` whose `slack` is the largest slack used.

    :raises: `InfeasibleSlackError` carrying the minimal feasible slack.
    """
    if slack < 0:
        raise ArgumentError('slack must be nonnegative, got %r' % slack)

    effect.check_model(model)
    beta0 = as_beta_set(model, beta0)[0]
    grid = HeterogeneityGrid.default_for(model) if grid is None else grid
    points = model.check_grid(grid.points if isinstance(
        grid, HeterogeneityGrid) else grid)

    results = map_async(_idset_for_z, [
        (model, effect, z, p, beta0, points, slack, escalate, fallback, method,
         i)
        for i, (z, _, p) in enumerate(table)], threads)
    per_z = [(lo, hi) for lo, hi, _ in results]
    used = max(s for _, _, s in results)
    idset = IdentifiedSet(per_z, table.weights, used,
                          warnings=table.warnings)

    if used > slack:
        escalated = sum(1 for _, _, s in results if s > slack)
        idset.warn('feasibility slack escalated to %g for %d of %d '
                   'conditioning values', used, escalated, table.size)

    LOGGER.info('identified set [%.6f, %.6f] over %d conditioning values',
                idset.lower, idset.upper, table.size)

    return idset


def population_outer_bounds(table, model, effect, beta0, grid=None,
                            objective=None, refine=False, method='simplex',
                            threads=None):
    """Expected outer bounds sum_z w(z) sum_y ell(y) p(y|z) and the upper
    analogue, with bound functions anchored at beta0.

    :returns: A pair ``(L, U)``.
    """
    betas = as_beta_set(model, beta0)
    effect = effect.resolve(model, (betas[0], betas[0]))
    grid = HeterogeneityGrid.default_for(model) if grid is None else grid
    builder = BoundBuilder(model, effect, grid, objective, refine=refine,
                           method=method, threads=threads)
    functions = builder.build_many([(z, betas, i) for i, z in
                                    enumerate(table.support)])
    lower = sum(w * bf.ell_by_pattern.dot(p) for bf, (_, w, p) in
                zip(functions, table))
    upper = sum(w * bf.u_by_pattern.dot(p) for bf, (_, w, p) in
                zip(functions, table))

    return float(lower), float(upper)
