"""Dense linear programs and a two-phase simplex solver.

Programs are stated as::

    minimize    c . v
    subject to  A_ub v <= b_ub
                A_eq v == b_eq
                lo <= v <= hi

Internally equalities become paired inequalities. The solver works on a
dense standard-form tableau and picks whichever of the primal or the dual
standard form gives the smaller tableau: bound programs have a few dozen
variables and thousands of rows (dual form), identified-set programs have
many variables and few rows (primal form).
"""
from itertools import combinations
import logging

import numpy as np
from scipy.optimize import linprog

from panelbounds.config.settings import BLAND_STALL_COUNT, FEAS_TOL, GAP_TOL,\
    MAX_ITER, ORACLE_MAX_SIZE, PIVOT_TOL
from panelbounds.lib.exceptions import ArgumentError


LOGGER = logging.getLogger(__name__)

ORACLE_BOX = 1e7


class LpStatus(object):
    OPTIMAL = 'optimal'
    INFEASIBLE = 'infeasible'
    UNBOUNDED = 'unbounded'
    ITER_LIMIT = 'iter_limit'


class LinearProgram(object):
    """A dense minimization instance.

    :param c: Cost vector of length n.
    :param A_ub: Inequality matrix (m_ub x n), optional.
    :param b_ub: Inequality right-hand side.
    :param A_eq: Equality matrix (m_eq x n), optional.
    :param b_eq: Equality right-hand side.
    :param var_bounds: Sequence of (lo, hi) pairs, +-inf allowed. Defaults to
        free variables.
    :param names: Optional variable names, used by `write_lp_file`.
    """

    def __init__(self, c, A_ub=None, b_ub=None, A_eq=None, b_eq=None,
                 var_bounds=None, names=None):
        self.c = np.asarray(c, dtype=float).ravel()
        n = self.c.size

        self.A_ub, self.b_ub = self._rows(A_ub, b_ub, n, 'A_ub')
        self.A_eq, self.b_eq = self._rows(A_eq, b_eq, n, 'A_eq')

        if var_bounds is None:
            var_bounds = [(-np.inf, np.inf)] * n

        bounds = np.array(var_bounds, dtype=float).reshape(-1, 2)

        if bounds.shape[0] != n:
            raise ArgumentError('var_bounds has %d rows for %d variables' % (
                bounds.shape[0], n))

        self.lo, self.hi = bounds[:, 0].copy(), bounds[:, 1].copy()
        self.names = list(names) if names is not None else [
            'v%d' % j for j in range(n)]

        if np.isnan(self.c).any() or np.isnan(bounds).any():
            raise ArgumentError('linear program has NaN entries')

        if not np.all(np.isfinite(self.c)):
            raise ArgumentError('cost vector must be finite')

        if np.any(self.lo > self.hi):
            raise ArgumentError('variable lower bound exceeds upper bound')

    @staticmethod
    def _rows(A, b, n, name):
        if A is None:
            return np.zeros((0, n)), np.zeros(0)

        A = np.asarray(A, dtype=float).reshape(-1, n)
        b = np.asarray(b, dtype=float).ravel()

        if A.shape[0] != b.size:
            raise ArgumentError('%s has %d rows but rhs has %d entries' % (
                name, A.shape[0], b.size))

        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ArgumentError('%s has non-finite entries' % name)

        return A, b

    @property
    def n_vars(self):
        return self.c.size

    @property
    def n_ub(self):
        return self.A_ub.shape[0]

    @property
    def n_eq(self):
        return self.A_eq.shape[0]

    def scaled(self, factor):
        """Return a copy with the cost vector multiplied by `factor`."""
        return LinearProgram(self.c * factor, self.A_ub, self.b_ub,
                             self.A_eq, self.b_eq,
                             np.column_stack([self.lo, self.hi]), self.names)

    def inequality_form(self):
        """Return (G, h) with every constraint and finite bound as G v <= h."""
        n = self.n_vars
        eye = np.eye(n)
        has_lo = np.isfinite(self.lo)
        has_hi = np.isfinite(self.hi)

        G = np.vstack([self.A_ub, self.A_eq, -self.A_eq,
                       -eye[has_lo], eye[has_hi]])
        h = np.concatenate([self.b_ub, self.b_eq, -self.b_eq,
                            -self.lo[has_lo], self.hi[has_hi]])

        return G, h

    def max_residual(self, v):
        """Largest constraint or bound violation at `v` (0 when feasible)."""
        parts = [0.0]

        if self.n_ub:
            parts.append(np.max(self.A_ub.dot(v) - self.b_ub))

        if self.n_eq:
            parts.append(np.max(np.abs(self.A_eq.dot(v) - self.b_eq)))

        parts.append(np.max(self.lo - v))
        parts.append(np.max(v - self.hi))

        return float(max(parts))


class LpSolution(object):
    """Result of `solve_lp`.

    `dual` holds the nonnegative multipliers of the rows of
    `LinearProgram.inequality_form()`, in the same order.
    """

    def __init__(self, status, v=None, objective=np.nan, dual=None,
                 max_primal_residual=np.nan, duality_gap=np.nan,
                 iterations=0, method='simplex'):
        self.status = status
        self.v = v
        self.objective = objective
        self.dual = dual
        self.max_primal_residual = max_primal_residual
        self.duality_gap = duality_gap
        self.iterations = iterations
        self.method = method

    @property
    def is_optimal(self):
        return self.status == LpStatus.OPTIMAL

    def to_record(self):
        return {
            'status': self.status,
            'objective': self.objective,
            'max_primal_residual': self.max_primal_residual,
            'duality_gap': self.duality_gap,
            'iterations': self.iterations,
            'method': self.method,
        }


class _StandardForm(object):
    """Two-phase tableau simplex for min c.x s.t. A x = b, x >= 0."""

    def __init__(self, A, b, c, max_iter, tol=PIVOT_TOL,
                 stall_count=BLAND_STALL_COUNT):
        self.sign = np.where(b < 0, -1.0, 1.0)
        self.A = A * self.sign[:, None]
        self.b = b * self.sign
        self.c = c
        self.max_iter = max_iter
        self.tol = tol
        self.stall_count = stall_count
        self.iterations = 0

        m, n = self.A.shape
        self.m, self.n = m, n
        self.tableau = np.zeros((m + 1, n + m + 1))
        self.tableau[:m, :n] = self.A
        self.tableau[:m, n:n + m] = np.eye(m)
        self.tableau[:m, -1] = self.b
        self.basis = np.arange(n, n + m)

    def _price(self, costs):
        rows = self.tableau[:self.m]
        self.tableau[-1] = 0.0
        self.tableau[-1, :-1] = costs
        self.tableau[-1] -= costs[self.basis].dot(rows) if self.m else 0.0

    def _pivot(self, row, col):
        pivot_row = self.tableau[row] / self.tableau[row, col]
        self.tableau -= np.outer(self.tableau[:, col], pivot_row)
        self.tableau[row] = pivot_row
        self.basis[row] = col

    def _enter(self, allowed, bland):
        reduced = np.where(allowed, self.tableau[-1, :-1], 0.0)
        candidates = np.flatnonzero(reduced < -self.tol)

        if candidates.size == 0:
            return None

        if bland:
            return candidates[0]

        return candidates[np.argmin(reduced[candidates])]

    def _leave(self, col):
        column = self.tableau[:self.m, col]
        rows = np.flatnonzero(column > self.tol)

        if rows.size == 0:
            return None

        ratios = self.tableau[rows, -1] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + self.tol * max(1.0, abs(best))]

        # lowest basic-variable index among ties
        return ties[np.argmin(self.basis[ties])]

    def _run(self, allowed):
        bland = False
        stalled = 0

        while True:
            col = self._enter(allowed, bland)

            if col is None:
                return LpStatus.OPTIMAL

            row = self._leave(col)

            if row is None:
                return LpStatus.UNBOUNDED

            if self.iterations >= self.max_iter:
                return LpStatus.ITER_LIMIT

            if self.tableau[row, -1] <= self.tol:
                stalled += 1

                if not bland and stalled >= self.stall_count:
                    LOGGER.debug('switching to Bland pivoting after %d '
                                 'degenerate pivots', stalled)
                    bland = True
            else:
                stalled = 0

            self._pivot(row, col)
            self.iterations += 1

    def solve(self):
        """Return (status, x, y) with y the multipliers of the rows of A."""
        m, n = self.m, self.n
        allowed = np.ones(n + m, dtype=bool)

        self._price(np.concatenate([np.zeros(n), np.ones(m)]))
        status = self._run(allowed)

        if status == LpStatus.ITER_LIMIT:
            return status, None, None

        infeasibility = -self.tableau[-1, -1]

        if infeasibility > FEAS_TOL * max(1.0, np.abs(self.b).max()
                                          if m else 1.0):
            return LpStatus.INFEASIBLE, None, None

        self._drive_out_artificials()

        allowed[n:] = False
        self._price(np.concatenate([self.c, np.zeros(m)]))
        status = self._run(allowed)

        if status != LpStatus.OPTIMAL:
            return status, None, None

        x, y = self._polish()

        return status, x, y

    def _drive_out_artificials(self):
        for row in range(self.m):
            if self.basis[row] < self.n:
                continue

            entries = np.abs(self.tableau[row, :self.n])
            candidates = np.flatnonzero(entries > self.tol)

            # leave redundant rows with their artificial at zero
            if candidates.size:
                self._pivot(row, candidates[0])

    def _polish(self):
        """Recompute x and y from the final basis for full accuracy."""
        m, n = self.m, self.n

        if m == 0:
            return np.zeros(n), np.zeros(0)

        full = np.hstack([self.A, np.eye(m)])
        costs = np.concatenate([self.c, np.zeros(m)])
        basis_matrix = full[:, self.basis]

        x = np.zeros(n + m)

        try:
            x[self.basis] = np.linalg.solve(basis_matrix, self.b)
            y = np.linalg.solve(basis_matrix.T, costs[self.basis])
        except np.linalg.LinAlgError:
            x[self.basis] = self.tableau[:m, -1]
            y = -self.tableau[-1, n:n + m]

        x = np.maximum(x, 0.0)

        return x[:n], y * self.sign


def _primal_standard_form(lp):
    """Map `lp` to min c'.x, A x = b, x >= 0 over shifted/split variables.

    :returns: (A, b, c, recover, offset) where `recover(x)` gives v and
        `offset` is the constant dropped from the objective.
    """
    n = lp.n_vars
    columns = []
    shifts = np.zeros(n)
    signs = []
    box_rows = []

    for j in range(n):
        lo, hi = lp.lo[j], lp.hi[j]

        if np.isfinite(lo):
            shifts[j] = lo
            columns.append((j, 1.0))

            if np.isfinite(hi):
                box_rows.append((len(columns) - 1, hi - lo))
        elif np.isfinite(hi):
            shifts[j] = hi
            columns.append((j, -1.0))
        else:
            columns.append((j, 1.0))
            columns.append((j, -1.0))

    n_cols = len(columns)
    transform = np.zeros((n, n_cols))

    for k, (j, s) in enumerate(columns):
        transform[j, k] = s
        signs.append(s)

    blocks_A = [lp.A_ub.dot(transform), lp.A_eq.dot(transform),
                -lp.A_eq.dot(transform)]
    blocks_b = [lp.b_ub - lp.A_ub.dot(shifts), lp.b_eq - lp.A_eq.dot(shifts),
                -(lp.b_eq - lp.A_eq.dot(shifts))]

    box = np.zeros((len(box_rows), n_cols))

    for r, (k, width) in enumerate(box_rows):
        box[r, k] = 1.0

    blocks_A.append(box)
    blocks_b.append(np.array([w for (_, w) in box_rows], dtype=float))

    G = np.vstack(blocks_A)
    h = np.concatenate(blocks_b)
    m = G.shape[0]

    A = np.hstack([G, np.eye(m)])
    c = np.concatenate([transform.T.dot(lp.c), np.zeros(m)])

    def recover(x):
        return shifts + transform.dot(x[:n_cols])

    return A, h, c, recover, lp.c.dot(shifts)


def _solve_primal(lp, max_iter, stall_count):
    """Solve on the primal standard form.

    :returns: (status, v, dual_objective, w, iterations); `w` is None on this
        route and recovered later from the active rows.
    """
    A, b, c, recover, offset = _primal_standard_form(lp)
    solver = _StandardForm(A, b, c, max_iter, stall_count=stall_count)
    status, x, y = solver.solve()

    if status != LpStatus.OPTIMAL:
        return status, None, None, None, solver.iterations

    return status, recover(x), b.dot(y) + offset, None, solver.iterations


def _solve_dual(lp, max_iter, stall_count):
    """Solve min h.w s.t. G^T w = -c, w >= 0 and read v off its multipliers.

    :returns: (status, v, dual_objective, w, iterations).
    """
    G, h = lp.inequality_form()
    solver = _StandardForm(G.T.copy(), -lp.c, h, max_iter,
                           stall_count=stall_count)
    status, w, y = solver.solve()

    if status == LpStatus.UNBOUNDED:
        return LpStatus.INFEASIBLE, None, None, None, solver.iterations

    if status == LpStatus.INFEASIBLE:
        # primal is unbounded if it has any feasible point
        feasible = LinearProgram(np.zeros(lp.n_vars), lp.A_ub, lp.b_ub,
                                 lp.A_eq, lp.b_eq,
                                 np.column_stack([lp.lo, lp.hi]))
        check = _solve_primal(feasible, max_iter, stall_count)[0]
        status = LpStatus.UNBOUNDED if check == LpStatus.OPTIMAL else\
            LpStatus.INFEASIBLE

    if status != LpStatus.OPTIMAL:
        return status, None, None, None, solver.iterations

    return status, y, -h.dot(w), w, solver.iterations


def _tableau_sizes(lp):
    n = lp.n_vars
    free = int(np.sum(~np.isfinite(lp.lo) & ~np.isfinite(lp.hi)))
    box = int(np.sum(np.isfinite(lp.lo) & np.isfinite(lp.hi)))
    m_primal = lp.n_ub + 2 * lp.n_eq + box
    primal = (m_primal + 1) * (n + free + 2 * m_primal + 1)

    G_rows = lp.n_ub + 2 * lp.n_eq + int(np.isfinite(lp.lo).sum()) +\
        int(np.isfinite(lp.hi).sum())
    dual = (n + 1) * (G_rows + n + 1)

    return primal, dual


def _dual_multipliers(lp, v):
    """Nonnegative multipliers for inequality_form() rows at solution v.

    Least squares over the rows active at `v`.
    """
    G, h = lp.inequality_form()
    slack = h - G.dot(v)
    active = np.flatnonzero(slack <= 1e-7 * np.maximum(1.0, np.abs(h)))
    w = np.zeros(G.shape[0])

    if active.size:
        solution = np.linalg.lstsq(G[active].T, -lp.c, rcond=None)[0]
        w[active] = np.maximum(solution, 0.0)

    return w


def solve_lp(lp, feas_tol=FEAS_TOL, gap_tol=GAP_TOL, max_iter=MAX_ITER,
             method='simplex', stall_count=BLAND_STALL_COUNT):
    """Solve a `LinearProgram`.

    :param lp: The program.
    :param feas_tol: Primal feasibility tolerance for the certificate.
    :param gap_tol: Duality-gap tolerance for the certificate.
    :param max_iter: Pivot limit per phase.
    :param method: 'simplex' (dense tableau) or 'highs' (scipy adapter).
    :param stall_count: Degenerate pivots before Bland's rule takes over.

    :returns: An `LpSolution`. Infeasible and unbounded programs are
        reported through `status`.
    """
    if method == 'highs':
        return _solve_highs(lp, max_iter)
    elif method != 'simplex':
        raise ArgumentError('unknown LP method %r' % method)

    primal_size, dual_size = _tableau_sizes(lp)
    route = _solve_dual if dual_size < primal_size else _solve_primal
    status, v, dual_objective, w, iterations = route(
        lp, max_iter, stall_count)

    if status != LpStatus.OPTIMAL:
        return LpSolution(status, iterations=iterations)

    return _certify(lp, v, dual_objective, w, iterations, feas_tol, gap_tol,
                    'simplex')


def _certify(lp, v, dual_objective, w, iterations, feas_tol, gap_tol,
             method):
    objective = float(lp.c.dot(v))
    residual = lp.max_residual(v)
    gap = objective - dual_objective

    if residual > feas_tol or abs(gap) > gap_tol * max(1.0, abs(objective)):
        LOGGER.warning('LP certificate outside tolerance: residual %.3g, '
                       'gap %.3g', residual, gap)

    return LpSolution(LpStatus.OPTIMAL, v=v, objective=objective,
                      dual=w if w is not None else _dual_multipliers(lp, v),
                      max_primal_residual=max(residual, 0.0),
                      duality_gap=gap, iterations=iterations, method=method)


HIGHS_STATUS = {
    0: LpStatus.OPTIMAL,
    1: LpStatus.ITER_LIMIT,
    2: LpStatus.INFEASIBLE,
    3: LpStatus.UNBOUNDED,
}


def _solve_highs(lp, max_iter):
    bounds = [(None if np.isinf(lo) else lo, None if np.isinf(hi) else hi)
              for lo, hi in zip(lp.lo, lp.hi)]
    result = linprog(
        lp.c,
        A_ub=lp.A_ub if lp.n_ub else None, b_ub=lp.b_ub if lp.n_ub else None,
        A_eq=lp.A_eq if lp.n_eq else None, b_eq=lp.b_eq if lp.n_eq else None,
        bounds=bounds, method='highs', options={'maxiter': max_iter})
    status = HIGHS_STATUS.get(result.status, LpStatus.ITER_LIMIT)

    if status != LpStatus.OPTIMAL:
        return LpSolution(status, iterations=int(result.nit), method='highs')

    v = np.asarray(result.x, dtype=float)

    return _certify(lp, v, float(result.fun), None, int(result.nit),
                    FEAS_TOL, GAP_TOL, 'highs')


def enumerate_vertices_oracle(lp, tol=1e-9):
    """Solve a small program by enumerating all basic solutions.

    Intended as a test oracle. Variables lacking a finite bound are boxed at
    +-1e7; an optimum on that box is reported as unbounded.

    :raises: `ArgumentError` if variables plus constraints exceed 16.

    :returns: An `LpSolution` with status, v and objective.
    """
    size = lp.n_vars + lp.n_ub + lp.n_eq

    if size > ORACLE_MAX_SIZE:
        raise ArgumentError('oracle limited to %d variables plus constraints,'
                            ' got %d' % (ORACLE_MAX_SIZE, size))

    n = lp.n_vars
    lo = np.where(np.isfinite(lp.lo), lp.lo, -ORACLE_BOX)
    hi = np.where(np.isfinite(lp.hi), lp.hi, ORACLE_BOX)
    boxed = LinearProgram(lp.c, lp.A_ub, lp.b_ub, lp.A_eq, lp.b_eq,
                          np.column_stack([lo, hi]))
    G, h = boxed.inequality_form()

    rows = np.array(list(combinations(range(G.shape[0]), n)))
    systems = G[rows]
    regular = np.abs(np.linalg.det(systems)) > 1e-12

    if not regular.any():
        return LpSolution(LpStatus.INFEASIBLE, method='oracle')

    points = np.linalg.solve(systems[regular], h[rows[regular]][..., None])
    points = points[..., 0]
    feasible = np.all(points.dot(G.T) <= h + tol * np.maximum(1.0, np.abs(h)),
                      axis=1)

    if not feasible.any():
        return LpSolution(LpStatus.INFEASIBLE, method='oracle')

    points = points[feasible]
    values = points.dot(lp.c)
    best = int(np.argmin(values))
    v = points[best]

    artificial = (~np.isfinite(lp.lo) | ~np.isfinite(lp.hi))
    if np.any(artificial & (np.abs(v) >= ORACLE_BOX * (1 - 1e-9))):
        return LpSolution(LpStatus.UNBOUNDED, method='oracle')

    return LpSolution(LpStatus.OPTIMAL, v=v, objective=float(values[best]),
                      max_primal_residual=lp.max_residual(v),
                      duality_gap=0.0, method='oracle')


def _lp_terms(coefficients, names):
    terms = []

    for value, name in zip(coefficients, names):
        if value == 0:
            continue

        sign = '-' if value < 0 else '+'
        terms.append('%s %r %s' % (sign, abs(float(value)), name))

    if not terms:
        return '0 %s' % names[0]

    text = ' '.join(terms)

    return text[2:] if text.startswith('+ ') else text


def write_lp_file(lp, path):
    """Write `lp` in CPLEX LP text format.

    Sections: ``Minimize``, ``Subject To`` (rows ``ub_i`` and ``eq_i``),
    ``Bounds`` and ``End``.
    """
    lines = ['\\ panelbounds linear program', 'Minimize',
             ' obj: %s' % _lp_terms(lp.c, lp.names), 'Subject To']

    for i in range(lp.n_ub):
        lines.append(' ub_%d: %s <= %r' % (
            i, _lp_terms(lp.A_ub[i], lp.names), float(lp.b_ub[i])))

    for i in range(lp.n_eq):
        lines.append(' eq_%d: %s = %r' % (
            i, _lp_terms(lp.A_eq[i], lp.names), float(lp.b_eq[i])))

    lines.append('Bounds')

    for name, lo, hi in zip(lp.names, lp.lo, lp.hi):
        if np.isinf(lo) and np.isinf(hi):
            lines.append(' %s free' % name)
        else:
            lines.append(' %s <= %s <= %s' % (
                '-inf' if np.isinf(lo) else repr(float(lo)), name,
                '+inf' if np.isinf(hi) else repr(float(hi))))

    lines.append('End')

    with open(path, 'w') as f:
        f.write('\n'.join(lines) + '\n')

    return path
