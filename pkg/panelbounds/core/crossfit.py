"""Sample outer bounds: known beta, cross-fitted and set-constrained.

Cross-fitting splits the units into halves I_1 and I_2; units in one half
are evaluated with the parameter estimated on the other half, so each
unit's bound is independent of its own outcome through beta.
"""
import itertools
import logging

import numpy as np

from panelbounds.core.bounds import BoundBuilder, as_beta_set
from panelbounds.core.estimation import conditional_logit_mle
from panelbounds.lib.exceptions import ArgumentError, EstimationError,\
    NumericalError
from panelbounds.lib.links import normal_quantile
from panelbounds.lib.parallel import map_async
from panelbounds.lib.rng import stream
from panelbounds.models.grid import HeterogeneityGrid
from panelbounds.models.results import BetaEstimate, BoundsEstimate,\
    mean_and_sigma


LOGGER = logging.getLogger(__name__)


def split_half(n, shuffle_seed=None):
    """Index halves ([0, n // 2), [n // 2, n)).

    With `shuffle_seed` the units are permuted first; each half is returned
    in ascending order.

    >>> [list(half) for half in split_half(5)]
    [[0, 1], [2, 3, 4]]
    """
    n = int(n)

    if n < 2:
        raise ArgumentError('cross-fitting needs at least 2 units, got %d' % n)

    order = np.arange(n)

    if shuffle_seed is not None:
        order = stream(shuffle_seed, 'shuffle').permutation(n)

    half = n // 2

    return np.sort(order[:half]), np.sort(order[half:])


def check_panel(model, panel):
    if (panel.T, panel.K) != (model.T, model.K):
        raise ArgumentError('panel has T=%d, K=%d but model has T=%d, K=%d' %
                            (panel.T, panel.K, model.T, model.K))

    if model.dynamic and not panel.has_initial:
        raise ArgumentError('%s needs a y0 column' % model.family)


def _grid(model, grid):
    return HeterogeneityGrid.default_for(model) if grid is None else grid


def beta_box(betas):
    """Componentwise (lo, hi) over a stack of anchor parameters."""
    betas = np.atleast_2d(np.asarray(betas, dtype=float))

    return betas.min(axis=0), betas.max(axis=0)


def _note_builds(estimate, functions):
    capped = sum(1 for bf in functions if bf.capped)

    if capped:
        estimate.warn('refinement capped at the effect range for %d of %d '
                      'conditioning values', capped, len(functions))


def estimate_bounds_known_beta(panel, model, effect, beta0, grid=None,
                               objective=None, refine=False, method='simplex',
                               threads=None):
    """Outer bounds with every unit evaluated at the known beta0.

    :returns: A `BoundsEstimate` with per-unit (L_i, U_i).
    """
    check_panel(model, panel)
    betas = as_beta_set(model, beta0)
    effect = effect.resolve(model, beta_box(betas))
    builder = BoundBuilder(model, effect, _grid(model, grid), objective,
                           refine=refine, method=method, threads=threads)
    lower, upper, functions = builder.evaluate_panel(panel, lambda i: betas)
    estimate = BoundsEstimate(lower, upper, BoundsEstimate.KNOWN_BETA,
                              functions=functions, effect=effect)
    _note_builds(estimate, functions)
    LOGGER.info('known-beta bounds [%.6f, %.6f] from %d distinct programs',
                estimate.L_hat, estimate.U_hat, len(functions))

    return estimate


def _fit_task(estimator, panel, subset, model, half):
    try:
        return estimator(panel, subset, model=model)
    except NumericalError as err:
        raise EstimationError(str(err), half)


def fit_halves(panel, model, halves, estimator=conditional_logit_mle,
               threads=None):
    """Estimate beta separately on each half.

    :raises: `EstimationError` naming the (1-based) failing half.
    """
    if model.beta_dim == 0:
        return [None, None]

    tasks = [(estimator, panel, subset, model, s + 1)
             for s, subset in enumerate(halves)]

    return map_async(_fit_task, tasks, threads, backend='threading')


def _as_fits(model, beta_hats):
    fits = []

    for fit in beta_hats:
        if fit is None or isinstance(fit, BetaEstimate):
            fits.append(fit)
        else:
            fits.append(BetaEstimate.known(as_beta_set(model, fit)[0]))

    return fits


def _half_records(estimate, halves, anchors):
    records = []

    for s, (index, anchor) in enumerate(zip(halves, anchors)):
        L, sigma_L = mean_and_sigma(estimate.lower[index])
        U, sigma_U = mean_and_sigma(estimate.upper[index])
        records.append({
            'half': s + 1,
            'n': int(index.size),
            'anchor_betas': np.asarray(anchor).tolist(),
            'L_hat': L,
            'U_hat': U,
            'sigma_L': sigma_L,
            'sigma_U': sigma_U,
        })

    return records


def _crossfit(panel, model, effect, grid, anchors, halves, method_kind,
              objective, refine, method, threads, fits):
    """Evaluate units of half s at the anchor set of the other half."""
    effect = effect.resolve(model, beta_box(np.vstack(anchors)))
    builder = BoundBuilder(model, effect, _grid(model, grid), objective,
                           refine=refine, method=method, threads=threads)
    other = np.empty(panel.n, dtype=int)
    other[halves[0]] = 1
    other[halves[1]] = 0

    lower, upper, functions = builder.evaluate_panel(
        panel, lambda i: anchors[other[i]])
    estimate = BoundsEstimate(lower, upper, method_kind, fits=[
        fit for fit in fits if fit is not None], functions=functions,
        effect=effect)
    estimate.halves = _half_records(estimate, halves, [anchors[1],
                                                       anchors[0]])
    _note_builds(estimate, functions)

    return estimate


def estimate_bounds_crossfit(panel, model, effect, grid=None, objective=None,
                             estimator=conditional_logit_mle, beta_hats=None,
                             shuffle_seed=None, refine=False,
                             method='simplex', threads=None):
    """Cross-fitted outer bounds.

    :param beta_hats: Optional per-half estimates (arrays or
        `BetaEstimate`s); entry s is the estimate from half s. When absent
        `estimator` is run on each half.
    :param shuffle_seed: Seed for a permutation before splitting.

    :returns: A `BoundsEstimate` whose `fits` hold the two half estimates.
    """
    check_panel(model, panel)
    halves = split_half(panel.n, shuffle_seed)

    if beta_hats is None:
        fits = fit_halves(panel, model, halves, estimator, threads)
    else:
        fits = _as_fits(model, beta_hats)

    anchors = [as_beta_set(model, None if fit is None else fit.beta)
               for fit in fits]

    return _crossfit(panel, model, effect, grid, anchors, halves,
                     BoundsEstimate.CROSS_FIT, objective, refine, method,
                     threads, fits)


def confidence_box(fit, gamma):
    """Bonferroni box around a half-sample estimate.

    Each component gets beta_k +- z se_k with z the 1 - gamma / (4 dim)
    normal quantile, so the box covers beta0 with probability at least
    1 - gamma / 2.

    :returns: The 2^dim vertices, shape (2^dim, dim).

    :raises: `EstimationError` if a standard error is zero or not finite.
    """
    se = fit.se

    if not np.all(np.isfinite(se)) or np.any(se <= 0):
        raise EstimationError('degenerate covariance, standard errors %s' %
                              se.tolist())

    if not 0.0 < gamma < 1.0:
        raise ArgumentError('gamma must lie in (0, 1), got %r' % gamma)

    z = normal_quantile(1.0 - gamma / (4.0 * fit.dim))
    sides = [(b - z * s, b + z * s) for b, s in zip(fit.beta, se)]

    return np.array(list(itertools.product(*sides)))


def estimate_bounds_crossfit_set(panel, model, effect, gamma, grid=None,
                                 objective=None,
                                 estimator=conditional_logit_mle,
                                 beta_hats=None, beta_sets=None,
                                 shuffle_seed=None, refine=False,
                                 method='simplex', threads=None):
    """Cross-fitted bounds that hold for every beta in a confidence set.

    Units of half s use bound functions valid for all vertices of the
    other half's Bonferroni box (or the supplied `beta_sets`).

    :param gamma: Total level spent on the two parameter sets.
    :param beta_sets: Optional pair of explicit anchor sets, overriding the
        boxes.

    :returns: A `BoundsEstimate` with per-half means and deviations (divisor
        the half size) in `halves`.
    """
    check_panel(model, panel)
    halves = split_half(panel.n, shuffle_seed)
    fits = [None, None]

    if beta_sets is None:
        if beta_hats is None:
            fits = fit_halves(panel, model, halves, estimator, threads)
        else:
            fits = _as_fits(model, beta_hats)

        if model.beta_dim == 0:
            anchors = [as_beta_set(model, None)] * 2
        else:
            anchors = [confidence_box(fit, gamma) for fit in fits]
    else:
        if len(beta_sets) != 2:
            raise ArgumentError('need one parameter set per half')

        anchors = [as_beta_set(model, betas) for betas in beta_sets]

    estimate = _crossfit(panel, model, effect, grid, anchors, halves,
                         BoundsEstimate.CROSS_FIT_SET, objective, refine,
                         method, threads, fits)

    for record, anchor in zip(estimate.halves, [anchors[1], anchors[0]]):
        record['set_diameter'] = (np.ptp(anchor, axis=0).tolist()
                                  if anchor.size else [])

    return estimate
