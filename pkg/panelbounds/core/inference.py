"""Confidence intervals for the average effect.

- `ci_theorem1`: beta known; the interval widens L and U by the normal
  critical value times their standard errors.
- `ci_method1`: union of known-beta intervals over a Wald set for beta.
- `ci_method2`: cross-fitted bounds that hold on half-sample parameter boxes,
  with a Bonferroni critical value.
"""
import logging

import numpy as np
import pandas as pd

from panelbounds.config.settings import METHOD1_GRID_SIZE,\
    METHOD1_GRID_SIZE_2D, METHOD1_MAX_DIM, TRADEOFF_SPLITS
from panelbounds.core.crossfit import check_panel, confidence_box,\
    estimate_bounds_crossfit, estimate_bounds_crossfit_set,\
    estimate_bounds_known_beta, fit_halves, split_half
from panelbounds.core.estimation import conditional_logit_mle
from panelbounds.lib.exceptions import ArgumentError
from panelbounds.lib.links import normal_quantile
from panelbounds.lib.parallel import map_async
from panelbounds.models.results import ConfidenceInterval


LOGGER = logging.getLogger(__name__)


def _check_levels(alpha, gamma=0.0):
    if not 0.0 < alpha <= 1.0:
        raise ArgumentError('alpha must lie in (0, 1], got %r' % alpha)

    if gamma < 0.0 or (gamma > 0.0 and alpha + gamma >= 1.0):
        raise ArgumentError('need gamma >= 0 and alpha + gamma < 1, got '
                            'alpha=%r, gamma=%r' % (alpha, gamma))


def _critical(level):
    """Phi^{-1}(1 - level); zero once the level reaches one half."""
    return 0.0 if level >= 0.5 else normal_quantile(1.0 - level)


def ci_theorem1(estimate, alpha):
    """[L - c sigma_L / sqrt(n), U + c sigma_U / sqrt(n)], c = z_{1-alpha/2}.

    A zero standard deviation gives back the raw bound on that side with a
    degenerate-variance warning.
    """
    _check_levels(alpha)
    c = _critical(alpha / 2.0)
    root_n = np.sqrt(estimate.n)
    interval = ConfidenceInterval(
        estimate.L_hat - c * estimate.sigma_L / root_n,
        estimate.U_hat + c * estimate.sigma_U / root_n,
        alpha, 0.0, ConfidenceInterval.THEOREM1, diagnostics={
            'c_value': c,
            'sigma_L': estimate.sigma_L,
            'sigma_U': estimate.sigma_U,
            'n': estimate.n,
            'L_hat': estimate.L_hat,
            'U_hat': estimate.U_hat,
        }, warnings=estimate.warnings)

    if estimate.sigma_L == 0.0 or estimate.sigma_U == 0.0:
        interval.warn('degenerate variance: sigma_L=%g, sigma_U=%g',
                      estimate.sigma_L, estimate.sigma_U)

    return interval


def wald_grid(beta_hat, gamma, size=None):
    """Equidistant points of the Wald set for beta, plus beta_hat itself.

    One dimension uses beta_hat +- z_{1-gamma/2} se with `size` points; two
    dimensions use the Bonferroni box with z_{1-gamma/4} and `size` points
    per axis.
    """
    dim = beta_hat.dim

    if dim == 0 or dim > METHOD1_MAX_DIM:
        raise ArgumentError('method 1 grid search supports 1 or %d parameters,'
                            ' got %d; use method 2' % (METHOD1_MAX_DIM, dim))

    size = int(size or (METHOD1_GRID_SIZE if dim == 1 else
                        METHOD1_GRID_SIZE_2D))

    if size < 1:
        raise ArgumentError('beta grid size must be positive')

    if size == 1:
        return beta_hat.beta[None, :], 0.0

    if not 0.0 < gamma < 1.0:
        raise ArgumentError('method 1 needs 0 < gamma < 1, got %r' % gamma)

    z = normal_quantile(1.0 - gamma / (2.0 * dim))
    axes = [np.linspace(b - z * s, b + z * s, size)
            for b, s in zip(beta_hat.beta, beta_hat.se)]
    mesh = np.meshgrid(*axes, indexing='ij')
    points = np.column_stack([m.ravel() for m in mesh])
    step = max(float(axis[1] - axis[0]) for axis in axes)

    return np.vstack([points, beta_hat.beta[None, :]]), step


def _method1_point(panel, model, effect, beta, grid, objective, c, refine):
    estimate = estimate_bounds_known_beta(panel, model, effect, beta, grid,
                                          objective, refine, threads=1)
    root_n = np.sqrt(estimate.n)

    return (estimate.L_hat - c * estimate.sigma_L / root_n,
            estimate.U_hat + c * estimate.sigma_U / root_n)


def ci_method1(panel, model, effect, beta_hat, alpha, gamma, grid=None,
               beta_grid_size=None, objective=None, refine=False,
               threads=None):
    """Envelope of known-beta intervals over a Wald set.

    The result has level at least 1 - alpha - gamma. The grid step is
    reported in the diagnostics; no interpolation between points.
    """
    _check_levels(alpha, gamma)
    check_panel(model, panel)
    betas, step = wald_grid(beta_hat, gamma, beta_grid_size)
    effect = effect.resolve(model, (betas.min(axis=0), betas.max(axis=0)))
    c = _critical(alpha / 2.0)

    LOGGER.info('method 1 over %d parameter values', len(betas))
    ends = np.array(map_async(_method1_point, [
        (panel, model, effect, beta, grid, objective, c, refine)
        for beta in betas], threads))
    lo, hi = int(np.argmin(ends[:, 0])), int(np.argmax(ends[:, 1]))

    return ConfidenceInterval(ends[lo, 0], ends[hi, 1], alpha, gamma,
                              ConfidenceInterval.METHOD1, diagnostics={
                                  'c_value': c,
                                  'beta_grid_size': len(betas),
                                  'beta_grid_step': step,
                                  'beta_at_lower': betas[lo].tolist(),
                                  'beta_at_upper': betas[hi].tolist(),
                                  'beta_hat': beta_hat.beta.tolist(),
                              }, warnings=beta_hat.warnings)


def interval_from_set_estimate(estimate, alpha, gamma):
    """Method 2 endpoints from a set-constrained cross-fitted estimate.

    [L_C - c (sigma_L1 + sigma_L2) / 2 / sqrt(n/2),
     U_C + c (sigma_U1 + sigma_U2) / 2 / sqrt(n/2)], c = z_{1-alpha/4}.
    """
    c = _critical(alpha / 4.0)
    halves = estimate.halves
    sigma_L = (halves[0]['sigma_L'] + halves[1]['sigma_L']) / 2.0
    sigma_U = (halves[0]['sigma_U'] + halves[1]['sigma_U']) / 2.0
    root = np.sqrt(estimate.n / 2.0)
    interval = ConfidenceInterval(
        estimate.L_hat - c * sigma_L / root,
        estimate.U_hat + c * sigma_U / root,
        alpha, gamma, ConfidenceInterval.METHOD2, diagnostics={
            'c_value': c,
            'L_hat': estimate.L_hat,
            'U_hat': estimate.U_hat,
            'sigma_L_halves': [h['sigma_L'] for h in halves],
            'sigma_U_halves': [h['sigma_U'] for h in halves],
            'set_diameters': [h.get('set_diameter') for h in halves],
        }, warnings=estimate.warnings)

    if sigma_L == 0.0 or sigma_U == 0.0:
        interval.warn('degenerate variance in a half sample')

    return interval


def ci_method2(panel, model, effect, alpha, gamma, grid=None,
               estimator=conditional_logit_mle, beta_hats=None,
               beta_sets=None, objective=None, shuffle_seed=None,
               refine=False, threads=None):
    """Bonferroni interval from set-constrained cross-fitted bounds."""
    _check_levels(alpha, gamma)
    estimate = estimate_bounds_crossfit_set(
        panel, model, effect, gamma, grid, objective, estimator, beta_hats,
        beta_sets, shuffle_seed, refine, threads=threads)

    return interval_from_set_estimate(estimate, alpha, gamma)


def tradeoff_search_method2(panel, model, effect, c_total=0.05,
                            split_grid=None, grid=None,
                            estimator=conditional_logit_mle, beta_hats=None,
                            objective=None, shuffle_seed=None, refine=False,
                            threads=None):
    """Narrowest method 2 interval over (alpha, gamma) splits of c_total.

    The half-sample estimates are computed once and shared by all splits.
    """
    split_grid = TRADEOFF_SPLITS if split_grid is None else list(split_grid)

    if not split_grid:
        raise ArgumentError('the (alpha, gamma) split grid is empty')

    for alpha, gamma in split_grid:
        if abs(alpha + gamma - c_total) > 1e-9:
            raise ArgumentError('split (%g, %g) does not add up to %g' % (
                alpha, gamma, c_total))

    if beta_hats is None:
        check_panel(model, panel)
        beta_hats = fit_halves(panel, model, split_half(panel.n, shuffle_seed),
                               estimator, threads)

    best, widths = None, []

    for alpha, gamma in split_grid:
        interval = ci_method2(panel, model, effect, alpha, gamma, grid,
                              estimator, beta_hats, None, objective,
                              shuffle_seed, refine, threads)
        widths.append(interval.width)

        if best is None or interval.width < best.width:
            best = interval

    best.diagnostics['split'] = [best.alpha, best.gamma]
    best.diagnostics['split_grid'] = [list(pair) for pair in split_grid]
    best.diagnostics['split_widths'] = widths

    return best


def effect_table(panel, model, effects, alpha=0.05, gamma=0.0,
                 method='theorem1', grid=None, estimator=conditional_logit_mle,
                 objective=None, shuffle_seed=None, beta_grid_size=None,
                 threads=None):
    """Cross-fitted bounds and an interval for each effect in a list.

    :param effects: Sequence of `Effect` objects, typically one per
        covariate.
    :param method: 'theorem1', 'method1' or 'method2'.

    :returns: A `pandas.DataFrame` with one row per effect.
    """
    if method not in ConfidenceInterval.METHODS:
        raise ArgumentError('unknown interval method %r' % method)

    check_panel(model, panel)
    halves = split_half(panel.n, shuffle_seed)
    fits = fit_halves(panel, model, halves, estimator, threads)
    full_fit = estimator(panel, model=model) if method == 'method1' else None
    rows = []

    for effect in effects:
        estimate = estimate_bounds_crossfit(
            panel, model, effect, grid, objective, estimator, fits,
            shuffle_seed, threads=threads)

        if method == ConfidenceInterval.THEOREM1:
            interval = ci_theorem1(estimate, alpha)
        elif method == ConfidenceInterval.METHOD1:
            interval = ci_method1(panel, model, effect, full_fit, alpha,
                                  gamma, grid, beta_grid_size, objective,
                                  threads=threads)
        else:
            interval = ci_method2(panel, model, effect, alpha, gamma, grid,
                                  estimator, fits, None, objective,
                                  shuffle_seed, threads=threads)

        rows.append(dict(effect.to_record(), L_hat=estimate.L_hat,
                         U_hat=estimate.U_hat, ci_lower=interval.lower,
                         ci_upper=interval.upper, method=method, alpha=alpha,
                         gamma=gamma))

    return pd.DataFrame(rows)


__all__ = ['ci_method1', 'ci_method2', 'ci_theorem1', 'confidence_box',
           'effect_table', 'normal_quantile', 'tradeoff_search_method2',
           'wald_grid']
