"""Conditional maximum likelihood for the static fixed-effects logit.

Conditioning on k_i = sum_t y_it removes A_i:

    P(y_i | k_i, x_i; beta) = exp(sum_t y_it x_it beta) / S_k(beta),

where S_k sums exp(sum_t d_t x_it beta) over all d with sum_t d_t = k_i. S_k
and its first two derivatives follow from a recurrence over periods, so no
permutation sums are enumerated.
"""
import logging

import numpy as np

from panelbounds.config.settings import MLE_GRADIENT_TOL, MLE_MAX_ITER
from panelbounds.lib.exceptions import ArgumentError, IdentificationError
from panelbounds.models.results import BetaEstimate


LOGGER = logging.getLogger(__name__)

VCOV_TYPES = ('hessian', 'sandwich')
MAX_HALVINGS = 40


def informative_units(panel, subset=None):
    """Indices in `subset` with 0 < sum_t y_t < T and varying x."""
    index = np.arange(panel.n) if subset is None else\
        np.asarray(subset, dtype=int)
    k = panel.y[index].sum(axis=1)
    x = panel.x[index]
    varies = np.any(np.ptp(x, axis=1) > 0, axis=1)

    return index[(k > 0) & (k < panel.T) & varies]


def _elementary_sums(x, beta):
    """Per-unit S_j, dS_j and d2S_j for j = 0..T, rescaled per unit.

    :param x: Covariates, shape (n, T, K).

    :returns: ``(S, G, H, shift)`` of shapes (n, T+1), (n, T+1, K),
        (n, T+1, K, K) and (n,); the true sums are the returned ones times
        exp(j * shift).
    """
    n, T, K = x.shape
    eta = x.dot(beta)
    shift = eta.max(axis=1)
    w = np.exp(eta - shift[:, None])

    S = np.zeros((n, T + 1))
    S[:, 0] = 1.0
    G = np.zeros((n, T + 1, K))
    H = np.zeros((n, T + 1, K, K))

    for t in range(T):
        xt = x[:, t, :]
        wt = w[:, t]
        S_prev, G_prev, H_prev = S[:, :-1], G[:, :-1], H[:, :-1]
        outer_g = xt[:, None, :, None] * G_prev[:, :, None, :]

        H_step = H_prev + outer_g + np.swapaxes(outer_g, 2, 3) +\
            (xt[:, :, None] * xt[:, None, :])[:, None] *\
            S_prev[:, :, None, None]
        G_step = G_prev + xt[:, None, :] * S_prev[:, :, None]

        H = H.copy()
        G = G.copy()
        S = S.copy()
        H[:, 1:] += wt[:, None, None, None] * H_step
        G[:, 1:] += wt[:, None, None] * G_step
        S[:, 1:] += wt[:, None] * S_prev

    return S, G, H, shift


def _unit_terms(y, x, beta):
    """Per-unit log-likelihood, score (n, K) and Hessian (n, K, K)."""
    n = y.shape[0]
    k = y.sum(axis=1)
    rows = np.arange(n)
    S, G, H, shift = _elementary_sums(x, beta)

    S_k = S[rows, k]
    mean = G[rows, k] / S_k[:, None]
    second = H[rows, k] / S_k[:, None, None]
    observed = np.einsum('nt,ntk->nk', y, x)

    loglik = observed.dot(beta) - (np.log(S_k) + k * shift)
    score = observed - mean
    hessian = -(second - mean[:, :, None] * mean[:, None, :])

    return loglik, score, hessian


def conditional_logit_mle(panel, subset=None, model=None, beta_start=None,
                          vcov_type='hessian', max_iter=MLE_MAX_ITER,
                          tol=MLE_GRADIENT_TOL):
    """Estimate beta by conditional maximum likelihood.

    :param panel: The `PanelDataset`.
    :param subset: Unit indices to use; all units by default.
    :param model: Optional `ModelSpec`, checked to be a static logit.
    :param beta_start: Starting value, zeros by default.
    :param vcov_type: 'hessian' (inverse information) or 'sandwich'.
    :param max_iter: Newton iteration limit.
    :param tol: Convergence threshold on the norm of the summed score.

    :raises: `IdentificationError` if no unit is informative or the
        information matrix is singular.

    :returns: A `BetaEstimate`.
    """
    if model is not None and (model.family != 'static_binary' or
                              not model.is_logit):
        raise ArgumentError('conditional likelihood needs the static logit, '
                            'got %r' % model)

    if vcov_type not in VCOV_TYPES:
        raise ArgumentError('vcov_type must be one of %s' % (VCOV_TYPES,))

    if subset is not None and len(subset) == 0:
        raise ArgumentError('estimation subset is empty')

    used = informative_units(panel, subset)

    if used.size == 0:
        raise IdentificationError('no informative units: every unit has a '
                                  'constant outcome or constant covariates')

    y, x = panel.y[used], panel.x[used]
    beta = np.zeros(panel.K) if beta_start is None else\
        np.asarray(beta_start, dtype=float).ravel().copy()

    loglik, score, hessian = _unit_terms(y, x, beta)
    converged = False
    iterations = 0

    for iterations in range(1, max_iter + 1):
        gradient = score.sum(axis=0)
        information = -hessian.sum(axis=0)

        if np.linalg.norm(gradient) <= tol:
            converged = True
            break

        try:
            step = np.linalg.solve(information, gradient)
        except np.linalg.LinAlgError:
            raise IdentificationError('conditional information matrix is '
                                      'singular')

        total = loglik.sum()

        for _ in range(MAX_HALVINGS):
            trial = beta + step
            trial_terms = _unit_terms(y, x, trial)

            if trial_terms[0].sum() >= total - 1e-12 * abs(total):
                break

            step = step / 2

        beta = trial
        loglik, score, hessian = trial_terms

    score_norm = float(np.linalg.norm(score.sum(axis=0)))
    information = -hessian.sum(axis=0)

    try:
        bread = np.linalg.inv(information)
    except np.linalg.LinAlgError:
        raise IdentificationError('conditional information matrix is singular')

    if vcov_type == 'sandwich':
        meat = score.T.dot(score)
        vcov = bread.dot(meat).dot(bread)
    else:
        vcov = bread

    estimate = BetaEstimate(beta, vcov, used.size, converged, iterations,
                            score_norm, float(loglik.sum()), vcov_type)

    if not converged:
        estimate.warn('conditional logit did not converge after %d '
                      'iterations (score norm %.3g)', max_iter, score_norm)

    LOGGER.debug('conditional logit: beta=%s, n_used=%d, iterations=%d',
                 beta, used.size, iterations)

    return estimate
