"""Replication runner and parameter sweeps over the simulation designs.

Replication r draws its panel with seed ``dgp.seed + r``; replications are
independent tasks and their results are reduced in rep order, so a summary
depends only on the design, the pipeline and the number of reps.
"""
import logging

import numpy as np
import pandas as pd

from panelbounds.config.settings import DESK_REPS
from panelbounds.core.analytic import analytic_panel_bounds
from panelbounds.core.crossfit import estimate_bounds_crossfit,\
    estimate_bounds_known_beta
from panelbounds.core.dgp import true_average_effect
from panelbounds.core.estimation import conditional_logit_mle
from panelbounds.core.idset import estimated_choice_probs, sharp_idset
from panelbounds.core.inference import ci_method1, ci_method2, ci_theorem1
from panelbounds.lib.exceptions import ArgumentError, NumericalError,\
    PanelBoundsError
from panelbounds.lib.parallel import map_async
from panelbounds.models.results import BoundsEstimate, Result


LOGGER = logging.getLogger(__name__)

KNOWN_BETA = 'known_beta'
CROSS_FIT = 'cross_fit'
METHOD1 = 'method1'
METHOD2 = 'method2'
IDSET_PERCENTILE = 'idset_percentile'
ANALYTIC = 'analytic'
PIPELINES = (KNOWN_BETA, CROSS_FIT, METHOD1, METHOD2, IDSET_PERCENTILE,
             ANALYTIC)

SWEEP_COLUMNS = ['param', 'm_true', 'mean_L', 'mean_U', 'q_low_L',
                 'q_high_U', 'ci_lower', 'ci_upper', 'coverage', 'reps',
                 'failures']


def _known_beta(dgp, panel, effect, alpha, gamma, options):
    estimate = estimate_bounds_known_beta(
        panel, dgp.model, effect, dgp.beta0, options.get('grid'),
        options.get('objective'), options.get('refine', False), threads=1)

    return estimate, ci_theorem1(estimate, alpha), None


def _cross_fit(dgp, panel, effect, alpha, gamma, options):
    model = dgp.model

    if model.beta_dim == 0:
        return _known_beta(dgp, panel, effect, alpha, gamma, options)

    estimate = estimate_bounds_crossfit(
        panel, model, effect, options.get('grid'), options.get('objective'),
        refine=options.get('refine', False), threads=1)

    return estimate, ci_theorem1(estimate, alpha), None


def _method1(dgp, panel, effect, alpha, gamma, options):
    estimate, _, _ = _cross_fit(dgp, panel, effect, alpha, gamma, options)
    fit = conditional_logit_mle(panel, model=dgp.model)
    interval = ci_method1(panel, dgp.model, effect, fit, alpha, gamma,
                          options.get('grid'), options.get('beta_grid_size'),
                          options.get('objective'),
                          options.get('refine', False), threads=1)

    return estimate, interval, None


def _method2(dgp, panel, effect, alpha, gamma, options):
    estimate, _, _ = _cross_fit(dgp, panel, effect, alpha, gamma, options)
    interval = ci_method2(panel, dgp.model, effect, alpha, gamma,
                          options.get('grid'),
                          objective=options.get('objective'),
                          refine=options.get('refine', False), threads=1)

    return estimate, interval, None


def _idset_percentile(dgp, panel, effect, alpha, gamma, options):
    estimate, interval, _ = _known_beta(dgp, panel, effect, alpha, gamma,
                                        options)
    table = estimated_choice_probs(panel)
    idset = sharp_idset(table, dgp.model, effect, dgp.beta0,
                        options.get('grid'), fallback=True, threads=1)

    return estimate, interval, idset


def _analytic(dgp, panel, effect, alpha, gamma, options):
    if panel.K != 1:
        raise ArgumentError('analytic bounds need one binary covariate')

    lower, upper = analytic_panel_bounds(panel.x[:, :, 0], panel.y)
    estimate = BoundsEstimate(lower, upper, BoundsEstimate.KNOWN_BETA)

    return estimate, ci_theorem1(estimate, alpha), None


RUNNERS = {
    KNOWN_BETA: _known_beta,
    CROSS_FIT: _cross_fit,
    METHOD1: _method1,
    METHOD2: _method2,
    IDSET_PERCENTILE: _idset_percentile,
    ANALYTIC: _analytic,
}


def replicate(dgp, pipeline, rep, effect, alpha, gamma, options):
    """Run one replication and return its record.

    Errors from the library are caught and recorded, so one failing panel
    does not stop a run.
    """
    seed = dgp.seed + rep
    record = {'rep': rep, 'seed': seed, 'ok': False}

    try:
        panel = dgp.generate(seed)
        estimate, interval, idset = RUNNERS[pipeline](
            dgp, panel, effect, alpha, gamma, options)
    except PanelBoundsError as err:
        LOGGER.warning('replication %d (seed %d) failed: %s', rep, seed, err)
        record['error'] = str(err)

        return record

    record.update(ok=True, L=estimate.L_hat, U=estimate.U_hat,
                  ci_lower=interval.lower, ci_upper=interval.upper)

    if idset is not None:
        record.update(id_lower=idset.lower, id_upper=idset.upper)

    return record


class ReplicationSummary(Result):
    """Aggregates over the successful replications of one design.

    q_low is the 2.5% quantile of the lower bounds and q_high the 97.5%
    quantile of the upper bounds. For the identified-set pipeline,
    `coverage` is the share of estimated sets containing m_true;
    otherwise it is the share of intervals that do.
    """

    def __init__(self, pipeline, records, m_true, m_true_se=0.0,
                 warnings=None):
        Result.__init__(self, warnings)
        self.pipeline = pipeline
        self.records = list(records)
        self.m_true = float(m_true)
        self.m_true_se = float(m_true_se)
        ok = [r for r in self.records if r['ok']]
        self.reps = len(ok)
        self.failures = len(self.records) - self.reps

        if not ok:
            raise NumericalError('all %d replications failed' %
                                 len(self.records))

        if self.failures:
            self.warn('%d of %d replications failed', self.failures,
                      len(self.records))

        L = np.array([r['L'] for r in ok])
        U = np.array([r['U'] for r in ok])
        lo = np.array([r['ci_lower'] for r in ok])
        hi = np.array([r['ci_upper'] for r in ok])

        self.mean_L = float(L.mean())
        self.mean_U = float(U.mean())
        self.q_low = float(np.quantile(L, 0.025))
        self.q_high = float(np.quantile(U, 0.975))
        self.mean_ci = (float(lo.mean()), float(hi.mean()))
        self.ci_coverage = float(np.mean((lo <= m_true) & (m_true <= hi)))
        self.idset = None
        self.coverage = self.ci_coverage

        if 'id_lower' in ok[0]:
            id_lo = np.array([r['id_lower'] for r in ok])
            id_hi = np.array([r['id_upper'] for r in ok])
            self.idset = {
                'mean': [float(id_lo.mean()), float(id_hi.mean())],
                'q_low': float(np.quantile(id_lo, 0.025)),
                'q_high': float(np.quantile(id_hi, 0.975)),
            }
            self.coverage = float(np.mean((id_lo <= m_true) &
                                          (m_true <= id_hi)))

    @property
    def outer_percentile_covers(self):
        return self.q_low <= self.m_true <= self.q_high

    def to_row(self, param=None):
        return {
            'param': param,
            'm_true': self.m_true,
            'mean_L': self.mean_L,
            'mean_U': self.mean_U,
            'q_low_L': self.q_low,
            'q_high_U': self.q_high,
            'ci_lower': self.mean_ci[0],
            'ci_upper': self.mean_ci[1],
            'coverage': self.coverage,
            'reps': self.reps,
            'failures': self.failures,
        }

    def to_record(self, per_rep=False):
        record = dict(self.to_row(), pipeline=self.pipeline,
                      m_true_se=self.m_true_se,
                      ci_coverage=self.ci_coverage, idset=self.idset,
                      warnings=self.warnings)

        if per_rep:
            record['replications'] = self.records

        return record


def run_replications(dgp, pipeline, reps=DESK_REPS, alpha=0.05, gamma=0.0,
                     effect=None, m_true=None, threads=None, **options):
    """Run `reps` replications of a pipeline on a design.

    :param pipeline: One of `PIPELINES`.
    :param m_true: The true average effect; computed with
        `true_average_effect` when absent.
    :param options: Passed to the pipeline (grid, objective, refine,
        beta_grid_size).

    :returns: A `ReplicationSummary`.
    """
    if pipeline not in RUNNERS:
        raise ArgumentError('unknown pipeline %r, expected one of %s' % (
            pipeline, PIPELINES))

    if int(reps) < 1:
        raise ArgumentError('need at least one replication')

    if pipeline in (METHOD1, METHOD2) and dgp.model.beta_dim == 0:
        raise ArgumentError('%s needs a design with a common parameter' %
                            pipeline)

    if pipeline in (METHOD1, METHOD2) and not 0.0 < gamma < 1.0:
        raise ArgumentError('%s needs 0 < gamma < 1, got %r' % (
            pipeline, gamma))

    if pipeline == IDSET_PERCENTILE and dgp.z_support() is None:
        raise ArgumentError('%s needs a design with discrete covariates' %
                            pipeline)

    effect = effect or dgp.default_effect()
    m_true_se = 0.0

    if m_true is None:
        truth = true_average_effect(dgp, effect)
        m_true, m_true_se = truth.value, truth.se

    LOGGER.info('%d replications of %s on %r', reps, pipeline, dgp)
    records = map_async(replicate, [
        (dgp, pipeline, rep, effect, alpha, gamma, options)
        for rep in range(int(reps))], threads)

    return ReplicationSummary(pipeline, records, m_true, m_true_se)


def sweep(dgp, values, pipeline, reps=DESK_REPS, parameter=None, alpha=0.05,
          gamma=0.0, effect=None, threads=None, **options):
    """One replication summary per value of a design parameter.

    :param parameter: 'beta0', 'a2' or 'gamma'; defaults to the design's
        sweep parameter.

    :returns: A `pandas.DataFrame` with the columns in `SWEEP_COLUMNS`.
    """
    values = list(values)
    parameter = parameter or dgp.sweep_parameter

    if not values:
        raise ArgumentError('sweep needs at least one parameter value')

    if parameter not in dgp.PARAMS:
        raise ArgumentError('design %s has no parameter %r' % (
            dgp.kind, parameter))

    rows = []

    for value in values:
        cell = dgp.replace(**{parameter: value})
        summary = run_replications(cell, pipeline, reps, alpha, gamma,
                                   effect, threads=threads, **options)
        rows.append(summary.to_row(value))

    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)
