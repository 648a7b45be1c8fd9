"""Result types returned by estimation, inference and identification."""
import logging

import numpy as np

from panelbounds.lib.exceptions import ArgumentError


LOGGER = logging.getLogger(__name__)


class Result(object):
    """Base for records with an accumulated `warnings` list."""

    def __init__(self, warnings=None):
        self.warnings = list(warnings or [])

    def warn(self, message, *args):
        message = message % args if args else message
        LOGGER.warning(message)
        self.warnings.append(message)


class BetaEstimate(Result):
    """A common-parameter estimate with its covariance.

    :param beta: Estimate, shape (K,).
    :param vcov: Covariance matrix of the estimate, (K, K).
    :param n_used: Number of informative units.
    :param converged: Whether the score norm fell below tolerance.
    """

    def __init__(self, beta, vcov, n_used, converged, iterations=0,
                 score_norm=None, log_likelihood=None, vcov_type='hessian',
                 warnings=None):
        Result.__init__(self, warnings)
        self.beta = np.asarray(beta, dtype=float).ravel()
        vcov = np.atleast_2d(np.asarray(vcov, dtype=float))
        self.vcov = (vcov + vcov.T) / 2
        self.n_used = int(n_used)
        self.converged = bool(converged)
        self.iterations = iterations
        self.score_norm = score_norm
        self.log_likelihood = log_likelihood
        self.vcov_type = vcov_type

    @classmethod
    def known(cls, beta):
        """A degenerate estimate: beta known, zero covariance."""
        beta = np.asarray(beta, dtype=float).ravel()

        return cls(beta, np.zeros((beta.size, beta.size)), 0, True,
                   vcov_type='known')

    @property
    def dim(self):
        return self.beta.size

    @property
    def se(self):
        return np.sqrt(np.clip(np.diag(self.vcov), 0, None))

    def to_record(self):
        return {
            'beta': self.beta.tolist(),
            'vcov': self.vcov.tolist(),
            'se': self.se.tolist(),
            'n_used': self.n_used,
            'converged': self.converged,
            'iterations': self.iterations,
            'score_norm': self.score_norm,
            'log_likelihood': self.log_likelihood,
            'vcov_type': self.vcov_type,
            'warnings': self.warnings,
        }


def mean_and_sigma(values):
    """Sample mean and standard deviation with divisor len(values)."""
    values = np.asarray(values, dtype=float)

    if values.size == 0:
        raise ArgumentError('cannot average an empty sample')

    mean = values.mean()

    return float(mean), float(np.sqrt(np.mean((values - mean) ** 2)))


class BoundsEstimate(Result):
    """Sample outer bounds with per-unit contributions.

    Attributes:

    - KNOWN_BETA, CROSS_FIT, CROSS_FIT_SET: construction methods.
    - halves: for cross-fitted estimates, one dict per half with its index
      set, anchor betas and half-sample means and deviations.
    - functions: the distinct bound functions behind the per-unit values.

    """
    KNOWN_BETA = 'known_beta'
    CROSS_FIT = 'cross_fit'
    CROSS_FIT_SET = 'cross_fit_set'
    METHODS = (KNOWN_BETA, CROSS_FIT, CROSS_FIT_SET)

    def __init__(self, lower, upper, method, halves=None, fits=None,
                 functions=None, effect=None, warnings=None):
        Result.__init__(self, warnings)

        if method not in self.METHODS:
            raise ArgumentError('unknown bounds method %r' % method)

        self.lower = np.asarray(lower, dtype=float).ravel()
        self.upper = np.asarray(upper, dtype=float).ravel()

        if self.lower.size != self.upper.size:
            raise ArgumentError('per-unit lower and upper differ in length')

        self.method = method
        self.halves = halves or []
        self.fits = list(fits or [])
        self.functions = list(functions or [])
        self.effect = effect
        self.L_hat, self.sigma_L = mean_and_sigma(self.lower)
        self.U_hat, self.sigma_U = mean_and_sigma(self.upper)

    @property
    def n(self):
        return self.lower.size

    @property
    def per_unit(self):
        return np.column_stack([self.lower, self.upper])

    @property
    def width(self):
        return self.U_hat - self.L_hat

    def to_record(self, per_unit=False):
        record = {
            'method': self.method,
            'n': self.n,
            'L_hat': self.L_hat,
            'U_hat': self.U_hat,
            'sigma_L': self.sigma_L,
            'sigma_U': self.sigma_U,
            'halves': self.halves,
            'fits': [fit.to_record() for fit in self.fits],
            'effect': None if self.effect is None else self.effect.to_record(),
            'distinct_programs': len(self.functions),
            'warnings': self.warnings,
        }

        if per_unit:
            record['per_unit'] = self.per_unit.tolist()

        return record


class ConfidenceInterval(Result):
    """An interval for the average effect at level 1 - alpha - gamma."""
    THEOREM1 = 'theorem1'
    METHOD1 = 'method1'
    METHOD2 = 'method2'
    METHODS = (THEOREM1, METHOD1, METHOD2)

    def __init__(self, lower, upper, alpha, gamma, method, diagnostics=None,
                 warnings=None):
        Result.__init__(self, warnings)

        if method not in self.METHODS:
            raise ArgumentError('unknown interval method %r' % method)

        if lower > upper:
            raise ArgumentError('interval lower %g exceeds upper %g' % (
                lower, upper))

        self.lower = float(lower)
        self.upper = float(upper)
        self.alpha = float(alpha)
        self.gamma = float(gamma)
        self.method = method
        self.diagnostics = diagnostics or {}

    @property
    def width(self):
        return self.upper - self.lower

    def contains(self, value):
        return self.lower <= value <= self.upper

    def to_record(self):
        return {
            'lower': self.lower,
            'upper': self.upper,
            'alpha': self.alpha,
            'gamma': self.gamma,
            'method': self.method,
            'diagnostics': self.diagnostics,
            'warnings': self.warnings,
        }


class IdentifiedSet(Result):
    """Sharp identified set aggregated over conditioning values.

    :param per_z: List of (L_id(z), U_id(z)) pairs.
    :param weights: Weights w(z) in the same order.
    :param slack: Feasibility slack used by the final solve.
    """

    def __init__(self, per_z, weights, slack, warnings=None):
        Result.__init__(self, warnings)
        self.per_z = np.asarray(per_z, dtype=float).reshape(-1, 2)
        self.weights = np.asarray(weights, dtype=float).ravel()
        self.slack = float(slack)
        self.lower = float(self.weights.dot(self.per_z[:, 0]))
        self.upper = float(self.weights.dot(self.per_z[:, 1]))

    @property
    def width(self):
        return self.upper - self.lower

    def to_record(self):
        return {
            'lower': self.lower,
            'upper': self.upper,
            'per_z': self.per_z.tolist(),
            'weights': self.weights.tolist(),
            'slack': self.slack,
            'warnings': self.warnings,
        }
