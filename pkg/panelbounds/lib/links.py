"""Binary-choice link functions.

Each link exposes the CDF, density and the log CDF, all vectorized over
numpy arrays. Log-probabilities use `log_expit` / `log_ndtr` so that
products over many periods stay accurate.
"""
import numpy as np
from scipy import special

from panelbounds.lib.exceptions import ArgumentError


class Link(object):
    name = None

    def cdf(self, index):
        raise NotImplementedError

    def pdf(self, index):
        raise NotImplementedError

    def log_cdf(self, index):
        raise NotImplementedError

    def log_sf(self, index):
        """Log of 1 - F(index), using symmetry of the error law."""
        return self.log_cdf(-np.asarray(index, dtype=float))

    @property
    def density_peak(self):
        return float(self.pdf(0.0))


class Logit(Link):
    name = 'logit'

    def cdf(self, index):
        return special.expit(index)

    def pdf(self, index):
        p = special.expit(index)
        return p * (1.0 - p)

    def log_cdf(self, index):
        return special.log_expit(index)


class Probit(Link):
    name = 'probit'

    def cdf(self, index):
        return special.ndtr(index)

    def pdf(self, index):
        return np.exp(-0.5 * np.square(index)) / np.sqrt(2.0 * np.pi)

    def log_cdf(self, index):
        return special.log_ndtr(index)


LINKS = {
    Logit.name: Logit(),
    Probit.name: Probit(),
}


def get_link(name):
    try:
        return LINKS[name]
    except KeyError:
        raise ArgumentError('unknown link %r, expected one of %s' % (
            name, sorted(LINKS)))


def normal_quantile(p):
    """Inverse standard normal CDF.

    `ndtri` gives the starting value; one Newton step against `ndtr`
    polishes it.

    :raises: `ArgumentError` unless 0 < p < 1.
    """
    p = float(p)

    if not 0.0 < p < 1.0:
        raise ArgumentError('quantile level must lie in (0, 1), got %r' % p)

    x = float(special.ndtri(p))
    density = np.exp(-0.5 * x * x) / np.sqrt(2.0 * np.pi)

    if density > 0:
        x -= (float(special.ndtr(x)) - p) / density

    return x
