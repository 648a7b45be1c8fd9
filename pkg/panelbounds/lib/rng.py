"""Counter-based random streams.

Every variate family of a replication draws from its own Philox stream
keyed by ``(seed, role, *counters)``. Streams never overlap, so
replications can run in any order on any worker and still reproduce
bit-identical panels.

Documented roles:

- ``heterogeneity``: the intercept A_i (or A_1i).
- ``slope``: random slopes A_2i.
- ``covariate``: covariate noise (eta_it, continuous X_it, discrete x_it).
- ``error``: logistic errors eps_it for t >= 1.
- ``initial``: the period-0 error and covariate of dynamic designs.
- ``shuffle``: the optional permutation before the half-sample split.
- ``oracle``: Monte Carlo draws of the true-effect oracle.
"""
import numpy as np
from scipy import special


ROLES = {
    'heterogeneity': 0,
    'slope': 1,
    'covariate': 2,
    'error': 3,
    'initial': 4,
    'shuffle': 5,
    'oracle': 6,
}


def stream(seed, role, *counters):
    """Return a `numpy.random.Generator` for one documented stream.

    :param seed: The replication seed.
    :param role: One of `ROLES`.
    :param counters: Extra non-negative integers (e.g. a chunk index).
    """
    entropy = [int(seed), ROLES[role]] + [int(c) for c in counters]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(
        entropy)))


def logistic(generator, size):
    """Standard logistic draws by inversion of uniforms."""
    return special.logit(generator.random(size))
