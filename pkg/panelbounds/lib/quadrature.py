import numpy as np
from numpy.polynomial.hermite import hermgauss


def normal_nodes(n_nodes, mean=0.0, sd=1.0):
    """Gauss-Hermite nodes and weights for expectations under N(mean, sd^2).

    :returns: A tuple ``(nodes, weights)`` with weights summing to one.
    """
    x, w = hermgauss(n_nodes)
    return mean + np.sqrt(2.0) * sd * x, w / np.sqrt(np.pi)


def product_normal_nodes(n_nodes, means, sds):
    """Tensor-product rule for independent normal components.

    :returns: ``(nodes, weights)`` with nodes of shape
        ``(n_nodes ** len(means), len(means))``.
    """
    rules = [normal_nodes(n_nodes, m, s) for m, s in zip(means, sds)]
    nodes = np.array(np.meshgrid(*[r[0] for r in rules], indexing='ij'))
    weights = np.array(np.meshgrid(*[r[1] for r in rules], indexing='ij'))

    return (nodes.reshape(len(rules), -1).T,
            weights.reshape(len(rules), -1).prod(axis=0))
