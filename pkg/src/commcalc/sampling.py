"""Random test-matrix generators shared by the verification suite and tests."""

import numpy as np


def random_orthogonal(rng, d):
    Q, R = np.linalg.qr(rng.standard_normal((d, d)))
    return Q * np.sign(np.diag(R))


def random_sym(rng, d, scale=1.0):
    """Symmetric matrix with entries uniform in ``[-scale, scale]``."""
    M = rng.uniform(-scale, scale, (d, d))
    return np.triu(M) + np.triu(M, 1).T


def random_spd(rng, d, log_spread=1.5):
    """spd matrix with eigenvalues ``exp(uniform(-log_spread, log_spread))``."""
    Q = random_orthogonal(rng, d)
    return (Q * np.exp(rng.uniform(-log_spread, log_spread, d))) @ Q.T


def random_square(rng, d):
    return rng.standard_normal((d, d))


def with_eigenvalues(rng, g):
    g = np.asarray(g, dtype=float)
    Q = random_orthogonal(rng, g.size)
    return (Q * g) @ Q.T


def commuting_pair(rng, d):
    """Two symmetric matrices sharing an eigenbasis."""
    Q = random_orthogonal(rng, d)
    return (Q * rng.uniform(-1, 1, d)) @ Q.T, (Q * rng.uniform(-1, 1, d)) @ Q.T
