"""Symmetric eigendecomposition, eigenvalue clustering and matrix functions."""

from dataclasses import dataclass

import numpy as np

from ._validation import check_symmetric
from .exceptions import DecompositionError, PreconditionError

DEFAULT_CLUSTER_TOL = 1e-8
MAX_CLUSTER_TOL = 1e-3


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def spectral_scale(g):
    """Magnitude reference ``max(1, max|g_i|)`` used by all relative tolerances."""
    g = np.asarray(g, dtype=float)
    return float(max(1.0, np.max(np.abs(g)))) if g.size else 1.0


def cluster_eigenvalues(g, tol=DEFAULT_CLUSTER_TOL, scale=None):
    """Partition ascending eigenvalues into chain-merged clusters.

    Neighbours closer than ``tol * scale`` are merged, and merging is
    transitive, so a cluster may be wider than the threshold if it is bridged
    by a chain of small gaps.
    """
    g = np.asarray(g, dtype=float)
    if scale is None:
        scale = spectral_scale(g)
    order = np.argsort(g, kind="stable")
    clusters = [[int(order[0])]]
    for prev, cur in zip(order[:-1], order[1:]):
        if g[cur] - g[prev] <= tol * scale:
            clusters[-1].append(int(cur))
        else:
            clusters.append([int(cur)])
    return tuple(tuple(c) for c in clusters)


@dataclass(frozen=True)
class SpectralDecomp:
    """``G = Q diag(g) Q^T`` with ascending ``g`` and a cluster partition.

    Arrays are read-only, so one decomposition can be shared between threads
    and reused for any number of operator applications.
    """

    Q: np.ndarray
    g: np.ndarray
    clusters: tuple
    scale: float
    tol: float = DEFAULT_CLUSTER_TOL

    @property
    def d(self):
        return self.g.shape[0]

    @property
    def matrix(self):
        return (self.Q * self.g) @ self.Q.T

    def function(self, phi):
        """Matrix function ``phi(G) = Q phi(g) Q^T``."""
        with np.errstate(all="ignore"):
            values = np.asarray(phi(self.g), dtype=float)
        if not np.all(np.isfinite(values)):
            bad = [float(v) for v, ok in zip(self.g, np.isfinite(values)) if not ok]
            raise PreconditionError(f"function undefined at eigenvalue(s) {bad}")
        return (self.Q * values) @ self.Q.T

    def to_eigenbasis(self, X):
        return self.Q.T @ X @ self.Q

    def from_eigenbasis(self, Y):
        return self.Q @ Y @ self.Q.T

    @property
    def distinct(self):
        """True when every cluster is a singleton."""
        return len(self.clusters) == self.d


def schur_decompose(G, tol=DEFAULT_CLUSTER_TOL):
    """Symmetric Schur (spectral) decomposition with clustering at relative ``tol``."""
    if not 0.0 <= tol <= MAX_CLUSTER_TOL:
        raise PreconditionError(f"cluster tolerance must lie in [0, {MAX_CLUSTER_TOL}], got {tol}")
    G = check_symmetric(G)
    try:
        g, Q = np.linalg.eigh(G)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(f"symmetric eigensolver failed: {exc}") from exc
    scale = spectral_scale(g)
    return SpectralDecomp(Q=_frozen(Q), g=_frozen(g), clusters=cluster_eigenvalues(g, tol, scale),
                          scale=scale, tol=tol)


def as_decomp(G, tol=DEFAULT_CLUSTER_TOL):
    """Pass a :class:`SpectralDecomp` through, decompose anything else."""
    if isinstance(G, SpectralDecomp):
        return G
    return schur_decompose(G, tol)


def is_positive_definite(G, tol=DEFAULT_CLUSTER_TOL):
    """True iff the smallest eigenvalue exceeds ``tol * scale``."""
    dec = as_decomp(G, tol)
    return bool(dec.g[0] > dec.tol * dec.scale)


def matrix_function(G, phi, tol=DEFAULT_CLUSTER_TOL):
    return as_decomp(G, tol).function(phi)
