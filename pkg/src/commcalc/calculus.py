"""Spectral application of bivariate functions of the left/right multiplication pair.

For symmetric ``G = Q diag(g) Q^T`` and any square ``X``::

    f(L_G, R_G) X = Q ([f(g_i, g_j)] * (Q^T X Q)) Q^T

Functions of the halved commutator ``ad_G X = (GX - XG)/2`` use the symbol
``h((x - y)/2)``, functions of the halved anti-commutator ``ac_G`` use
``h((x + y)/2)``.
"""

import numpy as np

from ._validation import check_matrix, check_same_shape
from .exceptions import MultiplicityError, SingularOperatorError, UndefinedValueError, UnsupportedDimensionError
from .functions import ScalarFn2
from .spectral import DEFAULT_CLUSTER_TOL, as_decomp

SINGULAR_SYMBOL_TOL = 1e-12


def ad(G, X):
    """Halved commutator ``(GX - XG)/2``."""
    return (G @ X - X @ G) / 2


def ac(G, X):
    """Halved anti-commutator ``(GX + XG)/2``."""
    return (G @ X + X @ G) / 2


def symbol_matrix(f, dec):
    """The matrix ``[f(g_i, g_j)]``, raising on pairs without a value."""
    gi = dec.g[:, None]
    gj = dec.g[None, :]
    F = np.broadcast_to(f(gi, gj, dec.scale), (dec.d, dec.d)).astype(float)
    bad = ~np.isfinite(F)
    if np.any(bad):
        pairs = [tuple(int(k) for k in p) for p in np.argwhere(bad)]
        vals = [(float(dec.g[i]), float(dec.g[j])) for i, j in pairs]
        raise UndefinedValueError(
            f"{f.name} has no value at spectral pair(s) {pairs} (eigenvalues {vals}); "
            "supply a continuous extension", pairs)
    return F


def _prepare(G, X, tol):
    dec = as_decomp(G, tol)
    X = check_matrix(X)
    if X.shape != (dec.d, dec.d):
        check_same_shape(np.empty((dec.d, dec.d)), X)
    return dec, X


def apply_symbol(F, dec, X):
    """Apply a precomputed symbol matrix in the eigenbasis of ``dec``."""
    Q = dec.Q
    return Q @ (F * (Q.T @ X @ Q)) @ Q.T


def apply_bivariate(f, G, X, tol=DEFAULT_CLUSTER_TOL):
    """``f(L_G, R_G) X`` for a :class:`ScalarFn2` ``f``.

    ``G`` may be a symmetric matrix or a precomputed :class:`SpectralDecomp`.
    """
    dec, X = _prepare(G, X, tol)
    return apply_symbol(symbol_matrix(f, dec), dec, X)


def apply_commutator_function(h, G, X, tol=DEFAULT_CLUSTER_TOL):
    """``h(ad_G) X`` with the halved commutator."""
    return apply_bivariate(ScalarFn2.commutator(h), G, X, tol)


def apply_anticommutator_function(h, G, X, tol=DEFAULT_CLUSTER_TOL):
    """``h(ac_G) X`` with the halved anti-commutator."""
    return apply_bivariate(ScalarFn2.anticommutator(h), G, X, tol)


def invert_operator(f, G, Y, tol=DEFAULT_CLUSTER_TOL):
    """Solve ``f(L_G, R_G) X = Y``.

    Only nonvanishing of the symbol is required; pairs with
    ``|f(g_i, g_j)| <= 1e-12`` raise :class:`SingularOperatorError`.
    """
    dec, Y = _prepare(G, Y, tol)
    F = symbol_matrix(f, dec)
    small = np.abs(F) <= SINGULAR_SYMBOL_TOL
    if np.any(small):
        pairs = [tuple(int(k) for k in p) for p in np.argwhere(small)]
        raise SingularOperatorError(f"{f.name} vanishes at spectral pair(s) {pairs}; operator not invertible", pairs)
    return apply_symbol(1.0 / F, dec, Y)


def symbol_signs(f, G, tol=DEFAULT_CLUSTER_TOL):
    """Sign pattern of the symbol matrix (useful after :func:`invert_operator`)."""
    return np.sign(symbol_matrix(f, as_decomp(G, tol)))


def vandermonde_representation(f, G, tol=DEFAULT_CLUSTER_TOL):
    """Coefficients ``J`` with ``f(L_G, R_G) X = sum_pr J[p, r] G^p X G^r``.

    ``J`` solves ``V J V^T = [f(g_i, g_j)]`` with the Vandermonde matrix
    ``V[i, p] = g_i^p``.  Requires pairwise distinct eigenvalues and ``d <= 4``.
    """
    dec = as_decomp(G, tol)
    if dec.d > 4:
        raise UnsupportedDimensionError(f"Vandermonde representation supports d <= 4, got d = {dec.d}")
    if not dec.distinct:
        raise MultiplicityError("Vandermonde representation needs pairwise distinct eigenvalues")
    F = symbol_matrix(f, dec)
    V = np.vander(dec.g, dec.d, increasing=True)
    return np.linalg.solve(V, np.linalg.solve(V, F.T).T)


def apply_vandermonde(J, G, X):
    """Evaluate ``sum_pr J[p, r] G^p X G^r``."""
    d = J.shape[0]
    powers = [np.eye(d)]
    for _ in range(d - 1):
        powers.append(powers[-1] @ G)
    return sum(J[p, r] * powers[p] @ X @ powers[r] for p in range(d) for r in range(d))
