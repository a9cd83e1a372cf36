"""Brute-force reference implementations, used only by tests and example generation.

Matrices are vectorized row-major, matching the matrix file format, so that
``vec(A X B) = kron(A, B^T) vec(X)``.
"""

from math import factorial

import numpy as np

from ._validation import check_matrix, check_symmetric
from .exceptions import PreconditionError, SeriesDivergenceError, UnsupportedDimensionError
from .calculus import symbol_matrix
from .spectral import DEFAULT_CLUSTER_TOL, as_decomp

MAX_DENSE_DIM = 4
SERIES_MAX_N = 60
SERIES_TOL = 1e-14


def vec(X):
    return np.asarray(X, dtype=float).reshape(-1)


def unvec(v, d):
    return np.asarray(v, dtype=float).reshape(d, d)


def left_operator(M):
    """Dense matrix of ``X -> M X``."""
    M = np.asarray(M, float)
    return np.kron(M, np.eye(M.shape[0]))


def right_operator(M):
    """Dense matrix of ``X -> X M``."""
    M = np.asarray(M, float)
    return np.kron(np.eye(M.shape[0]), M.T)


def dense_operator_of(f, G, tol=DEFAULT_CLUSTER_TOL):
    """The ``d^2 x d^2`` matrix of ``f(L_G, R_G)``: ``(Q kron Q) diag(vec F) (Q kron Q)^T``."""
    dec = as_decomp(G, tol)
    if dec.d > MAX_DENSE_DIM:
        raise UnsupportedDimensionError(f"dense operators are limited to d <= {MAX_DENSE_DIM}")
    F = symbol_matrix(f, dec)
    QQ = np.kron(dec.Q, dec.Q)
    return QQ @ np.diag(vec(F)) @ QQ.T


def apply_dense(op, X):
    X = check_matrix(X)
    return unvec(op @ vec(X), X.shape[0])


def exp_coeffs(a=1.0):
    """Coefficients of ``exp(a x)``."""
    return lambda n: a**n / factorial(n)


def eta_coeffs(a=1.0):
    """Coefficients of ``(exp(a x) - 1) / (a x)``."""
    return lambda n: a**n / factorial(n + 1)


def nested_commutator_series(coeffs, G, X, N=None):
    """``sum_n c_n ad_G^n X`` with the halved commutator.

    ``coeffs`` is a sequence or a callable ``n -> c_n``.  Without ``N`` the
    sum stops once two consecutive terms are below ``1e-14 ||X||``; it raises
    :class:`SeriesDivergenceError` if that does not happen by ``n = 60``.
    """
    G = check_symmetric(G)
    X = check_matrix(X)
    c = coeffs if callable(coeffs) else (lambda n: coeffs[n] if n < len(coeffs) else 0.0)
    nX = np.linalg.norm(X)
    out = np.zeros_like(X)
    Y = X
    small = 0
    last = N if N is not None else SERIES_MAX_N
    for n in range(last + 1):
        term = c(n) * Y
        out = out + term
        if N is None:
            small = small + 1 if np.linalg.norm(term) < SERIES_TOL * max(nX, 1e-300) else 0
            if small >= 2 or nX == 0:
                return out
        Y = (G @ Y - Y @ G) / 2
    if N is None:
        raise SeriesDivergenceError(f"commutator series did not converge within {SERIES_MAX_N} terms")
    return out


def _matfun(f, M):
    g, Q = np.linalg.eigh((M + M.T) / 2)
    with np.errstate(all="ignore"):
        vals = np.asarray(f(g), float)
    if not np.all(np.isfinite(vals)):
        raise PreconditionError("perturbed matrix leaves the domain of the function")
    return (Q * vals) @ Q.T


def default_step(G, X):
    return 1e-5 * (1 + np.linalg.norm(G)) / (1 + np.linalg.norm(X))


def finite_difference_frechet(f, G, X, h=None):
    """Central difference ``(f(G + hX) - f(G - hX)) / 2h`` for symmetric ``X``."""
    G = check_symmetric(G)
    X = check_symmetric(X, "X")
    if h is None:
        h = default_step(G, X)
    return (_matfun(f, G + h * X) - _matfun(f, G - h * X)) / (2 * h)
