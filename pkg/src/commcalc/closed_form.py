"""Eigenvector-free evaluation of ``f(ad_G) X`` for ``d <= 3``.

Only the eigenvalues of ``G`` enter, and they are computed by closed-form
root formulas (quadratic for ``d = 2``, trigonometric Cardano for ``d = 3``).
The result is a fixed polynomial in ``G`` and ``X`` whose scalar coefficients
are odd/even divided-difference invariants of ``f``.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_matrix, check_same_shape, check_symmetric
from .exceptions import NotPositiveDefiniteError, UnsupportedDimensionError
from .functions import builtin, odd_even_split
from .spectral import DEFAULT_CLUSTER_TOL, cluster_eigenvalues, spectral_scale


def eigenvalues_closed_form(G):
    """Ascending eigenvalues of a symmetric ``G`` with ``d <= 3``, without iteration."""
    d = G.shape[0]
    if d == 1:
        return np.array([G[0, 0]])
    if d == 2:
        m = (G[0, 0] + G[1, 1]) / 2
        rad = np.hypot((G[0, 0] - G[1, 1]) / 2, G[0, 1])
        return np.array([m - rad, m + rad])
    if d == 3:
        q = np.trace(G) / 3
        off = G[0, 1] ** 2 + G[0, 2] ** 2 + G[1, 2] ** 2
        p2 = ((G[0, 0] - q) ** 2 + (G[1, 1] - q) ** 2 + (G[2, 2] - q) ** 2 + 2 * off) / 6
        if p2 == 0.0:
            return np.array([q, q, q])
        p = np.sqrt(p2)
        r = np.clip(np.linalg.det((G - q * np.eye(3)) / p) / 2, -1.0, 1.0)
        phi = np.arccos(r) / 3
        hi = q + 2 * p * np.cos(phi)
        lo = q + 2 * p * np.cos(phi + 2 * np.pi / 3)
        return np.sort(np.array([lo, 3 * q - hi - lo, hi]))
    raise UnsupportedDimensionError(f"closed-form eigenvalues need d <= 3, got d = {d}")


@dataclass(frozen=True)
class Invariants3D:
    J1: float
    J2: float
    J3: float
    K: tuple
    L: tuple


def _cyclic_quotient(o, a, b, c, n):
    """``(a^n o(b,c) + b^n o(c,a) + c^n o(a,b)) / ((a-b)(b-c)(c-a))`` with ``(b, c)`` the closest pair.

    ``o(x, y)`` stands for ``o((x - y) / 2)`` with ``o`` odd.  The sum over the
    two far pairs is rewritten as a divided difference so that the factor
    ``b - c`` cancels analytically instead of numerically.
    """
    s = b - c
    p, q = (a - b) / 2, (a - c) / 2
    dd = (o(p) - o(q)) / (p - q)
    e_n = (0.0, 1.0, b + c)[n]
    head = a**n * o(s / 2) / s if s != 0 else 0.0
    num_over_s = head - b**n * dd / 2 - e_n * o(p)
    return num_over_s / ((a - b) * (c - a))


def invariants_3d(split, g):
    """The invariants ``J1..J3``, ``K0..K2``, ``L0..L2`` for three distinct eigenvalues."""
    g = np.asarray(g, dtype=float)
    gaps = [abs(g[1] - g[2]), abs(g[2] - g[0]), abs(g[0] - g[1])]
    k = int(np.argmin(gaps))
    a, b, c = g[k], g[(k + 1) % 3], g[(k + 2) % 3]
    fo = lambda t: float(split.f_odd(t))  # noqa: E731
    fe = lambda t: float(split.f_even(t)) / (2 * t)  # noqa: E731
    K = tuple(_cyclic_quotient(fo, a, b, c, n) for n in range(3))
    L = tuple(_cyclic_quotient(fe, a, b, c, n) for n in range(3))
    J1 = g[0] + g[1] + g[2]
    J2 = g[0] * g[1] + g[1] * g[2] + g[2] * g[0]
    J3 = g[0] * g[1] * g[2]
    return Invariants3D(float(J1), float(J2), float(J3), K, L)


def closed_form_2(split, g1, g2, G, X):
    """Two distinct eigenvalues ``g1 != g2`` (valid in any dimension)."""
    u = (g1 - g2) / 2
    s = g1 - g2
    GX, XG = G @ X, X @ G
    out = split.f0 * X + float(split.f_odd(u)) / s * (GX - XG)
    even = float(split.f_even(u)) / s**2
    if even != 0.0:
        out = out + even * (-2 * g1 * g2 * X + (g1 + g2) * (GX + XG) - 2 * G @ X @ G)
    return out


def closed_form_3(split, g, G, X):
    """Three pairwise distinct eigenvalues."""
    inv = invariants_3d(split, g)
    K0, K1, K2 = inv.K
    L0, L1, L2 = inv.L
    J1, J2, J3 = inv.J1, inv.J2, inv.J3
    G2 = G @ G
    GX, XG = G @ X, X @ G
    G2X, XG2 = G2 @ X, X @ G2
    GXG = G @ XG
    G2XG, GXG2 = G2 @ XG, GX @ G2
    G2XG2 = G2 @ X @ G2
    return (-K2 * (GX - XG) + K1 * (G2X - XG2) - K0 * (G2XG - GXG2)
            + (split.f0 + 2 * J3 * L1) * X - (J2 * L1 + J3 * L0) * (GX + XG)
            + 2 * (L2 + J2 * L0) * GXG + (J1 * L1 - L2) * (G2X + XG2)
            - (L1 + J1 * L0) * (G2XG + GXG2) + 2 * L0 * G2XG2)


def apply_closed_form(f, G, X, tol=DEFAULT_CLUSTER_TOL, split=None):
    """``f(ad_G) X`` for symmetric ``G`` with ``d <= 3`` without eigenvectors.

    The multiplicity branch follows the eigenvalue clusters at relative
    tolerance ``tol``; with two distinct clusters the two-eigenvalue formula
    is used with the cluster means.
    """
    G = check_symmetric(G)
    X = check_matrix(X)
    check_same_shape(G, X)
    d = G.shape[0]
    if d > 3:
        raise UnsupportedDimensionError(f"closed forms exist for d <= 3 only, got d = {d}; use the spectral path")
    if split is None:
        split = odd_even_split(f)
    if d == 1:
        return split.f0 * X
    g = eigenvalues_closed_form(G)
    clusters = cluster_eigenvalues(g, tol, spectral_scale(g))
    if len(clusters) == 1:
        return split.f0 * X
    if len(clusters) == 2:
        means = sorted(float(np.mean(g[list(c)])) for c in clusters)
        return closed_form_2(split, means[1], means[0], G, X)
    return closed_form_3(split, g, G, X)


def log_2x2(A):
    """Logarithm of a 2x2 spd matrix as ``c0 I + c1 A`` (two-point interpolation)."""
    a_lo, a_hi = eigenvalues_closed_form(A)
    if a_lo <= 0:
        raise NotPositiveDefiniteError("theta fast path needs a positive definite A")
    t = (a_hi - a_lo) / a_lo
    lg = np.log1p(t)
    c1 = lg / (a_hi - a_lo) if t != 0 else 1 / a_lo
    c0 = np.log(a_lo) - c1 * a_lo
    return c0 * np.eye(2) + c1 * A, abs(lg) / 2


def theta_fast_path_2d(A, X):
    """Derivative of the matrix logarithm at a 2x2 spd ``A`` applied to ``X``.

    Writes ``2x / sinh 2x = 1 + theta(x) x`` with ``theta`` odd, which turns
    ``theta(ad_{log A})`` into a scalar multiple of ``ad_{log A}``.
    """
    A = check_symmetric(A, "A")
    X = check_matrix(X)
    check_same_shape(A, X, ("A", "X"))
    if A.shape != (2, 2):
        raise UnsupportedDimensionError("theta fast path is specific to d = 2")
    Lg, delta = log_2x2(A)
    det = A[0, 0] * A[1, 1] - A[0, 1] ** 2
    Ainv = np.array([[A[1, 1], -A[0, 1]], [-A[0, 1], A[0, 0]]]) / det
    M = Lg @ Lg @ X - 2 * Lg @ X @ Lg + X @ Lg @ Lg
    c = float(builtin("theta_over_x")(delta)) / 8
    return (Ainv @ X + X @ Ainv) / 2 + c * (Ainv @ M + M @ Ainv)
