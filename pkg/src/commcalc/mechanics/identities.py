"""Pointwise identities: rate conversion, monotonicity, the Sobolev gradient
identity, the log-convexity gap and the dissipation comparison."""

from math import factorial

import numpy as np

from .._validation import check_matrix, check_symmetric
from ..calculus import ad, apply_commutator_function, apply_symbol, symbol_matrix
from ..closed_form import log_2x2
from ..derivatives import _spd, derivative_exp, derivative_log, derivative_power, frechet_derivative, log_decomp
from ..exceptions import PreconditionError, UnsupportedDimensionError
from ..functions import ScalarFn2, builtin
from ..spectral import DEFAULT_CLUSTER_TOL, schur_decompose
from .kinematics import FlowKinematics, log_rate, log_spin, upper_convected_rate


def _inner(X, Y):
    return float(np.sum(X * Y))


def _kin(kin):
    return kin if isinstance(kin, FlowKinematics) else FlowKinematics.from_gradient(kin)


def rate_conversion_residual(G, dGdt, kin, tol=DEFAULT_CLUSTER_TOL):
    """Residuals of the two equivalent relations between logarithmic and upper-convected rates.

    With ``A = e^G`` and ``dA/dt = Dexp(G)[dG/dt]``, returns
    ``(||G_log - 2D - Dlog(A)[A_uc]||, ||A_uc - Dexp(G)[G_log - 2D]||)``.
    The logarithmic rate of ``G`` uses the spin of ``H = G / 2``.
    """
    G = check_symmetric(G)
    dGdt = check_matrix(dGdt, "dGdt")
    k = _kin(kin)
    dec = schur_decompose(G, tol)
    A = dec.function(np.exp)
    dAdt = derivative_exp(dec, dGdt)
    G_log = 2 * log_rate(G / 2, dGdt / 2, k, tol)
    A_uc = upper_convected_rate(A, dAdt, k)
    r1 = np.linalg.norm(G_log - 2 * k.D - derivative_log(A, A_uc, tol=tol))
    r2 = np.linalg.norm(A_uc - derivative_exp(dec, G_log - 2 * k.D))
    return float(r1), float(r2)


def ft_st_residuals(H, kin, tol=DEFAULT_CLUSTER_TOL):
    """Check the two building blocks of the logarithmic reformulation.

    ``dH/dB (WB - BW) = -2 ad_H W`` and
    ``dH/dB (DB + BD) = (2 ad_H) coth(2 ad_H) D`` with ``B = e^{2H}``.
    The third residual checks that their sum equals ``D - (H Omega - Omega H)``
    with the logarithmic spin ``Omega``.
    """
    H = check_symmetric(H, "H")
    k = _kin(kin)
    B = schur_decompose(H, tol).function(lambda h: np.exp(2 * h))
    lhs1 = derivative_log(B, k.W @ B - B @ k.W, tol=tol) / 2
    r1 = np.linalg.norm(lhs1 + 2 * ad(H, k.W))
    lhs2 = derivative_log(B, k.D @ B + B @ k.D, tol=tol) / 2
    rhs2 = apply_commutator_function(builtin("x_over_tanh").scaled(2.0), H, k.D, tol)
    r2 = np.linalg.norm(lhs2 - rhs2)
    Om = log_spin(H, k, tol)
    r3 = np.linalg.norm(lhs1 + lhs2 - (k.D - (H @ Om - Om @ H)))
    return float(r1), float(r2), float(r3)


# ---------------------------------------------------------------------------
# monotonicity

MONO_GRID = 65
MONO_XTOL = 1e-10


def monotonicity_representation(f, G, H, tol=DEFAULT_CLUSTER_TOL):
    """Mean-value representation of ``(f(G) - f(H)) . (G - H)``.

    Returns ``(value, xi, residual)``: ``xi`` is located by bisection on
    ``phi(s) = Df(G_s)[G - H] . (G - H) - value`` with ``G_s = (1-s) H + s G``,
    and ``residual = | ||sqrt(dd f at G_xi)(G - H)||^2 - value |``.
    If ``phi`` vanishes identically, any ``s`` works and ``xi = 0.5``.
    """
    G = check_symmetric(G, "G")
    H = check_symmetric(H, "H")
    dG, dH = schur_decompose(G, tol), schur_decompose(H, tol)
    lo = min(dG.g[0], dH.g[0])
    hi = max(dG.g[-1], dH.g[-1])
    grid = np.linspace(lo, hi, 257)
    fp = f.deriv(grid)
    if not np.all(np.isfinite(fp)) or np.any(fp < -1e-12):
        raise PreconditionError(f"{f.name} is not nondecreasing on [{lo:.6g}, {hi:.6g}]")
    delta = G - H
    value = _inner(dG.function(f) - dH.function(f), delta)
    dd = ScalarFn2.divided_difference(f, tol)

    def phi(s):
        Gs = (1 - s) * H + s * G
        return _inner(frechet_derivative(f, Gs, delta, tol), delta) - value

    ss = np.linspace(0.0, 1.0, MONO_GRID)
    vals = np.array([phi(s) for s in ss])
    scale = max(1.0, abs(value))
    if np.max(np.abs(vals)) <= 1e-13 * scale:
        xi = 0.5
    else:
        xi = None
        for i in range(MONO_GRID - 1):
            if vals[i] == 0.0:
                xi = ss[i]
                break
            if vals[i] * vals[i + 1] < 0:
                a, b, fa, fb = ss[i], ss[i + 1], vals[i], vals[i + 1]
                while b - a > MONO_XTOL:
                    m = (a + b) / 2
                    fm = phi(m)
                    if fm == 0.0:
                        a = b = m
                        break
                    if (fm < 0) == (fa < 0):
                        a, fa = m, fm
                    else:
                        b, fb = m, fm
                # final linear interpolation inside the bracket
                xi = a if a == b else a - fa * (b - a) / (fb - fa)
                break
        if xi is None:
            xi = float(ss[int(np.argmin(np.abs(vals)))])
    Gx = schur_decompose((1 - xi) * H + xi * G, tol)
    F = symbol_matrix(dd, Gx)
    root = np.sqrt(np.maximum(F, 0.0))
    rep = apply_symbol(root, Gx, delta)
    residual = abs(_inner(rep, rep) - value)
    return value, float(xi), float(residual)


# ---------------------------------------------------------------------------
# Sobolev identity


def _check_r(r):
    r = float(r)
    if r in (0.0, -1.0):
        raise PreconditionError(f"exponent r = {r:g} is excluded (r must differ from 0 and -1)")
    return r


def _grads(grads, d):
    out = [check_symmetric(g, "grad") for g in grads]
    if any(g.shape != (d, d) for g in out):
        raise PreconditionError("gradient components must match the dimension of B")
    return out


def sobolev_identity(B, grads, r, tol=DEFAULT_CLUSTER_TOL):
    """``(lhs, rhs, commutator_term)`` of the gradient identity for ``B^r``.

    ``lhs = (1/r) sum_k d_k(B^r) . d_k B`` and
    ``rhs = 4/(r+1)^2 (|grad B^s|^2 + |(x omega)(ad_{log B}) grad B^s|^2)``
    with ``s = (r+1)/2``; the returned commutator term is the second
    summand including its prefactor.
    """
    r = _check_r(r)
    dec = _spd(B, tol, "B")
    grads = _grads(grads, dec.d)
    L = log_decomp(dec)
    xw = builtin("x_omega", r)
    s = (r + 1) / 2
    lhs = 0.0
    base = 0.0
    comm = 0.0
    for gk in grads:
        lhs += _inner(derivative_power(dec, r, gk, tol=tol), gk) / r
        Ys = derivative_power(dec, s, gk, tol=tol)
        base += _inner(Ys, Ys)
        Z = apply_commutator_function(xw, L, Ys)
        comm += _inner(Z, Z)
    c = 4 / (r + 1) ** 2
    return float(lhs), float(c * (base + comm)), float(c * comm)


def sobolev_delta_form(B, grads, r, tol=DEFAULT_CLUSTER_TOL):
    """Right-hand side of the gradient identity for ``d = 2`` via the invariant ``delta``.

    ``delta = sqrt(tr^2(log B)/4 - det log B)`` and the commutator energy
    collapses to ``omega(delta)^2 |ad_{log B} grad B^s|^2``.
    """
    r = _check_r(r)
    B = check_symmetric(B, "B")
    if B.shape != (2, 2):
        raise UnsupportedDimensionError("the delta form is specific to d = 2")
    dec = _spd(B, tol, "B")
    grads = _grads(grads, 2)
    Lg, delta = log_2x2(B)
    w = float(builtin("omega", r)(delta))
    s = (r + 1) / 2
    total = 0.0
    for gk in grads:
        Ys = derivative_power(dec, s, gk, tol=tol)
        C = ad(Lg, Ys)
        total += _inner(Ys, Ys) + w * w * _inner(C, C)
    return float(4 / (r + 1) ** 2 * total)


# ---------------------------------------------------------------------------
# log-convexity gap

SERIES_TERM_TOL = 1e-14
SERIES_MAX_TERMS = 200


def logconv_gap(A, X, r, tol=DEFAULT_CLUSTER_TOL):
    """``(gap, series)`` for ``gap = P(r)X . P(-r)X - |P(0)X|^2``.

    ``P(r) = eta((1 + r) l)`` with ``l = 2 ad_{log A}``.  The series is
    ``sum_n 2 4^n (sum_{k<=n} r^{2k}) / (2n+2)! |A^{1/2} (ad^n X) A^{-1/2}|^2``,
    truncated once a term drops below ``1e-14`` (relative to the sum).
    """
    dec = _spd(A, tol)
    X = check_matrix(X)
    L = log_decomp(dec)
    eta = builtin("eta")
    P = lambda t: apply_commutator_function(eta.scaled(2 * (1 + t)), L, X)  # noqa: E731
    P0 = P(0.0)
    gap = _inner(P(float(r)), P(-float(r))) - _inner(P0, P0)
    Lm = L.matrix
    half = dec.function(np.sqrt)
    ihalf = dec.function(lambda a: 1 / np.sqrt(a))
    r2 = float(r) ** 2
    series = 0.0
    Y = X
    rsum = 0.0
    for n in range(1, SERIES_MAX_TERMS + 1):
        Y = ad(Lm, Y)
        rsum += r2**n
        Z = half @ Y @ ihalf
        term = 2 * 4.0**n * rsum / factorial(2 * n + 2) * _inner(Z, Z)
        series += term
        if term <= SERIES_TERM_TOL * max(series, 1e-300) or term == 0.0:
            break
    return float(gap), float(series)


# ---------------------------------------------------------------------------
# dissipation


def dissipation_compare(B, grads, N=12, tol=DEFAULT_CLUSTER_TOL):
    """``(full, partial_sums)`` comparing the two dissipation densities.

    ``full = sum_k |B^{-1/2} d_k B B^{-1/2}|^2`` and
    ``partial_sums[N] = sum_{n<=N} 8 16^n / (2n+2)! |ad_H^n grad H|^2``
    with ``H = log(B) / 2``; the ``n = 0`` term equals ``|grad log B|^2``.
    """
    dec = _spd(B, tol, "B")
    grads = _grads(grads, dec.d)
    if N < 0:
        raise PreconditionError("truncation N must be nonnegative")
    ihalf = dec.function(lambda b: 1 / np.sqrt(b))
    full = 0.0
    terms = np.zeros(N + 1)
    Hm = dec.function(np.log) / 2
    for gk in grads:
        Z = ihalf @ gk @ ihalf
        full += _inner(Z, Z)
        Y = derivative_log(dec, gk, tol=tol) / 2
        for n in range(N + 1):
            terms[n] += 8 * 16.0**n / factorial(2 * n + 2) * _inner(Y, Y)
            Y = ad(Hm, Y)
    return float(full), np.cumsum(terms)


def dissipation_tail_bound(B, grads, N, tol=DEFAULT_CLUSTER_TOL):
    """Upper bound of the neglected terms ``n > N`` of the dissipation series.

    Uses ``|ad_H^n Y| <= rho^n |Y|`` with ``rho = (h_max - h_min)/2``.
    """
    dec = _spd(B, tol, "B")
    grads = _grads(grads, dec.d)
    h = np.log(dec.g) / 2
    rho2 = ((h[-1] - h[0]) / 2) ** 2
    y2 = sum(_inner(Y, Y) for Y in (derivative_log(dec, g, tol=tol) / 2 for g in grads))
    tail = 0.0
    for n in range(N + 1, N + 60):
        tail += 8 * 16.0**n / factorial(2 * n + 2) * rho2**n * y2
    return float(tail)
