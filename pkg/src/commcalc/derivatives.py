"""Fréchet derivatives of matrix functions at symmetric arguments.

The default ``dk`` variant is the divided-difference (Daleckiĭ–Kreĭn) symbol
applied in the eigenbasis.  The other variants realize the same linear map
through structurally different operator formulas (left/right multiplication
composed with functions of the halved commutator and anti-commutator, or
integral representations on a 64-point Gauss–Legendre rule) and exist mainly
so that they can be checked against each other.
"""

import os

import numpy as np

from ._validation import check_matrix, check_same_shape
from .calculus import ac, ad, apply_anticommutator_function, apply_bivariate, apply_commutator_function, invert_operator
from .exceptions import NotPositiveDefiniteError, PreconditionError
from .functions import ScalarFn1, ScalarFn2, builtin
from .spectral import DEFAULT_CLUSTER_TOL, SpectralDecomp, as_decomp, cluster_eigenvalues, spectral_scale

QUADRATURE_POINTS = 64
_nodes, _weights = np.polynomial.legendre.leggauss(QUADRATURE_POINTS)
GL_NODES = (_nodes + 1) / 2
GL_WEIGHTS = _weights / 2

EXP_VARIANTS = ("dk", "E0", "E1", "E2", "E3", "E4")
LOG_VARIANTS = ("dk", "L0", "L1", "L2", "L3", "L4", "L5", "L6")
POWER_VARIANTS = ("dk", "PP0", "PP00", "PP1", "PP2")
TRIG_HYP_VARIANTS = ("dk", "anticomm", "exp_ac")

_LONG_NAMES = {
    "integral_E0": "E0", "left_E1": "E1", "right_E2": "E2", "anticomm_E3": "E3", "exp_ac_E4": "E4",
    "integral_L5": "L5", "integral_L6": "L6", "left_L1": "L1", "right_L2": "L2", "anticomm_L3": "L3",
    "exp_ac_L4": "L4", "inverse_of_dexp_L0": "L0",
    "integral_PP0": "PP0", "sum_PP00": "PP00", "anticomm_PP1": "PP1", "exp_ac_PP2": "PP2",
}

_FAULT_ENV = "COMMCALC_FAULT"


def _variant(v, allowed):
    v = _LONG_NAMES.get(v, v)
    if v not in allowed:
        raise PreconditionError(f"unknown variant {v!r}; choose from {', '.join(allowed)}")
    return v


def _fn(name, param=None):
    return builtin(name, param)


def _spd(A, tol=DEFAULT_CLUSTER_TOL, name="A"):
    dec = as_decomp(A, tol)
    if not dec.g[0] > dec.tol * dec.scale:
        raise NotPositiveDefiniteError(
            f"{name} must be positive definite (smallest eigenvalue {dec.g[0]:.3g})")
    return dec


def log_decomp(dec):
    """Decomposition of ``log A`` sharing the eigenvectors of ``A``."""
    lg = np.log(dec.g)
    scale = spectral_scale(lg)
    lgf = np.array(lg)
    lgf.setflags(write=False)
    return SpectralDecomp(Q=dec.Q, g=lgf, clusters=cluster_eigenvalues(lg, dec.tol, scale),
                          scale=scale, tol=dec.tol)


def _direction(dec, X):
    X = check_matrix(X)
    check_same_shape(np.empty((dec.d, dec.d)), X)
    return X


def _scaled_commutator(h, a):
    """``h(a x)`` packaged for application to ``ad``."""
    return ScalarFn1(f"{h.name}({a:g}x)", lambda x: h(a * x))


def frechet_derivative(f, G, X, tol=DEFAULT_CLUSTER_TOL):
    """Derivative of ``G -> f(G)`` at symmetric ``G`` in direction ``X`` (any square ``X``)."""
    return apply_bivariate(ScalarFn2.divided_difference(f, tol), G, X, tol)


def derivative_exp(G, X, variant="dk", tol=DEFAULT_CLUSTER_TOL):
    variant = _variant(variant, EXP_VARIANTS)
    dec = as_decomp(G, tol)
    X = _direction(dec, X)
    if variant == "dk":
        return frechet_derivative(_fn("exp"), dec, X, tol)
    if variant == "E0":
        out = np.zeros_like(X)
        for s, w in zip(GL_NODES, GL_WEIGHTS):
            out += w * dec.function(lambda g: np.exp((1 - s) * g)) @ X @ dec.function(lambda g: np.exp(s * g))
        return out
    eG = dec.function(np.exp)
    if variant == "E1":
        return eG @ apply_commutator_function(_scaled_commutator(_fn("eta"), -2.0), dec, X)
    if variant == "E2":
        return apply_commutator_function(_scaled_commutator(_fn("eta"), 2.0), dec, X) @ eG
    if variant == "E3":
        return ac(eG, apply_commutator_function(_fn("tanhc"), dec, X))
    return apply_anticommutator_function(_fn("exp"), dec, apply_commutator_function(_fn("sinch"), dec, X))


def derivative_log(A, Y, variant="dk", tol=DEFAULT_CLUSTER_TOL):
    variant = _variant(variant, LOG_VARIANTS)
    dec = _spd(A, tol)
    Y = _direction(dec, Y)
    if variant == "dk":
        return frechet_derivative(_fn("log"), dec, Y, tol)
    if variant == "L5":
        kernel = ScalarFn2("log-kernel", lambda x, y, scale: sum(
            w / ((1 - s) * x + s * y) for s, w in zip(GL_NODES, GL_WEIGHTS)))
        return apply_bivariate(kernel, dec, Y)
    if variant == "L6":
        A_mat = dec.matrix
        eye = np.eye(dec.d)
        out = np.zeros_like(Y)
        for s, w in zip(GL_NODES, GL_WEIGHTS):
            M = (1 - s) * eye + s * A_mat
            # M is a convex combination of I and an spd matrix, hence spd
            Z = np.linalg.solve(M, Y)
            out += w * np.linalg.solve(M.T, Z.T).T
        return out
    L = log_decomp(dec)
    if variant == "L0":
        return invert_operator(ScalarFn2.divided_difference(_fn("exp"), tol), L, Y)
    Ainv = dec.function(lambda a: 1 / a)
    if variant == "L1":
        return Ainv @ apply_commutator_function(_scaled_commutator(_fn("inv_eta"), -2.0), L, Y)
    if variant == "L2":
        return apply_commutator_function(_scaled_commutator(_fn("inv_eta"), 2.0), L, Y) @ Ainv
    if variant == "L3":
        return ac(Ainv, apply_commutator_function(_scaled_commutator(_fn("x_over_sinh"), 2.0), L, Y))
    return apply_anticommutator_function(_scaled_commutator(_fn("exp"), -1.0), L,
                                         apply_commutator_function(_fn("x_over_sinh"), L, Y))


def _power_of(dec, r):
    return dec.function(lambda a: a**r)


def derivative_power(A, r, X, variant="dk", tol=DEFAULT_CLUSTER_TOL):
    variant = _variant(variant, POWER_VARIANTS)
    r = float(r)
    if variant == "PP00":
        if not (r.is_integer() and r >= 0):
            raise PreconditionError(f"the finite-sum variant needs a natural exponent, got r = {r:g}")
        dec = as_decomp(A, tol)
        X = _direction(dec, X)
        n = int(r)
        Am = dec.matrix
        powers = [np.eye(dec.d)]
        for _ in range(max(n - 1, 0)):
            powers.append(powers[-1] @ Am)
        return sum((powers[k] @ X @ powers[n - 1 - k] for k in range(n)), np.zeros_like(X))
    dec = _spd(A, tol)
    X = _direction(dec, X)
    if variant == "dk":
        return frechet_derivative(_fn("power", r), dec, X, tol)
    if variant == "PP0":
        kernel = ScalarFn2("power-kernel", lambda x, y, scale: r * sum(
            w * ((1 - s) * x + s * y) ** (r - 1) for s, w in zip(GL_NODES, GL_WEIGHTS)))
        return apply_bivariate(kernel, dec, X)
    L = log_decomp(dec)
    if variant == "PP1":
        tc, xt = _fn("tanhc"), _fn("x_over_tanh")
        h = ScalarFn1("1+tanh((r-1)x)/tanh(x)", lambda u: 1 + (r - 1) * tc((r - 1) * u) * xt(u))
        return ac(_power_of(dec, r - 1), apply_commutator_function(h, L, X))
    sc, xs = _fn("sinch"), _fn("x_over_sinh")
    h = ScalarFn1("sinh(rx)/sinh(x)", lambda u: r * sc(r * u) * xs(u))
    return apply_anticommutator_function(_scaled_commutator(_fn("exp"), r - 1), L,
                                         apply_commutator_function(h, L, X))


_TRIG_HYP = {
    # which: (matrix function for ac, sign, ratio for ac form, scalar function of ac, ratio for exp_ac form)
    "cosh": ("sinh", 1.0, "tanhc", "sinh", "sinch"),
    "sinh": ("cosh", 1.0, "tanhc", "cosh", "sinch"),
    "cos": ("sin", -1.0, "tanc", "sin", "sinc"),
    "sin": ("cos", 1.0, "tanc", "cos", "sinc"),
}


def derivative_trig_hyp(G, X, which, variant="dk", tol=DEFAULT_CLUSTER_TOL):
    if which not in _TRIG_HYP:
        raise PreconditionError(f"unknown function {which!r}; choose from {', '.join(_TRIG_HYP)}")
    variant = _variant(variant, TRIG_HYP_VARIANTS)
    dec = as_decomp(G, tol)
    X = _direction(dec, X)
    if variant == "dk":
        return frechet_derivative(_fn(which), dec, X, tol)
    phi, sign, ratio_ac, psi, ratio_exp = _TRIG_HYP[which]
    if variant == "anticomm":
        return sign * ac(dec.function(_fn(phi)), apply_commutator_function(_fn(ratio_ac), dec, X))
    return sign * apply_anticommutator_function(_fn(psi), dec, apply_commutator_function(_fn(ratio_exp), dec, X))


def hadamard_identity(A, p, q, X, tol=DEFAULT_CLUSTER_TOL):
    """``A^p X A^q`` evaluated as ``e^{(p+q) ac_G} e^{(p-q) ad_G} X`` with ``G = log A``."""
    dec = _spd(A, tol)
    X = _direction(dec, X)
    L = log_decomp(dec)
    exp = _fn("exp")
    Y = apply_commutator_function(_scaled_commutator(exp, p - q), L, X)
    return apply_anticommutator_function(_scaled_commutator(exp, p + q), L, Y)


def _sign(sign):
    if sign not in ("minus", "plus"):
        raise PreconditionError(f"sign must be 'minus' or 'plus', got {sign!r}")
    return -1.0 if sign == "minus" else 1.0


def _combination(dec, p, q, X, s):
    Ap, Aq = _power_of(dec, p), _power_of(dec, q)
    return Ap @ X @ Aq + s * (Aq @ X @ Ap)


def dpower_applied(A, r, p, q, X, sign, form="closed", tol=DEFAULT_CLUSTER_TOL):
    """Derivative of ``A^r`` applied to ``A^p X A^q -/+ A^q X A^p``.

    ``form="closed"`` evaluates the single operator formula in ``ad`` and
    ``ac`` of ``log A``; ``form="direct"`` differentiates the combination.
    """
    s = _sign(sign)
    dec = _spd(A, tol)
    X = _direction(dec, X)
    if form == "direct":
        return derivative_power(dec, r, _combination(dec, p, q, X, s), tol=tol)
    L = log_decomp(dec)
    sc, xs = _fn("sinch"), _fn("x_over_sinh")
    hyp = np.sinh if s < 0 else np.cosh
    k = p - q
    h = ScalarFn1("W-kernel", lambda u: 2 * r * sc(r * u) * xs(u) * hyp(k * u))
    Y = apply_commutator_function(h, L, X)
    return apply_anticommutator_function(_scaled_commutator(_fn("exp"), p + q + r - 1), L, Y)


def dlog_applied(A, p, q, X, sign, form="closed", tol=DEFAULT_CLUSTER_TOL):
    """Derivative of ``log A`` applied to ``A^p X A^q -/+ A^q X A^p``.

    For ``(p, q, sign) = (1, 0, "minus")`` the result is the full commutator
    ``log A X - X log A``, returned without any function evaluation on ``ad``.
    """
    s = _sign(sign)
    dec = _spd(A, tol)
    X = _direction(dec, X)
    if form == "direct":
        return derivative_log(dec, _combination(dec, p, q, X, s), tol=tol)
    L = log_decomp(dec)
    if (p, q) == (1, 0) and s < 0:
        Lm = L.matrix
        out = Lm @ X - X @ Lm
        if os.environ.get(_FAULT_ENV) == "dlog_p1_sign":
            out = -out
        return out
    xs = _fn("x_over_sinh")
    hyp = np.sinh if s < 0 else np.cosh
    k = p - q
    h = ScalarFn1("O-kernel", lambda u: 2 * xs(u) * hyp(k * u))
    Y = apply_commutator_function(h, L, X)
    return apply_anticommutator_function(_scaled_commutator(_fn("exp"), p + q - 1), L, Y)


def dlog_symmetric_product(A, X, tol=DEFAULT_CLUSTER_TOL):
    """``2X + 2 mu(ad) ad^2 X``: the derivative of ``log A`` applied to ``AX + XA``."""
    dec = _spd(A, tol)
    X = _direction(dec, X)
    L = log_decomp(dec)
    Lm = L.matrix
    return 2 * X + 2 * apply_commutator_function(_fn("mu"), L, ad(Lm, ad(Lm, X)))


def dlog_half_sandwich(A, X, tol=DEFAULT_CLUSTER_TOL):
    """``X - nu(ad) ad^2 X``: the derivative of ``log A`` applied to ``A^(1/2) X A^(1/2)``."""
    dec = _spd(A, tol)
    X = _direction(dec, X)
    L = log_decomp(dec)
    Lm = L.matrix
    return X - apply_commutator_function(_fn("nu"), L, ad(Lm, ad(Lm, X)))


def chain_rule_commutator(f, G, X, tol=DEFAULT_CLUSTER_TOL):
    """Residual ``||ad_{f(G)} X - Df(G)[ad_G X]||_F``."""
    dec = as_decomp(G, tol)
    X = _direction(dec, X)
    fG = dec.function(f)
    lhs = ad(fG, X)
    rhs = frechet_derivative(f, dec, ad(dec.matrix, X), tol)
    return float(np.linalg.norm(lhs - rhs))


def derivative(name, G, X, variant="dk", param=None, tol=DEFAULT_CLUSTER_TOL):
    """Dispatch on the function name: ``exp``, ``log``, ``power`` (with ``param``), trig/hyperbolic, or any catalog name."""
    if name == "exp":
        return derivative_exp(G, X, variant, tol)
    if name == "log":
        return derivative_log(G, X, variant, tol)
    if name == "power":
        if param is None:
            raise PreconditionError("power needs the exponent parameter")
        return derivative_power(G, param, X, variant, tol)
    if name in _TRIG_HYP:
        return derivative_trig_hyp(G, X, name, variant, tol)
    if variant != "dk":
        raise PreconditionError(f"only the dk variant is available for {name!r}")
    f = name if isinstance(name, ScalarFn1) else builtin(name, param)
    return frechet_derivative(f, G, X, tol)
