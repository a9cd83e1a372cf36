import math

import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given
from hypothesis import strategies as st

from commcalc import (EXP_VARIANTS, LOG_VARIANTS, POWER_VARIANTS, TRIG_HYP_VARIANTS, PreconditionError,
                      builtin, chain_rule_commutator, derivative, derivative_exp, derivative_log,
                      derivative_power, derivative_trig_hyp, dlog_applied, dlog_half_sandwich,
                      dlog_symmetric_product, dpower_applied, frechet_derivative, hadamard_identity,
                      schur_decompose)
from commcalc.calculus import ad, apply_commutator_function
from commcalc.exceptions import NotPositiveDefiniteError
from commcalc.oracles import finite_difference_frechet
from commcalc.sampling import commuting_pair, random_spd, with_eigenvalues
from tests.helpers import rel, spd_pair, sym_pair


def _mpow(A, p):
    return schur_decompose(A).function(lambda a: a**p)


# --- exp ---------------------------------------------------------------------

@given(sym_pair())
def test_exp_variants_agree_and_match_scipy(GX):
    G, X = GX
    ref = sla.expm_frechet(G, X, compute_expm=False)
    for v in EXP_VARIANTS:
        assert rel(derivative_exp(G, X, v), ref) <= 1e-10, v


def test_exp_examples(rng):
    X = rng.standard_normal((3, 3))
    for v in EXP_VARIANTS:
        np.testing.assert_allclose(derivative_exp(np.zeros((3, 3)), X, v), X, atol=1e-14)
    G, H = commuting_pair(rng, 3)
    E = schur_decompose(G).function(np.exp)
    for v in EXP_VARIANTS:
        assert rel(derivative_exp(G, H, v), E @ H) <= 1e-11


def test_exp_divided_difference_entry():
    G = np.diag([0.0, np.log(2.0)])
    X = np.array([[0.0, 1.0], [0.0, 0.0]])
    Y = derivative_exp(G, X)
    assert Y[0, 1] == pytest.approx(1 / np.log(2.0), rel=1e-14)
    assert rel(Y, sla.expm_frechet(G, X, compute_expm=False)) <= 1e-12


def test_long_variant_names(rng):
    G = rng.uniform(-1, 1, (2, 2))
    G = G + G.T
    X = rng.standard_normal((2, 2))
    np.testing.assert_allclose(derivative_exp(G, X, "integral_E0"), derivative_exp(G, X, "E0"))
    with pytest.raises(PreconditionError):
        derivative_exp(G, X, "E9")


# --- log ---------------------------------------------------------------------

@given(spd_pair())
def test_log_variants_agree(AX):
    A, Y = AX
    ref = derivative_log(A, Y)
    for v in LOG_VARIANTS:
        assert rel(derivative_log(A, Y, v), ref) <= 1e-10, v


def test_log_examples(rng):
    Y = rng.standard_normal((3, 3))
    for v in LOG_VARIANTS:
        np.testing.assert_allclose(derivative_log(np.eye(3), Y, v), Y, atol=1e-13)
    Z = derivative_log(np.diag([4.0, 1.0]), np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert Z[0, 1] == pytest.approx(math.log(4) / 3, rel=1e-14)
    with pytest.raises(NotPositiveDefiniteError):
        derivative_log(np.diag([1.0, -1.0]), np.eye(2))


def test_log_round_trip(rng):
    for _ in range(20):
        A = random_spd(rng, 3)
        X = rng.standard_normal((3, 3))
        L = schur_decompose(A).function(np.log)
        assert rel(derivative_log(A, derivative_exp(L, X)), X) <= 1e-9
        assert rel(derivative_exp(L, derivative_log(A, X)), X) <= 1e-10


# --- power -------------------------------------------------------------------

@given(spd_pair(), st.sampled_from([-1.5, -0.5, 0.5, 1.0, 2.0, 2.7, 3.0]))
def test_power_variants_agree(AX, r):
    A, X = AX
    ref = derivative_power(A, r, X)
    for v in POWER_VARIANTS:
        if v == "PP00" and not float(r).is_integer():
            continue
        assert rel(derivative_power(A, r, X, v), ref) <= 1e-10, v


def test_power_examples(rng):
    A = random_spd(rng, 3)
    X = rng.standard_normal((3, 3))
    for v in POWER_VARIANTS:
        np.testing.assert_allclose(derivative_power(A, 1.0, X, v), X, atol=1e-12)
        assert rel(derivative_power(A, 2.0, X, v), A @ X + X @ A) <= 1e-12
    Z = derivative_power(np.diag([4.0, 1.0]), 0.5, np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert Z[0, 1] == pytest.approx(1 / 3, rel=1e-14)
    with pytest.raises(PreconditionError):
        derivative_power(A, 0.5, X, "PP00")
    A3 = np.linalg.matrix_power(A, 2)
    np.testing.assert_allclose(derivative_power(A, 3, X, "PP00"), A3 @ X + A @ X @ A + X @ A3, atol=1e-11)


# --- trig / hyperbolic ---------------------------------------------------------

@given(sym_pair(), st.sampled_from(["cosh", "sinh", "cos", "sin"]))
def test_trig_hyp_variants(GX, which):
    G, X = GX
    ref = frechet_derivative(builtin(which), G, X)
    for v in TRIG_HYP_VARIANTS:
        assert rel(derivative_trig_hyp(G, X, which, v), ref) <= 1e-10


def test_trig_hyp_examples(rng):
    X = rng.standard_normal((2, 2))
    Z = np.zeros((2, 2))
    for v in TRIG_HYP_VARIANTS:
        np.testing.assert_allclose(derivative_trig_hyp(Z, X, "sin", v), X, atol=1e-15)
        np.testing.assert_allclose(derivative_trig_hyp(Z, X, "cosh", v), 0, atol=1e-15)
    G = rng.uniform(-1, 1, (2, 2))
    G = G + G.T
    S = X + X.T
    assert rel(derivative_trig_hyp(G, S, "sinh"), finite_difference_frechet(np.sinh, G, S)) <= 1e-6


# --- near-degenerate spectra ----------------------------------------------------

@pytest.mark.parametrize("gap", [1e-3, 1e-5, 1e-7, 1e-9, 1e-11])
def test_variants_near_coincident_eigenvalues(rng, gap):
    G = with_eigenvalues(rng, [-0.6, 0.3, 0.3 + gap])
    A = with_eigenvalues(rng, [0.5, 2.0, 2.0 + gap])
    X = rng.standard_normal((3, 3))
    ref = sla.expm_frechet(G, X, compute_expm=False)
    for v in EXP_VARIANTS:
        assert rel(derivative_exp(G, X, v), ref) <= 1e-9, v
    ref = derivative_log(A, X)
    for v in LOG_VARIANTS:
        assert rel(derivative_log(A, X, v), ref) <= 1e-9, v
    ref = derivative_power(A, 0.7, X)
    for v in ("PP0", "PP1", "PP2"):
        assert rel(derivative_power(A, 0.7, X, v), ref) <= 1e-9, v


def test_log_against_mpmath_oracle(rng):
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 40
    A = random_spd(rng, 3)
    X = rng.standard_normal((3, 3))
    h = mp.mpf("1e-15")
    Am, Xm = mp.matrix(A.tolist()), mp.matrix(X.tolist())
    fd = (mp.logm(Am + h * Xm) - mp.logm(Am - h * Xm)) / (2 * h)
    ref = np.array(fd.tolist(), dtype=float)
    assert rel(derivative_log(A, X), ref) <= 1e-12


# --- general f, dispatcher, chain rule -----------------------------------------------

def test_frechet_identity_and_commuting(rng):
    G, H = commuting_pair(rng, 3)
    X = rng.standard_normal((3, 3))
    np.testing.assert_allclose(frechet_derivative(builtin("identity"), G, X), X, atol=1e-14)
    Dp = schur_decompose(G).function(builtin("tanh").deriv)
    assert rel(frechet_derivative(builtin("tanh"), G, H), Dp @ H) <= 1e-11


def test_dispatcher(rng):
    A = random_spd(rng, 2)
    X = rng.standard_normal((2, 2))
    np.testing.assert_allclose(derivative("log", A, X, "L3"), derivative_log(A, X))
    np.testing.assert_allclose(derivative("power", A, X, param=0.5), derivative_power(A, 0.5, X))
    np.testing.assert_allclose(derivative("tanh", A, X), frechet_derivative(builtin("tanh"), A, X))
    with pytest.raises(PreconditionError):
        derivative("power", A, X)
    with pytest.raises(PreconditionError):
        derivative("tanh", A, X, "E1")


@given(sym_pair(), st.sampled_from(["exp", "sinh", "tanh", "cube", "sin", "identity"]))
def test_chain_rule(GX, name):
    G, X = GX
    assert chain_rule_commutator(builtin(name), G, X) <= 1e-10 * max(1, np.linalg.norm(X))


def test_chain_rule_commuting_is_zero(rng):
    G, H = commuting_pair(rng, 3)
    assert chain_rule_commutator(builtin("exp"), G, H) <= 1e-13


# --- Hadamard identities and applied derivatives -------------------------------------------------

@given(spd_pair(), st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
def test_hadamard_identity(AX, p, q):
    A, X = AX
    assert rel(hadamard_identity(A, p, q, X), _mpow(A, p) @ X @ _mpow(A, q)) <= 1e-10


def test_hadamard_examples(rng):
    A = random_spd(rng, 3)
    X = rng.standard_normal((3, 3))
    np.testing.assert_allclose(hadamard_identity(A, 0, 0, X), X, atol=1e-13)
    assert rel(hadamard_identity(A, 1, 0, X), A @ X) <= 1e-12
    L = schur_decompose(A).function(np.log)
    campbell = apply_commutator_function(builtin("exp"), L, X)
    assert rel(hadamard_identity(A, 0.5, -0.5, X), campbell) <= 1e-12
    # direct evaluation of A^{1/2} X A^{-1/2}
    assert rel(campbell, _mpow(A, 0.5) @ X @ _mpow(A, -0.5)) <= 1e-12


@given(spd_pair(), st.floats(-1.0, 2.0), st.floats(-1.0, 1.5), st.floats(-1.0, 1.5),
       st.sampled_from(["minus", "plus"]))
def test_dpower_applied_forms(AX, r, p, q, sign):
    A, X = AX
    assert rel(dpower_applied(A, r, p, q, X, sign), dpower_applied(A, r, p, q, X, sign, form="direct")) <= 1e-10


def test_dpower_applied_examples(rng):
    A = random_spd(rng, 3)
    X = rng.standard_normal((3, 3))
    np.testing.assert_allclose(dpower_applied(A, 0.7, 0.4, 0.4, X, "minus"), 0, atol=1e-13)
    assert rel(dpower_applied(A, 1.0, 1, 0, X, "plus"), A @ X + X @ A) <= 1e-12
    lhs = derivative_power(A, 0.5, A @ X + X @ A)
    assert rel(dpower_applied(A, 0.5, 1, 0, X, "plus"), lhs) <= 1e-10


@given(spd_pair(), st.floats(-1.0, 1.5), st.floats(-1.0, 1.5), st.sampled_from(["minus", "plus"]))
def test_dlog_applied_forms(AX, p, q, sign):
    A, X = AX
    assert rel(dlog_applied(A, p, q, X, sign), dlog_applied(A, p, q, X, sign, form="direct")) <= 1e-10


def test_dlog_applied_full_commutator(rng):
    for _ in range(20):
        A = random_spd(rng, 3)
        X = rng.standard_normal((3, 3))
        L = schur_decompose(A).function(np.log)
        out = dlog_applied(A, 1, 0, X, "minus")
        assert np.linalg.norm(out - (L @ X - X @ L)) <= 1e-11 * max(1, np.linalg.norm(out))
        assert rel(out, derivative_log(A, A @ X - X @ A)) <= 1e-11


def test_dlog_refinements(rng):
    mu, nu = builtin("mu"), builtin("nu")
    for _ in range(20):
        A = random_spd(rng, 3)
        X = rng.standard_normal((3, 3))
        L = schur_decompose(A).function(np.log)
        ad2 = ad(L, ad(L, X))
        sym_form = 2 * X + 2 * apply_commutator_function(mu, L, ad2)
        sandwich_form = X - apply_commutator_function(nu, L, ad2)
        assert rel(dlog_symmetric_product(A, X), sym_form) <= 1e-10
        assert rel(dlog_applied(A, 1, 0, X, "plus"), sym_form) <= 1e-10
        assert rel(dlog_half_sandwich(A, X), sandwich_form) <= 1e-10
        assert rel(dlog_half_sandwich(A, X), derivative_log(A, _mpow(A, 0.5) @ X @ _mpow(A, 0.5))) <= 1e-10
        assert rel(dlog_applied(A, 0.5, 0.5, X, "plus"), 2 * sandwich_form) <= 1e-10


def test_dlog_commuting_equivalence(rng):
    for _ in range(20):
        A, X = commuting_pair(rng, 3)
        A = schur_decompose(A).function(np.exp)
        assert np.linalg.norm(dlog_applied(A, 1, 0, X, "plus") - 2 * X) <= 1e-10 * max(1, np.linalg.norm(X))
        np.testing.assert_allclose(dlog_applied(A, 1, 0, X, "minus"), 0, atol=1e-12)
        A2 = random_spd(rng, 3)
        Y = rng.standard_normal((3, 3))
        assert np.linalg.norm(A2 @ Y - Y @ A2) > 1e-10 * np.linalg.norm(A2) * np.linalg.norm(Y)
        assert np.linalg.norm(dlog_applied(A2, 1, 0, Y, "plus") - 2 * Y) > 1e-10


def test_fault_injection_flips_fast_path(rng, monkeypatch):
    A = random_spd(rng, 2)
    X = rng.standard_normal((2, 2))
    good = dlog_applied(A, 1, 0, X, "minus")
    monkeypatch.setenv("COMMCALC_FAULT", "dlog_p1_sign")
    np.testing.assert_allclose(dlog_applied(A, 1, 0, X, "minus"), -good)
