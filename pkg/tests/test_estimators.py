import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from commcalc import (CommutatorFunction, MatrixDerivative, PreconditionError, apply_commutator_function,
                      builtin, derivative_log)
from commcalc.calculus import apply_anticommutator_function
from commcalc.exceptions import NotPositiveDefiniteError
from commcalc.sampling import random_spd, random_sym
from tests.helpers import rel


def test_params_and_clone():
    est = CommutatorFunction("tanh", kind="anticommutator", tol=1e-9)
    assert est.get_params() == {"func": "tanh", "kind": "anticommutator", "param": None,
                                "method": "spectral", "tol": 1e-9}
    c = clone(est).set_params(func="exp")
    assert c.func == "exp" and est.func == "tanh"


def test_transform_single_and_batch(rng):
    G = random_sym(rng, 3)
    Xs = rng.standard_normal((4, 3, 3))
    est = CommutatorFunction("langevin").fit(G)
    out = est.transform(Xs)
    assert out.shape == (4, 3, 3)
    for X, Y in zip(Xs, out):
        assert rel(Y, apply_commutator_function(builtin("langevin"), G, X)) <= 1e-14
    np.testing.assert_allclose(est.transform(Xs[0]), out[0])
    assert est.n_features_in_ == 3


def test_anticommutator_and_closed_form(rng):
    G = random_sym(rng, 3)
    X = rng.standard_normal((3, 3))
    est = CommutatorFunction("cosh", kind="anticommutator").fit(G)
    assert rel(est.transform(X), apply_anticommutator_function(builtin("cosh"), G, X)) <= 1e-14
    cf = CommutatorFunction("exp", method="closed_form").fit(G)
    assert rel(cf.transform(X), CommutatorFunction("exp").fit(G).transform(X)) <= 1e-9
    with pytest.raises(PreconditionError):
        CommutatorFunction("exp", kind="left", method="closed_form").fit(G)


def test_inverse_transform(rng):
    G = random_sym(rng, 3)
    X = rng.standard_normal((3, 3))
    est = CommutatorFunction("exp").fit(G)
    np.testing.assert_allclose(est.inverse_transform(est.transform(X)), X, atol=1e-12)


def test_fit_transform_shapes(rng):
    G = random_sym(rng, 2)
    est = CommutatorFunction("exp")
    with pytest.raises(NotFittedError):
        est.transform(np.eye(2))
    est.fit(G)
    with pytest.raises(PreconditionError):
        est.transform(np.eye(3))
    with pytest.raises(PreconditionError):
        CommutatorFunction("exp", kind="sideways").fit(G)


def test_matrix_derivative(rng):
    A = random_spd(rng, 3)
    Xs = rng.standard_normal((2, 3, 3))
    est = MatrixDerivative("log", variant="L4").fit(A)
    out = est.transform(Xs)
    for X, Y in zip(Xs, out):
        assert rel(Y, derivative_log(A, X)) <= 1e-12
    with pytest.raises(NotPositiveDefiniteError):
        MatrixDerivative("log").fit(-A)
    with pytest.raises(PreconditionError):
        MatrixDerivative("exp", variant="L4").fit(A)
