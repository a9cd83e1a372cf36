import numpy as np
import pytest
from hypothesis import given

from commcalc import PreconditionError, cluster_eigenvalues, is_positive_definite, matrix_function, schur_decompose
from commcalc.exceptions import NotSymmetricError
from commcalc.spectral import spectral_scale
from tests.helpers import sym


def test_identity_single_cluster():
    dec = schur_decompose(np.eye(3))
    np.testing.assert_allclose(dec.g, [1, 1, 1])
    assert dec.clusters == ((0, 1, 2),)
    np.testing.assert_allclose(dec.Q.T @ dec.Q, np.eye(3), atol=1e-15)


def test_diagonal():
    dec = schur_decompose(np.diag([2.0, 1.0]))
    np.testing.assert_allclose(dec.g, [1, 2])
    np.testing.assert_allclose(np.abs(dec.Q), [[0, 1], [1, 0]])
    assert dec.distinct


@given(sym())
def test_reconstruction(G):
    dec = schur_decompose(G)
    assert np.linalg.norm(dec.matrix - G) <= 1e-12 * 3 * dec.scale
    assert np.all(np.diff(dec.g) >= 0)


def test_arrays_read_only():
    dec = schur_decompose(np.diag([1.0, 2.0]))
    with pytest.raises(ValueError):
        dec.g[0] = 5


def test_positive_definite():
    assert is_positive_definite(np.eye(2))
    assert not is_positive_definite(np.diag([1.0, -1.0]))
    assert not is_positive_definite(np.diag([1.0, 1e-14]))


def test_chain_merging():
    g = np.array([0.0, 0.6e-8, 1.2e-8, 1.0])
    assert cluster_eigenvalues(g) == ((0, 1, 2), (3,))


def test_scale_floor():
    assert spectral_scale([0.1, -0.2]) == 1.0
    assert spectral_scale([-5.0, 2.0]) == 5.0


def test_rejects_nonsymmetric_and_bad_tol():
    with pytest.raises(NotSymmetricError):
        schur_decompose(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(PreconditionError):
        schur_decompose(np.eye(2), tol=0.1)
    with pytest.raises(PreconditionError):
        schur_decompose(np.ones((2, 3)))


def test_matrix_function(rng):
    M = rng.standard_normal((3, 3))
    A = M @ M.T + np.eye(3)
    S = matrix_function(A, np.sqrt)
    np.testing.assert_allclose(S @ S, A, atol=1e-12)
    with pytest.raises(PreconditionError):
        matrix_function(-A, np.log)
