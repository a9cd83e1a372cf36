"""scikit-learn style wrappers: fit on a symmetric base matrix, transform directions.

    >>> op = CommutatorFunction("langevin", kind="commutator").fit(G)
    >>> Y = op.transform(X)          # X of shape (d, d) or (n, d, d)
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_batch
from .calculus import apply_symbol, invert_operator, symbol_matrix
from .closed_form import apply_closed_form
from .derivatives import derivative
from .exceptions import PreconditionError
from .functions import ScalarFn1, ScalarFn2, builtin
from .spectral import DEFAULT_CLUSTER_TOL, schur_decompose

KINDS = ("commutator", "anticommutator", "left", "right", "bivariate")


def _symbol(func, kind, param):
    if kind == "bivariate":
        if not isinstance(func, ScalarFn2):
            raise PreconditionError("kind='bivariate' needs a ScalarFn2")
        return func
    h = func if isinstance(func, ScalarFn1) else builtin(func, param)
    if kind == "commutator":
        return ScalarFn2.commutator(h)
    if kind == "anticommutator":
        return ScalarFn2.anticommutator(h)
    if kind == "left":
        return ScalarFn2.left(h)
    if kind == "right":
        return ScalarFn2.right(h)
    raise PreconditionError(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")


class CommutatorFunction(TransformerMixin, BaseEstimator):
    """The linear map ``X -> f(L_G, R_G) X`` for a fixed symmetric ``G``.

    ``method="closed_form"`` is available for ``kind="commutator"`` with
    ``d <= 3`` and uses no eigenvectors.
    """

    def __init__(self, func="exp", kind="commutator", param=None, method="spectral", tol=DEFAULT_CLUSTER_TOL):
        self.func = func
        self.kind = kind
        self.param = param
        self.method = method
        self.tol = tol

    def fit(self, G, y=None):
        if self.method not in ("spectral", "closed_form"):
            raise PreconditionError(f"unknown method {self.method!r}")
        if self.method == "closed_form" and self.kind != "commutator":
            raise PreconditionError("closed forms exist for kind='commutator' only")
        self.decomposition_ = schur_decompose(G, self.tol)
        self.symbol_ = _symbol(self.func, self.kind, self.param)
        self.symbol_matrix_ = symbol_matrix(self.symbol_, self.decomposition_)
        self.n_features_in_ = self.decomposition_.d
        return self

    def transform(self, X):
        check_is_fitted(self, "decomposition_")
        stack, single = check_batch(X, self.n_features_in_)
        if self.method == "closed_form":
            G = self.decomposition_.matrix
            h = self.func if isinstance(self.func, ScalarFn1) else builtin(self.func, self.param)
            out = np.array([apply_closed_form(h, G, Xi, self.tol) for Xi in stack])
        else:
            out = np.array([apply_symbol(self.symbol_matrix_, self.decomposition_, Xi) for Xi in stack])
        return out[0] if single else out

    def inverse_transform(self, Y):
        check_is_fitted(self, "decomposition_")
        stack, single = check_batch(Y, self.n_features_in_, "Y")
        out = np.array([invert_operator(self.symbol_, self.decomposition_, Yi) for Yi in stack])
        return out[0] if single else out


class MatrixDerivative(TransformerMixin, BaseEstimator):
    """The Fréchet derivative of ``f`` at a fixed symmetric base, applied to directions."""

    def __init__(self, func="exp", variant="dk", param=None, tol=DEFAULT_CLUSTER_TOL):
        self.func = func
        self.variant = variant
        self.param = param
        self.tol = tol

    def fit(self, G, y=None):
        self.decomposition_ = schur_decompose(G, self.tol)
        self.n_features_in_ = self.decomposition_.d
        # fail early on bad names, variants or base matrices
        derivative(self.func, self.decomposition_, np.zeros((self.n_features_in_,) * 2),
                   self.variant, self.param, self.tol)
        return self

    def transform(self, X):
        check_is_fitted(self, "decomposition_")
        stack, single = check_batch(X, self.n_features_in_)
        out = np.array([derivative(self.func, self.decomposition_, Xi, self.variant, self.param, self.tol)
                        for Xi in stack])
        return out[0] if single else out
