"""Input validation helpers shared by all modules."""

import numpy as np

from .exceptions import NotSymmetricError, PreconditionError

SYMMETRY_RTOL = 1e-12


def check_matrix(X, name="X"):
    """Return ``X`` as a finite square float64 array."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != X.shape[1] or X.shape[0] == 0:
        raise PreconditionError(f"{name} must be a non-empty square matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise PreconditionError(f"{name} has non-finite entries")
    return X


def check_symmetric(G, name="G"):
    """Return the symmetrized copy ``(G + G.T) / 2`` of an almost symmetric matrix.

    Asymmetry up to ``1e-12 * max|G_ij|`` is treated as roundoff and averaged
    away; anything larger raises :class:`NotSymmetricError`.
    """
    G = check_matrix(G, name)
    asym = np.max(np.abs(G - G.T))
    if asym > SYMMETRY_RTOL * np.max(np.abs(G)):
        raise NotSymmetricError(f"{name} is not symmetric (max |{name} - {name}^T| = {asym:.3g})")
    return (G + G.T) / 2


def check_same_shape(G, X, names=("G", "X")):
    if G.shape != X.shape:
        raise PreconditionError(f"dimension mismatch: {names[0]} is {G.shape}, {names[1]} is {X.shape}")


def check_batch(X, d, name="X"):
    """Accept a single ``(d, d)`` matrix or a stack ``(n, d, d)``.

    Returns the stack and a flag telling whether the input was a single matrix.
    """
    X = np.asarray(X, dtype=float)
    single = X.ndim == 2
    if single:
        X = X[None]
    if X.ndim != 3 or X.shape[1:] != (d, d):
        raise PreconditionError(f"{name} must have shape ({d}, {d}) or (n, {d}, {d}), got {X.shape}")
    if not np.all(np.isfinite(X)):
        raise PreconditionError(f"{name} has non-finite entries")
    return X, single
