"""Hypothesis strategies for small symmetric / spd matrices."""

import numpy as np
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

_elems = st.floats(-1.0, 1.0, allow_nan=False, width=64)


@st.composite
def sym(draw, d=None, scale=1.0):
    d = d or draw(st.integers(1, 3))
    M = draw(arrays(np.float64, (d, d), elements=_elems)) * scale
    return np.triu(M) + np.triu(M, 1).T


@st.composite
def sym_pair(draw, d=None):
    d = d or draw(st.integers(1, 3))
    return draw(sym(d)), draw(arrays(np.float64, (d, d), elements=_elems))


@st.composite
def spd_pair(draw, d=None):
    d = d or draw(st.integers(1, 3))
    M = draw(arrays(np.float64, (d, d), elements=_elems))
    A = M @ M.T + draw(st.floats(0.2, 2.0)) * np.eye(d)
    return A, draw(arrays(np.float64, (d, d), elements=_elems))


def rel(a, b):
    """Relative Frobenius error with an absolute floor of 1."""
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)) / max(1.0, np.linalg.norm(b)))
