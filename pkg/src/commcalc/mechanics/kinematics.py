"""Velocity-gradient kinematics, spin tensors and objective rates at a material point."""

from dataclasses import dataclass

import numpy as np

from .._validation import check_matrix, check_symmetric
from ..calculus import apply_commutator_function
from ..exceptions import PreconditionError
from ..functions import builtin
from ..spectral import DEFAULT_CLUSTER_TOL

ODDNESS_TOL = 1e-10
_ODD_GRID = np.linspace(-6.0, 6.0, 241)


@dataclass(frozen=True)
class FlowKinematics:
    """Velocity gradient ``gradv`` with its symmetric part ``D`` and skew part ``W``."""

    gradv: np.ndarray
    D: np.ndarray
    W: np.ndarray

    @classmethod
    def from_gradient(cls, gradv):
        L = check_matrix(gradv, "gradv")
        return cls(L, (L + L.T) / 2, (L - L.T) / 2)

    @property
    def d(self):
        return self.gradv.shape[0]


def _kin(kin):
    return kin if isinstance(kin, FlowKinematics) else FlowKinematics.from_gradient(kin)


def check_odd(f, tol=ODDNESS_TOL):
    """Raise unless ``f(x) + f(-x)`` vanishes on a sample grid."""
    with np.errstate(all="ignore"):
        a, b = f(_ODD_GRID), f(-_ODD_GRID)
    ok = np.isfinite(a) & np.isfinite(b)
    if not np.all(ok) or np.max(np.abs(a + b)) > tol:
        raise PreconditionError(f"spin function {getattr(f, 'name', f)!r} is not odd")


def generalized_spin(f, H, kin, tol=DEFAULT_CLUSTER_TOL):
    """``W - f(ad_H) D`` for an odd scalar function ``f``."""
    check_odd(f)
    k = _kin(kin)
    return k.W - apply_commutator_function(f, check_symmetric(H, "H"), k.D, tol)


def log_spin(H, kin, tol=DEFAULT_CLUSTER_TOL):
    """Logarithmic spin ``W - L(2 ad_H) D`` with ``L`` the Langevin function."""
    k = _kin(kin)
    f = builtin("langevin").scaled(2.0)
    return k.W - apply_commutator_function(f, check_symmetric(H, "H"), k.D, tol)


def upper_convected_rate(B, dBdt, kin):
    """``dB/dt - gradv B - B gradv^T`` (advection is assumed inside ``dBdt``)."""
    k = _kin(kin)
    B = check_matrix(B, "B")
    return check_matrix(dBdt, "dBdt") - k.gradv @ B - B @ k.gradv.T


def log_rate(H, dHdt, kin, tol=DEFAULT_CLUSTER_TOL):
    """Logarithmic corotational rate ``dH/dt + H Omega - Omega H``."""
    H = check_symmetric(H, "H")
    Om = log_spin(H, kin, tol)
    return check_matrix(dHdt, "dHdt") + H @ Om - Om @ H


# ---------------------------------------------------------------------------
# flow protocols


@dataclass(frozen=True)
class FlowProtocol:
    """A prescribed velocity-gradient history ``t -> gradv(t)``.

    Kinds: ``zero`` (no flow), ``constant`` (fixed matrix), ``shear`` (``rate``), ``extension``
    (planar elongation at ``rate``), ``oscillatory`` (shear rate
    ``rate * cos(omega t)``).
    """

    kind: str
    dim: int = 2
    rate: float = 0.0
    omega: float = 0.0
    matrix: tuple = ()

    def gradient(self, t):
        d = self.dim
        L = np.zeros((d, d))
        if self.kind == "constant":
            return np.array(self.matrix, dtype=float).reshape(d, d)
        if self.kind == "shear":
            L[0, 1] = self.rate
        elif self.kind == "oscillatory":
            L[0, 1] = self.rate * np.cos(self.omega * t)
        elif self.kind == "extension":
            L[0, 0], L[1, 1] = self.rate, -self.rate
        elif self.kind != "zero":
            raise PreconditionError(f"unknown flow kind {self.kind!r}")
        return L

    def kinematics(self, t):
        return FlowKinematics.from_gradient(self.gradient(t))

    @classmethod
    def constant(cls, gradv):
        g = check_matrix(gradv, "gradv")
        return cls("constant", dim=g.shape[0], matrix=tuple(g.ravel()))


_FLOW_PARAMS = {"shear": {"rate", "dim"}, "extension": {"rate", "dim"},
                "oscillatory": {"rate", "omega", "dim"}, "zero": {"dim"}}


def parse_flow(text):
    """Parse ``kind:key=value,...``, e.g. ``shear:rate=1.0`` or ``oscillatory:rate=1,omega=2,dim=3``."""
    kind, _, rest = text.partition(":")
    kind = kind.strip()
    if kind not in _FLOW_PARAMS:
        raise PreconditionError(f"unknown flow {kind!r}; choose from {', '.join(sorted(_FLOW_PARAMS))}")
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, val = item.partition("=")
        if not eq or key not in _FLOW_PARAMS[kind]:
            raise PreconditionError(f"bad flow parameter {item!r} for {kind}")
        try:
            params[key] = float(val)
        except ValueError:
            raise PreconditionError(f"flow parameter {key} must be numeric, got {val!r}") from None
    dim = int(params.pop("dim", 2))
    if dim < 2:
        raise PreconditionError("flow protocols need dim >= 2")
    if kind == "zero":
        return FlowProtocol("shear", dim=dim, rate=0.0)
    return FlowProtocol(kind, dim=dim, **params)
