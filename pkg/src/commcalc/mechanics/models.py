"""Viscoelastic constitutive models at a material point and a fixed-step RK4 integrator.

Two models evolve the conformation tensor ``B`` and two evolve the Hencky
strain ``H = log(B) / 2``; they come in equivalent pairs::

    oldroyd_B        <->  log_oldroyd
    giesekus_interp  <->  linearized
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .._validation import check_symmetric
from ..exceptions import IntegrationError, NotPositiveDefiniteError, PreconditionError
from ..spectral import DEFAULT_CLUSTER_TOL, schur_decompose
from .kinematics import FlowKinematics, log_spin

B_MODELS = ("oldroyd_B", "giesekus_interp")
H_MODELS = ("log_oldroyd", "linearized")
MODELS = B_MODELS + H_MODELS
COMPANION = {"oldroyd_B": "log_oldroyd", "log_oldroyd": "oldroyd_B",
             "giesekus_interp": "linearized", "linearized": "giesekus_interp"}


def model_name(model):
    # long identifiers of the form "<model>_eq_<label>" are accepted
    model = str(model).split("_eq_")[0]
    if model not in MODELS:
        raise PreconditionError(f"unknown model {model!r}; choose from {', '.join(MODELS)}")
    return model


def representation_of(model):
    return "B" if model_name(model) in B_MODELS else "H"


@dataclass(frozen=True)
class MaterialState:
    """State tensor in the ``B`` (conformation) or ``H`` (Hencky) representation."""

    representation: str
    value: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        if self.representation not in ("B", "H"):
            raise PreconditionError(f"representation must be 'B' or 'H', got {self.representation!r}")
        v = check_symmetric(self.value, self.representation)
        if self.representation == "B" and not schur_decompose(v).g[0] > 0:
            raise NotPositiveDefiniteError("conformation tensor must be positive definite")
        object.__setattr__(self, "value", v)

    def to_B(self):
        if self.representation == "B":
            return self.value
        return schur_decompose(self.value).function(lambda h: np.exp(2 * h))

    def to_H(self):
        if self.representation == "H":
            return self.value
        return schur_decompose(self.value).function(lambda b: np.log(b) / 2)

    def convert(self, representation):
        v = self.to_B() if representation == "B" else self.to_H()
        return MaterialState(representation, v, self.time)


def constitutive_rhs(state, kin, tau, model, tol=DEFAULT_CLUSTER_TOL):
    """Time derivative of the state for one of the four models."""
    model = model_name(model)
    if not tau > 0:
        raise PreconditionError(f"relaxation time must be positive, got {tau}")
    if state.representation != representation_of(model):
        raise PreconditionError(f"model {model} evolves {representation_of(model)}, "
                                f"state is in representation {state.representation}")
    k = kin if isinstance(kin, FlowKinematics) else FlowKinematics.from_gradient(kin)
    X = state.value
    if model in B_MODELS:
        dec = schur_decompose(X, tol)
        if not dec.g[0] > 0:
            raise NotPositiveDefiniteError("conformation tensor lost positive definiteness")
        convect = k.gradv @ X + X @ k.gradv.T
        if model == "oldroyd_B":
            return convect - (X - np.eye(k.d)) / tau
        return convect - X @ dec.function(np.log) / tau
    Om = log_spin(X, k, tol)
    rot = X @ Om - Om @ X
    if model == "log_oldroyd":
        relax = (np.eye(k.d) - schur_decompose(X, tol).function(lambda h: np.exp(-2 * h))) / (2 * tau)
    else:
        relax = X / tau
    return k.D - rot - relax


@dataclass
class Trajectory:
    """Sampled output of :func:`integrate`.

    ``cross_residual[i]`` is ``||exp(2H) - B||_F`` between this run and the
    companion run at ``times[i]`` (``None`` unless a paired run was requested).
    """

    model: str
    representation: str
    times: np.ndarray
    states: np.ndarray
    companion_model: Optional[str] = None
    companion_states: Optional[np.ndarray] = None
    cross_residual: Optional[np.ndarray] = field(default=None)

    @property
    def max_cross_residual(self):
        return None if self.cross_residual is None else float(np.max(self.cross_residual))


def _rk4_step(f, t, y, h):
    k1 = f(t, y)
    k2 = f(t + h / 2, y + h / 2 * k1)
    k3 = f(t + h / 2, y + h / 2 * k2)
    k4 = f(t + h, y + h * k3)
    y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return (y + y.T) / 2


def _run(state0, protocol, tau, model, h, n, tol):
    rep = representation_of(model)

    def rhs(t, y):
        try:
            return constitutive_rhs(MaterialState(rep, y, t), protocol.kinematics(t), tau, model, tol)
        except NotPositiveDefiniteError as exc:
            raise IntegrationError(f"{model}: positive definiteness lost at t = {t:.6g}; reduce dt", t) from exc

    y = state0.value
    out = [y]
    t = state0.time
    for i in range(n):
        y = _rk4_step(rhs, t, y, h)
        t = state0.time + (i + 1) * h
        if rep == "B" and not np.linalg.eigvalsh(y)[0] > 0:
            raise IntegrationError(f"{model}: positive definiteness lost at t = {t:.6g}; reduce dt", t)
        out.append(y)
    return np.array(out)


def integrate(state0, protocol, tau, model, dt=None, T=1.0, paired=False, tol=DEFAULT_CLUSTER_TOL):
    """Classical fixed-step RK4 from ``state0`` over ``[t0, t0 + T]``.

    ``dt`` defaults to ``tau / 200``; the step is shrunk slightly if needed
    so that an integer number of steps lands exactly on ``T``.  With
    ``paired=True`` the companion model runs in the other representation from
    the converted initial state and the cross residual is recorded.
    """
    model = model_name(model)
    if not tau > 0:
        raise PreconditionError(f"relaxation time must be positive, got {tau}")
    dt = tau / 200 if dt is None else float(dt)
    if not dt > 0 or T < 0:
        raise PreconditionError("need dt > 0 and T >= 0")
    rep = representation_of(model)
    if state0.representation != rep:
        state0 = state0.convert(rep)
    n = int(np.ceil(T / dt - 1e-9)) if T > 0 else 0
    h = T / n if n else dt
    states = _run(state0, protocol, tau, model, h, n, tol)
    times = state0.time + h * np.arange(n + 1)
    traj = Trajectory(model, rep, times, states)
    if paired:
        comp = COMPANION[model]
        crep = representation_of(comp)
        cstates = _run(state0.convert(crep), protocol, tau, comp, h, n, tol)
        Bs, Hs = (states, cstates) if rep == "B" else (cstates, states)
        res = [np.linalg.norm(schur_decompose(Hm).function(lambda x: np.exp(2 * x)) - Bm) for Bm, Hm in zip(Bs, Hs)]
        traj.companion_model = comp
        traj.companion_states = cstates
        traj.cross_residual = np.array(res)
    return traj
