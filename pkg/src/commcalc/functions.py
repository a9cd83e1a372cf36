"""Scalar functions with continuous extensions at removable singularities.

Every catalog function is vectorized over numpy arrays and evaluates its
continuous extension seamlessly: near the origin the functions with a
removable singularity switch to a truncated Taylor series (inside
``|x| < 1e-4``, or ``|x| < 0.5`` for those whose raw form cancels like
``1/x^2``), so
``eta(0) == 1`` and ``eta(1e-9)`` is accurate to full precision.

Functions are looked up by name with :func:`builtin`::

    >>> builtin("mu")(0.0)
    array(0.33333333)
    >>> builtin("omega", 3.0)(0.0)   # |r - 1| / (2 sqrt 3)
    array(0.57735027)
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Optional

import numpy as np

from .exceptions import PreconditionError
from .spectral import DEFAULT_CLUSTER_TOL

SERIES_RADIUS = 1e-4


def _series(x, coeffs):
    """Evaluate ``sum_k coeffs[k] * x**(2k)`` (even power series)."""
    x2 = x * x
    out = np.zeros_like(x)
    for c in reversed(coeffs):
        out = out * x2 + c
    return out


def _guarded(raw, coeffs, odd=False, radius=SERIES_RADIUS, full=False):
    """Wrap ``raw`` so that small arguments use an even (or odd) Taylor series.

    With ``full=True`` the coefficients run over all powers ``x**k``.
    """

    def f(x):
        x = np.asarray(x, dtype=float)
        small = np.abs(x) < radius
        xs = np.where(small, 1.0, x)
        with np.errstate(all="ignore"):
            out = raw(xs)
        ser = np.polynomial.polynomial.polyval(x, coeffs) if full else _series(x, coeffs)
        if odd:
            ser = ser * x
        return np.where(small, ser, out)

    return f


@dataclass(frozen=True)
class ScalarFn1:
    """A univariate real function with optional derivative.

    ``extensions`` records ``(location, value)`` pairs of removable
    singularities; catalog functions already evaluate them internally, custom
    functions get the value substituted wherever the raw evaluation is not
    finite near the location.  ``split`` optionally carries an analytic
    odd/even decomposition ``(f0, f_odd, f_even)``.
    """

    name: str
    func: Callable
    derivative: Optional[Callable] = None
    extensions: tuple = ()
    parity: Optional[str] = None
    domain: tuple = (-np.inf, np.inf)
    split: Optional[tuple] = field(default=None, compare=False)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(all="ignore"):
            y = np.broadcast_to(np.asarray(self.func(x), dtype=float), x.shape).copy()
        for loc, val in self.extensions:
            near = (~np.isfinite(y)) & (np.abs(x - loc) <= 1e-8 * max(1.0, abs(loc)))
            if np.any(near):
                y[near] = val(x[near]) if callable(val) else val
        lo, hi = self.domain
        y[(x <= lo) | (x >= hi)] = np.nan
        return y

    def deriv(self, x):
        if self.derivative is None:
            raise PreconditionError(f"function {self.name!r} has no derivative available")
        x = np.asarray(x, dtype=float)
        with np.errstate(all="ignore"):
            return np.broadcast_to(np.asarray(self.derivative(x), dtype=float), x.shape).copy()

    def scaled(self, a):
        """The function ``x -> f(a x)``."""
        a = float(a)
        der = None
        if self.derivative is not None:
            der = lambda x, d=self.derivative: a * d(a * x)  # noqa: E731
        split = None
        if self.split is not None:
            f0, fo, fe = self.split
            split = (f0, lambda x: fo(a * x), lambda x: fe(a * x))
        return ScalarFn1(f"{self.name}({a:g}x)", lambda x, f=self.func: f(a * x), der,
                         parity=self.parity, split=split)


@dataclass(frozen=True)
class ScalarFn2:
    """A bivariate function evaluated at spectral pairs ``(g_i, g_j)``.

    ``func(x, y, scale)`` receives broadcastable arrays plus the spectral
    scale of the underlying decomposition, which only the divided-difference
    symbols use (to detect coincident nodes).
    """

    name: str
    func: Callable

    def __call__(self, x, y, scale=1.0):
        with np.errstate(all="ignore"):
            return np.asarray(self.func(np.asarray(x, float), np.asarray(y, float), scale), dtype=float)

    @classmethod
    def of(cls, fn, name="custom"):
        """Wrap a plain two-argument callable."""
        return cls(name, lambda x, y, scale: fn(x, y))

    @classmethod
    def commutator(cls, h):
        """``f(x, y) = h((x - y) / 2)``, the symbol of ``h(ad_G)``."""
        return cls(f"{h.name}(ad)", lambda x, y, scale: h((x - y) / 2))

    @classmethod
    def anticommutator(cls, h):
        """``f(x, y) = h((x + y) / 2)``, the symbol of ``h(ac_G)``."""
        return cls(f"{h.name}(ac)", lambda x, y, scale: h((x + y) / 2))

    @classmethod
    def left(cls, phi):
        return cls(f"{phi.name}(L)", lambda x, y, scale: phi(x) + 0 * y)

    @classmethod
    def right(cls, phi):
        return cls(f"{phi.name}(R)", lambda x, y, scale: phi(y) + 0 * x)

    @classmethod
    def divided_difference(cls, f, tol=DEFAULT_CLUSTER_TOL):
        """``(f(x) - f(y)) / (x - y)``, continued by ``f'`` on the diagonal."""
        return cls(f"dd[{f.name}]", lambda x, y, scale: divided_difference(f, x, y, scale, tol))


@dataclass(frozen=True)
class OddEvenSplit:
    f0: float
    f_odd: ScalarFn1
    f_even: ScalarFn1


def divided_difference(f, x, y, scale=1.0, tol=DEFAULT_CLUSTER_TOL):
    """Divided difference with the midpoint derivative at (nearly) coincident nodes.

    The quotient is used when ``|x - y| > tol * scale``; otherwise the result
    is ``f'((x + y) / 2)``.  Both branches are exactly symmetric in ``(x, y)``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x, y = np.broadcast_arrays(x, y)
    diff = x - y
    close = np.abs(diff) <= tol * scale
    out = np.empty(x.shape)
    far = ~close
    if np.any(far):
        out[far] = (f(x[far]) - f(y[far])) / diff[far]
    if np.any(close):
        if f.derivative is None:
            raise PreconditionError(
                f"divided difference of {f.name!r} at coincident nodes needs a derivative")
        out[close] = f.deriv((x[close] + y[close]) / 2)
    return out if out.ndim else float(out)


def odd_even_split(f):
    """Decompose ``f = f0 + f_odd + f_even`` with ``f_even(0) = 0``."""
    zero = ScalarFn1("zero", lambda x: np.zeros_like(x), lambda x: np.zeros_like(x), parity="odd")
    f0 = float(f(0.0))
    if f.split is not None:
        s0, so, se = f.split
        return OddEvenSplit(float(s0), ScalarFn1(f"odd[{f.name}]", so, parity="odd"),
                            ScalarFn1(f"even[{f.name}]", se, parity="even"))
    if f.parity == "odd":
        return OddEvenSplit(0.0, f, zero)
    if f.parity == "even":
        return OddEvenSplit(f0, zero, ScalarFn1(f"even[{f.name}]", lambda x: f(x) - f0, parity="even"))
    return OddEvenSplit(
        f0,
        ScalarFn1(f"odd[{f.name}]", lambda x: (f(x) - f(-x)) / 2, parity="odd"),
        ScalarFn1(f"even[{f.name}]", lambda x: (f(x) + f(-x)) / 2 - f0, parity="even"),
    )


# ---------------------------------------------------------------------------
# catalog

_eta = _guarded(lambda x: np.expm1(x) / x, [1.0, 1 / 2, 1 / 6, 1 / 24, 1 / 120], full=True)
_eta_odd = _guarded(lambda x: 2 * np.sinh(x / 2) ** 2 / x, [1 / 2, 1 / 24, 1 / 720], odd=True)
_inv_eta = _guarded(lambda x: x / np.expm1(x), [1.0, -1 / 2, 1 / 12, 0.0, -1 / 720], full=True)
def _bernoulli_even(n):
    """``B_2, B_4, ..., B_2n`` as floats (Akiyama-Tanigawa)."""
    a, out = [], []
    for m in range(2 * n + 1):
        a.append(Fraction(1, m + 1))
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        if m >= 2 and m % 2 == 0:
            out.append(float(a[0]))
    return out


# Functions whose raw form cancels like 1/x^2 use a longer series out to
# |x| < 0.5, where the raw form has lost at most a few ulps.
_WIDE_RADIUS = 0.5
_WIDE_TERMS = 18
_B = _bernoulli_even(_WIDE_TERMS + 1)
# coefficients of x^(2n-2), n >= 1, for (x coth x - 1)/x^2 and (1 - x/sinh x)/x^2
_COTH = [4.0**n * _B[n - 1] / factorial(2 * n) for n in range(1, _WIDE_TERMS + 1)]
_CSCH = [(4.0**n - 2) * _B[n - 1] / factorial(2 * n) for n in range(1, _WIDE_TERMS + 1)]

_mu = _guarded(lambda x: 1 / (x * np.tanh(x)) - 1 / x**2, _COTH, radius=_WIDE_RADIUS)
_nu = _guarded(lambda x: 1 / x**2 - 1 / (x * np.sinh(x)), _CSCH, radius=_WIDE_RADIUS)
_langevin = _guarded(lambda x: 1 / np.tanh(x) - 1 / x, _COTH, odd=True, radius=_WIDE_RADIUS)
_dlangevin = _guarded(lambda x: 1 / x**2 - 1 / np.sinh(x) ** 2,
                      [(2 * n - 1) * c for n, c in enumerate(_COTH, 1)], radius=_WIDE_RADIUS)
_theta_series = [-(4.0**n) * c for n, c in enumerate(_CSCH, 1)]
_theta = _guarded(lambda x: 2 / np.sinh(2 * x) - 1 / x, _theta_series, odd=True, radius=_WIDE_RADIUS / 2)
_theta_over_x = _guarded(lambda x: (2 / np.sinh(2 * x) - 1 / x) / x, _theta_series, radius=_WIDE_RADIUS / 2)
_sinch = _guarded(lambda x: np.sinh(x) / x, [1.0, 1 / 6, 1 / 120, 1 / 5040])
_x_over_sinh = _guarded(lambda x: x / np.sinh(x), [1.0, -1 / 6, 7 / 360, -31 / 15120])
_x_over_tanh = _guarded(lambda x: x / np.tanh(x), [1.0, 1 / 3, -1 / 45, 2 / 945])
_tanhc = _guarded(lambda x: np.tanh(x) / x, [1.0, -1 / 3, 2 / 15, -17 / 315])
_sinc = _guarded(lambda x: np.sin(x) / x, [1.0, -1 / 6, 1 / 120, -1 / 5040])
_tanc = _guarded(lambda x: np.tan(x) / x, [1.0, 1 / 3, 2 / 15, 17 / 315])


def _cosh_m1(x):
    return 2 * np.sinh(x / 2) ** 2


def _cosh_tail(ax):
    """``cosh(ax) - 1 - (ax)^2 / 2`` without cancellation."""
    small = np.abs(ax) < 1.0
    t2 = ax * ax
    ser = np.zeros_like(ax)
    term = t2 * t2 / 24.0
    for k in range(2, 14):
        ser = ser + term
        term = term * t2 / ((2 * k + 1) * (2 * k + 2))
    with np.errstate(all="ignore"):
        raw = np.cosh(ax) - 1 - t2 / 2
    return np.where(small, ser, raw)


def _omega_radicand(r):
    """Radicand of omega(x)^2 for parameter r, evaluated without cancellation.

    With ``C(a) = cosh(a x) - 1 - (a x)^2 / 2`` the radicand equals
    ``((r-1)^2 C(r+1) - (r+1)^2 C(r-1)) / (8 r x^2 sinh^2((r+1) x / 2))``.
    """
    c0 = (r - 1) ** 2 / 12
    c2 = -((r - 1) ** 2) * (r**2 + 10 * r + 1) / 720
    c4 = (r - 1) ** 2 * (r**2 + 6 * r + 1) * (r**2 + 8 * r + 1) / 30240

    def rad(x):
        x = np.asarray(x, dtype=float)
        small = np.abs(x) < 1e-3
        xs = np.where(small, 1.0, x)
        with np.errstate(all="ignore"):
            num = (r - 1) ** 2 * _cosh_tail((r + 1) * xs) - (r + 1) ** 2 * _cosh_tail((r - 1) * xs)
            raw = num / (8 * r * xs**2 * np.sinh((r + 1) * xs / 2) ** 2)
        x2 = x * x
        return np.where(small, c0 + x2 * (c2 + x2 * c4), raw)

    return rad


def _omega(r):
    rad = _omega_radicand(r)
    return lambda x: np.sqrt(np.maximum(rad(x), 0.0))


def _power(r):
    if float(r).is_integer():
        n = int(r)
        return (lambda x: x**n, lambda x: n * x ** (n - 1) if n != 0 else np.zeros_like(x),
                (-np.inf, np.inf) if n >= 0 else (0.0, np.inf))
    return (lambda x: x**r, lambda x: r * x ** (r - 1), (0.0, np.inf))


BUILTIN_NAMES = (
    "identity", "square", "cube", "zero",
    "eta", "inv_eta", "mu", "nu", "langevin", "coth_minus", "theta", "theta_over_x",
    "omega", "x_omega", "sinch", "x_over_sinh", "x_over_tanh", "tanhc", "sinc", "tanc",
    "exp", "log", "power", "cosh", "sinh", "cos", "sin", "tanh",
)


def builtin(name, param=None):
    """Look up a catalog function by name (``param`` for ``omega``, ``x_omega``, ``power``)."""
    one = lambda x: np.ones_like(x)  # noqa: E731
    if name == "identity":
        return ScalarFn1("identity", lambda x: x, one, parity="odd")
    if name == "square":
        return ScalarFn1("square", lambda x: x * x, lambda x: 2 * x, parity="even")
    if name == "cube":
        return ScalarFn1("cube", lambda x: x**3, lambda x: 3 * x * x, parity="odd")
    if name == "zero":
        return ScalarFn1("zero", lambda x: np.zeros_like(x), lambda x: np.zeros_like(x), parity="odd")
    if name == "eta":
        return ScalarFn1("eta", _eta, extensions=((0.0, 1.0),),
                         split=(1.0, _eta_odd, lambda x: _sinch(x) - 1))
    if name == "inv_eta":
        return ScalarFn1("inv_eta", _inv_eta, extensions=((0.0, 1.0),),
                         split=(1.0, lambda x: -x / 2, lambda x: _x_over_tanh(x / 2) - 1))
    if name == "mu":
        return ScalarFn1("mu", _mu, extensions=((0.0, 1 / 3),), parity="even")
    if name == "nu":
        return ScalarFn1("nu", _nu, extensions=((0.0, 1 / 6),), parity="even")
    if name in ("langevin", "coth_minus"):
        return ScalarFn1(name, _langevin, _dlangevin, extensions=((0.0, 0.0),), parity="odd")
    if name == "theta":
        return ScalarFn1("theta", _theta, extensions=((0.0, 0.0),), parity="odd")
    if name == "theta_over_x":
        return ScalarFn1("theta_over_x", _theta_over_x, extensions=((0.0, -2 / 3),), parity="even")
    if name in ("omega", "x_omega"):
        if param is None:
            raise PreconditionError(f"{name} requires the parameter r")
        r = float(param)
        if r in (0.0, -1.0):
            raise PreconditionError(f"{name} is undefined for r = {r:g}")
        w = _omega(r)
        if name == "omega":
            return ScalarFn1(f"omega[{r:g}]", w, extensions=((0.0, abs(r - 1) / (2 * np.sqrt(3))),),
                             parity="even")
        return ScalarFn1(f"x_omega[{r:g}]", lambda x: x * w(x), extensions=((0.0, 0.0),), parity="odd")
    if name == "sinch":
        return ScalarFn1("sinch", _sinch, extensions=((0.0, 1.0),), parity="even")
    if name == "x_over_sinh":
        return ScalarFn1("x_over_sinh", _x_over_sinh, extensions=((0.0, 1.0),), parity="even")
    if name == "x_over_tanh":
        return ScalarFn1("x_over_tanh", _x_over_tanh, extensions=((0.0, 1.0),), parity="even")
    if name == "tanhc":
        return ScalarFn1("tanhc", _tanhc, extensions=((0.0, 1.0),), parity="even")
    if name == "sinc":
        return ScalarFn1("sinc", _sinc, extensions=((0.0, 1.0),), parity="even")
    if name == "tanc":
        return ScalarFn1("tanc", _tanc, extensions=((0.0, 1.0),), parity="even")
    if name == "exp":
        return ScalarFn1("exp", np.exp, np.exp, split=(1.0, np.sinh, _cosh_m1))
    if name == "log":
        return ScalarFn1("log", np.log, lambda x: 1 / x, domain=(0.0, np.inf))
    if name == "power":
        if param is None:
            raise PreconditionError("power requires the exponent r")
        f, df, dom = _power(float(param))
        return ScalarFn1(f"power[{float(param):g}]", f, df, domain=dom)
    if name == "cosh":
        return ScalarFn1("cosh", np.cosh, np.sinh, split=(1.0, lambda x: np.zeros_like(x), _cosh_m1))
    if name == "sinh":
        return ScalarFn1("sinh", np.sinh, np.cosh, parity="odd")
    if name == "cos":
        return ScalarFn1("cos", np.cos, lambda x: -np.sin(x),
                         split=(1.0, lambda x: np.zeros_like(x), lambda x: -2 * np.sin(x / 2) ** 2))
    if name == "sin":
        return ScalarFn1("sin", np.sin, np.cos, parity="odd")
    if name == "tanh":
        return ScalarFn1("tanh", np.tanh, lambda x: 1 / np.cosh(x) ** 2, parity="odd")
    raise PreconditionError(f"unknown function {name!r}; known: {', '.join(BUILTIN_NAMES)}")


def custom(expr, extensions=(), derivative=None, name=None):
    """Build a function from a numpy expression in ``x``.

    The expression is evaluated with numpy's elementwise functions in scope
    (``sin``, ``exp``, ``sqrt``, ...) and nothing else.  Removable
    singularities must be supplied as ``extensions``; without them the value
    stays undefined and operator applications report the offending pair.
    """
    scope = {k: getattr(np, k) for k in (
        "sin", "cos", "tan", "sinh", "cosh", "tanh", "exp", "expm1", "log", "log1p",
        "sqrt", "abs", "arctan", "arcsinh", "pi", "e", "where")}
    code = compile(expr, "<expr>", "eval")
    for nm in code.co_names:
        if nm not in scope and nm != "x":
            raise PreconditionError(f"name {nm!r} not allowed in a function expression")

    def f(x):
        return eval(code, {"__builtins__": {}}, dict(scope, x=x))

    der = None
    if derivative is not None:
        dcode = compile(derivative, "<expr>", "eval")
        der = lambda x: eval(dcode, {"__builtins__": {}}, dict(scope, x=x))  # noqa: E731
    return ScalarFn1(name or expr, f, der, extensions=tuple(extensions))
