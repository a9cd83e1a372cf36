"""Randomized property suite behind ``commcalc verify``.

Each property draws its inputs from its own generator seeded by
``(seed, index)``, so results do not depend on which properties run, in which
order or on how many worker threads are used.  The report carries no
timings and is byte-identical for identical settings.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import derivatives as dv
from .calculus import ad, apply_bivariate, apply_commutator_function, apply_vandermonde, vandermonde_representation
from .closed_form import apply_closed_form, theta_fast_path_2d
from .functions import ScalarFn2, builtin
from .mechanics import (FlowProtocol, MaterialState, dissipation_compare, ft_st_residuals, generalized_spin,
                        integrate, log_spin, logconv_gap, monotonicity_representation, rate_conversion_residual,
                        sobolev_identity)
from .oracles import dense_operator_of, finite_difference_frechet
from .sampling import random_orthogonal, random_spd, random_square, random_sym
from .spectral import schur_decompose


@dataclass(frozen=True)
class Property:
    name: str
    check: object
    tol: float
    samples: int


@dataclass(frozen=True)
class Result:
    name: str
    samples: int
    max_residual: float
    tol: float

    @property
    def passed(self):
        return bool(self.max_residual <= self.tol)


def _rel(a, b):
    return float(np.linalg.norm(a - b) / max(1.0, np.linalg.norm(b)))


def _dim(rng, lo=1, hi=3):
    return int(rng.integers(lo, hi + 1))


def p_reconstruction(rng, n):
    worst = 0.0
    for _ in range(n):
        d = _dim(rng, 1, 4)
        G = random_sym(rng, d)
        dec = schur_decompose(G)
        worst = max(worst, np.linalg.norm(dec.matrix - G) / dec.scale,
                    np.linalg.norm(dec.Q.T @ dec.Q - np.eye(d)))
    return worst


def p_consistency(rng, n):
    worst = 0.0
    for _ in range(n):
        d = _dim(rng, 2, 3)
        G, X = random_sym(rng, d), random_square(rng, d)
        P = rng.standard_normal((4, 4))
        f = ScalarFn2.of(lambda x, y: sum(P[m, k] * x**m * y**k for m in range(4) for k in range(4)))
        pw = [np.linalg.matrix_power(G, k) for k in range(4)]
        direct = sum(P[m, k] * pw[m] @ X @ pw[k] for m in range(4) for k in range(4))
        worst = max(worst, _rel(apply_bivariate(f, G, X), direct))
    return worst


def p_dense_oracle(rng, n):
    worst = 0.0
    f = ScalarFn2.divided_difference(builtin("exp"))
    for _ in range(n):
        d = _dim(rng)
        G = random_sym(rng, d)
        op = dense_operator_of(f, G)
        worst = max(worst, float(np.max(np.abs(op - op.T))))
        X = random_square(rng, d)
        worst = max(worst, _rel((op @ X.ravel()).reshape(d, d), dv.derivative_exp(G, X, "E0")))
    return worst


def p_vandermonde(rng, n):
    worst = 0.0
    f = ScalarFn2.commutator(builtin("sinh"))
    for _ in range(n):
        d = _dim(rng, 2, 3)
        G = random_sym(rng, d)
        J = vandermonde_representation(f, G)
        for k in range(d * d):
            E = np.zeros(d * d)
            E[k] = 1.0
            E = E.reshape(d, d)
            worst = max(worst, _rel(apply_vandermonde(J, G, E), apply_bivariate(f, G, E)))
    return worst


def p_closed_form(rng, n):
    worst = 0.0
    names = ("exp", "sinh", "tanh", "langevin")
    for _ in range(n):
        d = _dim(rng)
        f = builtin(names[int(rng.integers(4))])
        G, X = random_sym(rng, d), random_square(rng, d)
        worst = max(worst, _rel(apply_closed_form(f, G, X), apply_commutator_function(f, G, X)))
    return worst


def p_theta_fast_path(rng, n):
    worst = 0.0
    for _ in range(n):
        A, X = random_spd(rng, 2), random_square(rng, 2)
        worst = max(worst, _rel(theta_fast_path_2d(A, X), dv.derivative_log(A, X)))
    return worst


def _pairwise(fn, variants):
    ref = fn("dk")
    return max(_rel(fn(v), ref) for v in variants)


def p_exp_variants(rng, n):
    worst = 0.0
    for _ in range(n):
        d = _dim(rng)
        G, X = random_sym(rng, d), random_square(rng, d)
        worst = max(worst, _pairwise(lambda v: dv.derivative_exp(G, X, v), dv.EXP_VARIANTS))
    return worst


def p_log_variants(rng, n):
    worst = 0.0
    for _ in range(n):
        d = _dim(rng)
        A, X = random_spd(rng, d), random_square(rng, d)
        worst = max(worst, _pairwise(lambda v: dv.derivative_log(A, X, v), dv.LOG_VARIANTS))
    return worst


def p_power_variants(rng, n):
    worst = 0.0
    for _ in range(n):
        d = _dim(rng)
        A, X = random_spd(rng, d), random_square(rng, d)
        r = float(rng.integers(1, 5)) if rng.random() < 0.5 else float(rng.uniform(-2, 3))
        variants = dv.POWER_VARIANTS if r.is_integer() else tuple(v for v in dv.POWER_VARIANTS if v != "PP00")
        worst = max(worst, _pairwise(lambda v: dv.derivative_power(A, r, X, v), variants))
    return worst


def p_trig_hyp_variants(rng, n):
    worst = 0.0
    for _ in range(n):
        d = _dim(rng)
        G, X = random_sym(rng, d, 0.5), random_square(rng, d)
        for which in ("cosh", "sinh", "cos", "sin"):
            worst = max(worst, _pairwise(lambda v: dv.derivative_trig_hyp(G, X, which, v), dv.TRIG_HYP_VARIANTS))
    return worst


def p_finite_differences(rng, n):
    worst = 0.0
    for _ in range(n):
        d = _dim(rng)
        G, X = random_sym(rng, d), random_sym(rng, d)
        A = random_spd(rng, d)
        worst = max(worst, _rel(dv.derivative_exp(G, X), finite_difference_frechet(np.exp, G, X)),
                    _rel(dv.derivative_log(A, X), finite_difference_frechet(np.log, A, X)),
                    _rel(dv.derivative_trig_hyp(G, X, "sin"), finite_difference_frechet(np.sin, G, X)))
    return worst


def p_inverse_pairing(rng, n):
    worst = 0.0
    for _ in range(n):
        d = _dim(rng)
        A, Y = random_spd(rng, d), random_square(rng, d)
        L = schur_decompose(A).function(np.log)
        worst = max(worst, _rel(dv.derivative_exp(L, dv.derivative_log(A, Y)), Y))
    return worst


def p_chain_rule(rng, n):
    worst = 0.0
    names = ("exp", "sinh", "tanh", "cube", "sin")
    for _ in range(n):
        d = _dim(rng)
        G, X = random_sym(rng, d), random_square(rng, d)
        f = builtin(names[int(rng.integers(len(names)))])
        worst = max(worst, dv.chain_rule_commutator(f, G, X) / max(1.0, np.linalg.norm(X)))
    return worst


def p_dpower_applied(rng, n):
    worst = 0.0
    for _ in range(n):
        d = _dim(rng)
        A, X = random_spd(rng, d), random_square(rng, d)
        r, p, q = rng.uniform(-1.5, 2.5, 3)
        for sign in ("minus", "plus"):
            worst = max(worst, _rel(dv.dpower_applied(A, r, p, q, X, sign),
                                    dv.dpower_applied(A, r, p, q, X, sign, form="direct")))
    return worst


def p_dlog_applied(rng, n):
    worst = 0.0
    for _ in range(n):
        d = _dim(rng)
        A, X = random_spd(rng, d), random_square(rng, d)
        Lm = schur_decompose(A).function(np.log)
        p1 = dv.dlog_applied(A, 1, 0, X, "minus")
        worst = max(worst, _rel(p1, Lm @ X - X @ Lm), _rel(p1, dv.derivative_log(A, A @ X - X @ A)))
        worst = max(worst, _rel(dv.dlog_applied(A, 1, 0, X, "plus"), dv.dlog_symmetric_product(A, X)))
        worst = max(worst, _rel(dv.dlog_applied(A, 0.5, 0.5, X, "plus") / 2, dv.dlog_half_sandwich(A, X)))
        p, q = rng.uniform(-1, 1.5, 2)
        for sign in ("minus", "plus"):
            worst = max(worst, _rel(dv.dlog_applied(A, p, q, X, sign),
                                    dv.dlog_applied(A, p, q, X, sign, form="direct")))
    return worst


def p_spin_antisymmetry(rng, n):
    worst = 0.0
    odd = [builtin(k) for k in ("langevin", "tanh", "sinh", "theta", "identity")]
    for _ in range(n):
        d = _dim(rng, 2, 3)
        H, L = random_sym(rng, d), random_square(rng, d)
        Om = log_spin(H, L)
        worst = max(worst, float(np.max(np.abs(Om + Om.T))))
        for f in odd:
            Om = generalized_spin(f, H, L)
            worst = max(worst, float(np.max(np.abs(Om + Om.T))))
    return worst


def p_rate_conversion(rng, n):
    worst = 0.0
    for _ in range(n):
        d = _dim(rng, 2, 3)
        res = rate_conversion_residual(random_sym(rng, d), random_sym(rng, d), random_square(rng, d))
        worst = max(worst, *res)
    return worst


def p_ft_st(rng, n):
    worst = 0.0
    for _ in range(n):
        d = _dim(rng, 2, 3)
        worst = max(worst, *ft_st_residuals(random_sym(rng, d, 0.7), random_square(rng, d)))
    return worst


def p_monotonicity(rng, n):
    worst = 0.0
    for i in range(n):
        name = ("exp", "cube", "log")[i % 3]
        d = _dim(rng, 2, 3)
        if name == "exp":
            G, H = random_sym(rng, d), random_sym(rng, d)
        else:
            G, H = random_spd(rng, d), random_spd(rng, d)
        value, _, residual = monotonicity_representation(builtin(name), G, H)
        # a negative value beyond round-off is a hard failure
        worst = max(worst, residual if value >= -1e-12 else np.inf)
    return worst


def p_sobolev(rng, n):
    worst = 0.0
    for i in range(n):
        d = 2 + i % 2
        r = (-0.5, 0.5, 2.0, 3.0)[i % 4]
        B = random_spd(rng, d, 1.0)
        grads = [random_sym(rng, d) for _ in range(d)]
        lhs, rhs, comm = sobolev_identity(B, grads, r)
        worst = max(worst, abs(lhs - rhs) / (1 + abs(lhs)), max(-comm, 0.0))
    return worst


def p_logconv_gap(rng, n):
    worst = 0.0
    for _ in range(n):
        d = _dim(rng, 2, 3)
        gap, series = logconv_gap(random_spd(rng, d, 1.0), random_square(rng, d), float(rng.uniform(0, 1)))
        worst = max(worst, abs(gap - series), max(-gap, 0.0))
    return worst


def p_dissipation(rng, n):
    worst = 0.0
    for _ in range(n):
        d = _dim(rng, 2, 3)
        H = random_sym(rng, d)
        H /= max(1.0, np.linalg.norm(H))
        B = schur_decompose(H).function(lambda h: np.exp(2 * h))
        full, partial = dissipation_compare(B, [random_sym(rng, d) for _ in range(d)], 12)
        worst = max(worst, abs(full - partial[-1]) / max(1.0, full), float(max(0.0, -np.min(np.diff(partial)))))
    return worst


def p_viscoelastic(rng, n):
    worst = 0.0
    for _ in range(n):
        rate = float(rng.uniform(0.2, 2.0))
        for model in ("oldroyd_B", "giesekus_interp"):
            traj = integrate(MaterialState("B", np.eye(2)), FlowProtocol("shear", rate=rate), 1.0, model,
                             dt=1 / 200, T=2.0, paired=True)
            worst = max(worst, traj.max_cross_residual)
    return worst


def p_commutator_commuting(rng, n):
    worst = 0.0
    for _ in range(n):
        d = _dim(rng, 2, 3)
        Q = random_orthogonal(rng, d)
        g, h = rng.uniform(-1, 1, d), rng.uniform(-1, 1, d)
        G, H = (Q * g) @ Q.T, (Q * h) @ Q.T
        X = random_square(rng, d)
        f = builtin("exp")
        a = apply_commutator_function(f, G, apply_commutator_function(f, H, X))
        b = apply_commutator_function(f, H, apply_commutator_function(f, G, X))
        worst = max(worst, _rel(a, b), float(np.linalg.norm(ad(G, H))))
    return worst


PROPERTIES = (
    Property("spectral_reconstruction", p_reconstruction, 1e-11, 100),
    Property("consistency", p_consistency, 1e-10, 50),
    Property("commutativity", p_commutator_commuting, 1e-10, 30),
    Property("dense_oracle", p_dense_oracle, 1e-9, 20),
    Property("vandermonde", p_vandermonde, 1e-9, 20),
    Property("closed_form", p_closed_form, 1e-9, 100),
    Property("theta_fast_path", p_theta_fast_path, 1e-10, 50),
    Property("exp_variants", p_exp_variants, 1e-10, 30),
    Property("log_variants", p_log_variants, 1e-10, 30),
    Property("power_variants", p_power_variants, 1e-10, 30),
    Property("trig_hyp_variants", p_trig_hyp_variants, 1e-10, 30),
    Property("finite_differences", p_finite_differences, 1e-6, 30),
    Property("inverse_pairing", p_inverse_pairing, 1e-9, 50),
    Property("chain_rule", p_chain_rule, 1e-10, 50),
    Property("dpower_applied", p_dpower_applied, 1e-10, 30),
    Property("dlog_applied", p_dlog_applied, 1e-10, 30),
    Property("spin_antisymmetry", p_spin_antisymmetry, 1e-12, 50),
    Property("rate_conversion", p_rate_conversion, 1e-9, 30),
    Property("ft_st", p_ft_st, 1e-10, 30),
    Property("monotonicity", p_monotonicity, 1e-8, 15),
    Property("sobolev", p_sobolev, 1e-9, 40),
    Property("logconv_gap", p_logconv_gap, 1e-9, 40),
    Property("dissipation", p_dissipation, 1e-10, 40),
    Property("viscoelastic_equivalence", p_viscoelastic, 1e-6, 1),
)

PROPERTY_NAMES = tuple(p.name for p in PROPERTIES)


def _run_one(index, prop, seed, samples):
    rng = np.random.default_rng([seed, index])
    n = prop.samples if samples is None else samples
    try:
        res = float(prop.check(rng, n))
    except Exception:  # a crashing property is a failing property
        res = float("inf")
    return Result(prop.name, n, res, prop.tol)


def run(seed=0, only=None, samples=None, workers=1):
    """Run the selected properties and return their results in registry order."""
    if only:
        unknown = set(only) - set(PROPERTY_NAMES)
        if unknown:
            raise KeyError(f"unknown properties: {', '.join(sorted(unknown))}")
    jobs = [(i, p) for i, p in enumerate(PROPERTIES) if not only or p.name in only]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda job: _run_one(job[0], job[1], seed, samples), jobs))
    return [_run_one(i, p, seed, samples) for i, p in jobs]


def format_report(results, seed):
    lines = [f"commcalc verify seed={seed}"]
    for r in results:
        lines.append(f"{'PASS' if r.passed else 'FAIL'} {r.name:<26} n={r.samples:<4} "
                     f"max_residual={r.max_residual:.3e} tol={r.tol:.0e}")
    failed = [r.name for r in results if not r.passed]
    lines.append(f"{len(results) - len(failed)}/{len(results)} properties passed"
                 + (f"; failed: {', '.join(failed)}" if failed else ""))
    return "\n".join(lines) + "\n"
