import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from commcalc import IntegrationError, PreconditionError, builtin, derivative_exp, schur_decompose
from commcalc.mechanics import (FlowKinematics, FlowProtocol, MaterialState, constitutive_rhs, dissipation_compare,
                                dissipation_tail_bound, ft_st_residuals, generalized_spin, integrate, log_rate,
                                log_spin, logconv_gap, monotonicity_representation, parse_flow,
                                rate_conversion_residual, sobolev_delta_form, sobolev_identity,
                                upper_convected_rate)
from commcalc.mechanics.models import model_name
from commcalc.sampling import commuting_pair, random_spd, random_sym
from tests.helpers import rel, sym_pair

ODD_SPINS = ["langevin", "tanh", "sinh", "theta", "identity", "zero", "sin", "x_omega"]


def _spin_fn(name):
    return builtin(name, 2.0 if name == "x_omega" else None)


def test_kinematics_split(rng):
    L = rng.standard_normal((3, 3))
    k = FlowKinematics.from_gradient(L)
    np.testing.assert_allclose(k.D + k.W, L, atol=1e-15)
    np.testing.assert_allclose(k.D, k.D.T)
    np.testing.assert_allclose(k.W, -k.W.T)


def test_log_spin_examples(rng):
    L = rng.standard_normal((3, 3))
    k = FlowKinematics.from_gradient(L)
    np.testing.assert_allclose(log_spin(np.zeros((3, 3)), k), k.W, atol=1e-15)
    skew = L - L.T
    H = random_sym(rng, 3)
    np.testing.assert_allclose(log_spin(H, skew), FlowKinematics.from_gradient(skew).W, atol=1e-15)
    np.testing.assert_allclose(log_spin(H, k), generalized_spin(builtin("langevin").scaled(2.0), H, k), atol=1e-15)
    np.testing.assert_allclose(generalized_spin(builtin("zero"), H, k), k.W)


@given(sym_pair(3), st.sampled_from(ODD_SPINS))
def test_spin_antisymmetry(HL, name):
    H, L = HL
    Om = generalized_spin(_spin_fn(name), H, L)
    assert np.max(np.abs(Om + Om.T)) <= 1e-12
    Om = log_spin(H, L)
    assert np.max(np.abs(Om + Om.T)) <= 1e-12


def test_generalized_spin_rejects_even():
    with pytest.raises(PreconditionError):
        generalized_spin(builtin("cosh"), np.eye(2), np.zeros((2, 2)))


def test_rates(rng):
    B = random_spd(rng, 3)
    dB = random_sym(rng, 3)
    np.testing.assert_allclose(upper_convected_rate(B, dB, np.zeros((3, 3))), dB)
    L = rng.standard_normal((3, 3))
    k = FlowKinematics.from_gradient(L)
    np.testing.assert_allclose(upper_convected_rate(np.eye(3), np.zeros((3, 3)), k), -2 * k.D, atol=1e-15)
    U = upper_convected_rate(B, dB, k)
    assert np.max(np.abs(U - U.T)) <= 1e-12
    H = random_sym(rng, 3)
    np.testing.assert_allclose(log_rate(H, dB, np.zeros((3, 3))), dB)
    np.testing.assert_allclose(log_rate(np.zeros((3, 3)), dB, k), dB)
    R = log_rate(H, dB, k)
    assert np.max(np.abs(R - R.T)) <= 1e-12


def test_rate_conversion(rng):
    z = np.zeros((3, 3))
    G = random_sym(rng, 3)
    assert max(rate_conversion_residual(G, z, z)) <= 1e-12
    assert max(rate_conversion_residual(z, random_sym(rng, 3), rng.standard_normal((3, 3)))) <= 1e-12
    for _ in range(10):
        res = rate_conversion_residual(random_sym(rng, 3), random_sym(rng, 3), rng.standard_normal((3, 3)))
        assert max(res) <= 1e-9


def test_ft_st(rng):
    for _ in range(10):
        assert max(ft_st_residuals(random_sym(rng, 3), rng.standard_normal((3, 3)))) <= 1e-10


def test_rhs_examples(rng):
    zero2 = np.zeros((2, 2))
    for m in ("oldroyd_B", "giesekus_interp"):
        np.testing.assert_allclose(constitutive_rhs(MaterialState("B", np.eye(2)), zero2, 1.0, m), 0, atol=1e-15)
    for m in ("log_oldroyd", "linearized"):
        np.testing.assert_allclose(constitutive_rhs(MaterialState("H", zero2), zero2, 1.0, m), 0, atol=1e-15)
    B = np.diag([2.0, 1.0])
    np.testing.assert_allclose(constitutive_rhs(MaterialState("B", B), zero2, 0.5, "oldroyd_B"), -(B - np.eye(2)) / 0.5)
    with pytest.raises(PreconditionError):
        constitutive_rhs(MaterialState("B", B), zero2, 1.0, "log_oldroyd")
    with pytest.raises(PreconditionError):
        constitutive_rhs(MaterialState("B", B), zero2, 0.0, "oldroyd_B")
    assert model_name("oldroyd_B_eq_x") == "oldroyd_B"


def test_rhs_pairs_correspond(rng):
    # dB/dt of the B-model equals Dexp(2H)[2 dH/dt] of the H-model at B = exp(2H)
    for bm, hm in (("oldroyd_B", "log_oldroyd"), ("giesekus_interp", "linearized")):
        H = random_sym(rng, 3, 0.6)
        L = rng.standard_normal((3, 3))
        sH = MaterialState("H", H)
        dH = constitutive_rhs(sH, L, 0.7, hm)
        dB = constitutive_rhs(sH.convert("B"), L, 0.7, bm)
        assert rel(derivative_exp(2 * H, 2 * dH), dB) <= 1e-11


def test_state_round_trip(rng):
    B = random_spd(rng, 3)
    s = MaterialState("B", B)
    np.testing.assert_allclose(s.convert("H").convert("B").value, B, atol=1e-12)
    with pytest.raises(PreconditionError):
        MaterialState("B", np.diag([1.0, -1.0]))
    with pytest.raises(PreconditionError):
        MaterialState("Q", np.eye(2))


def test_relaxation_closed_forms():
    B0 = np.diag([2.0, 1.0])
    tau = 0.8
    traj = integrate(MaterialState("B", B0), FlowProtocol("zero"), tau, "oldroyd_B", dt=tau / 200, T=2.0)
    exact = np.eye(2) + (B0 - np.eye(2)) * np.exp(-2.0 / tau)
    assert np.linalg.norm(traj.states[-1] - exact) <= (tau / 200) ** 4
    H0 = np.array([[0.3, 0.1], [0.1, -0.2]])
    traj = integrate(MaterialState("H", H0), FlowProtocol("zero"), tau, "linearized", dt=tau / 200, T=2.0)
    assert np.linalg.norm(traj.states[-1] - H0 * np.exp(-2.0 / tau)) <= 1e-10


def test_zero_duration_and_times():
    traj = integrate(MaterialState("B", np.eye(2)), FlowProtocol("shear", rate=1.0), 1.0, "oldroyd_B", T=0.0)
    assert traj.states.shape == (1, 2, 2)
    traj = integrate(MaterialState("B", np.eye(2)), FlowProtocol("shear", rate=1.0), 1.0, "oldroyd_B", dt=0.3, T=1.0)
    assert traj.times[-1] == pytest.approx(1.0) and np.all(np.diff(traj.times) > 0)


@pytest.mark.parametrize("model", ["oldroyd_B", "log_oldroyd", "linearized", "giesekus_interp"])
def test_paired_runs(model):
    traj = integrate(MaterialState("B", np.eye(2)), FlowProtocol("shear", rate=1.0), 1.0, model, T=5.0, paired=True)
    assert traj.max_cross_residual <= 1e-6


def test_oscillatory_and_extension_flows():
    for flow in ("oscillatory:rate=1.5,omega=2", "extension:rate=0.3,dim=3"):
        p = parse_flow(flow)
        traj = integrate(MaterialState("B", np.eye(p.dim)), p, 1.0, "oldroyd_B", T=2.0, paired=True)
        assert traj.max_cross_residual <= 1e-8


def test_spd_loss_names_time():
    with pytest.raises(IntegrationError) as info:
        integrate(MaterialState("B", np.diag([1e-3, 1.0])), FlowProtocol("zero"), 1.0, "oldroyd_B", dt=3.0, T=3.0)
    assert info.value.time is not None and 0 <= info.value.time <= 3.0


def test_parse_flow():
    p = parse_flow("shear:rate=2.5")
    np.testing.assert_allclose(p.gradient(0.0), [[0, 2.5], [0, 0]])
    assert parse_flow("zero:dim=3").gradient(1.0).shape == (3, 3)
    for bad in ("spin:rate=1", "shear:speed=1", "shear:rate=abc", "shear:dim=1"):
        with pytest.raises(PreconditionError):
            parse_flow(bad)


# --- identities -------------------------------------------------------------------

def test_monotonicity_examples(rng):
    G, H = random_sym(rng, 3), random_sym(rng, 3)
    value, _, residual = monotonicity_representation(builtin("identity"), G, H)
    assert value == pytest.approx(np.sum((G - H) ** 2))
    assert residual <= 1e-12
    value, _, residual = monotonicity_representation(builtin("exp"), G, G)
    assert value == 0.0 and residual == 0.0
    with pytest.raises(PreconditionError):
        monotonicity_representation(builtin("cos"), G, H)


@pytest.mark.parametrize("name", ["exp", "cube", "log", "tanh"])
def test_monotonicity(rng, name):
    for _ in range(3):
        if name in ("cube", "log"):
            G, H = random_spd(rng, 2), random_spd(rng, 2)
        else:
            G, H = random_sym(rng, 2), random_sym(rng, 2)
        value, xi, residual = monotonicity_representation(builtin(name), G, H)
        assert value >= -1e-12 and 0 <= xi <= 1 and residual <= 1e-8


def test_sobolev_examples(rng):
    grads = [random_sym(rng, 2) for _ in range(2)]
    lhs, rhs, comm = sobolev_identity(3.0 * np.eye(2), grads, 2.0)
    assert lhs == pytest.approx(rhs, rel=1e-12) and abs(comm) <= 1e-14
    B = random_spd(rng, 2)
    lhs, rhs, comm = sobolev_identity(B, grads, 1.0)
    assert lhs == pytest.approx(sum(np.sum(g * g) for g in grads), rel=1e-12)
    assert comm == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(PreconditionError):
        sobolev_identity(B, grads, -1.0)


@pytest.mark.parametrize("r", [-0.5, 0.5, 2.0, 3.0])
@pytest.mark.parametrize("d", [2, 3])
def test_sobolev_identity(rng, r, d):
    B = random_spd(rng, d, 1.0)
    grads = [random_sym(rng, d) for _ in range(d)]
    lhs, rhs, comm = sobolev_identity(B, grads, r)
    assert abs(lhs - rhs) <= 1e-9 * (1 + abs(lhs))
    assert comm >= 0
    if d == 2:
        assert abs(sobolev_delta_form(B, grads, r) - rhs) <= 1e-9 * (1 + abs(rhs))


def test_logconv_examples(rng):
    A, X = commuting_pair(rng, 3)
    A = schur_decompose(A).function(np.exp)
    gap, series = logconv_gap(A, X, 0.6)
    assert abs(gap) <= 1e-13 and abs(series) <= 1e-14
    A = random_spd(rng, 3)
    X = rng.standard_normal((3, 3))
    gap, series = logconv_gap(A, X, 0.0)
    assert gap == 0.0 and series == 0.0
    gap, series = logconv_gap(A, X, 0.7)
    assert gap >= 0 and abs(gap - series) <= 1e-9


def test_dissipation(rng):
    H = random_sym(rng, 3)
    H /= np.linalg.norm(H)
    B = schur_decompose(H).function(lambda h: np.exp(2 * h))
    grads = [random_sym(rng, 3) for _ in range(3)]
    full, partial = dissipation_compare(B, grads, 12)
    assert np.all(np.diff(partial) >= 0)
    assert abs(full - partial[-1]) <= 1e-10 * max(1, full)
    assert full - partial[-1] <= dissipation_tail_bound(B, grads, 12) + 1e-13
    full0, p0 = dissipation_compare(B, grads, 0)
    assert p0[0] <= full0


def test_dissipation_commuting():
    B = 2.0 * np.eye(2)
    grads = [np.array([[1.0, 0.5], [0.5, -1.0]])]
    full, partial = dissipation_compare(B, grads, 5)
    assert full == pytest.approx(partial[0], rel=1e-14)
    assert np.all(partial == partial[0])
