import math
import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import rand_coords
from forms6 import flow
from forms6 import invariants as inv
from forms6 import liealg as la
from forms6.exterior import basis, form_max_diff

NIL = la.builtin_setup("nil-debartolomeis")
SOLV = la.builtin_setup("solv-tomassini")
AB = la.builtin_setup("abelian")


def rand_nil_coords(rng, h_min=0.3, h_max=1.2):
    c = [rng.uniform(-1, 1) for _ in range(14)]
    c[7] = rng.uniform(h_min, h_max) * rng.choice((-1, 1))
    return inv.PrimitiveCoords(*c)


def rand_solv_data(rng):
    while True:
        sd = flow.SolvData(*(rng.uniform(0.5, 2.0) for _ in range(4)),
                           M=rng.uniform(-0.3, 0.3), N=rng.uniform(-0.3, 0.3))
        if flow.positivity_check(sd).ok:
            return sd


# --- right side --------------------------------------------------------------------

def test_reduced_rhs_nil_structure(rng):
    for _ in range(10):
        c = inv.PrimitiveCoords(*(rng.uniform(-1, 1) for _ in range(14)))
        r = flow.reduced_rhs(NIL, c)
        hats = inv.hat_map(c.to_floats())
        assert abs(r.A - 4 * hats.H) < 1e-12 * max(1.0, abs(4 * hats.H))
        assert abs(r.A - (-4 * c.A * c.H ** 2
                          + flow.NilData.from_coords(c).R)) < 1e-10
        assert all(x == 0 for x in r[1:])


def test_reduced_rhs_solv_matches_hand_coded_system(rng):
    for _ in range(10):
        sd = flow.SolvData(*(rng.uniform(-2, 2) for _ in range(4)),
                           M=rng.uniform(-1, 1), N=rng.uniform(-1, 1))
        r = flow.reduced_rhs(SOLV, sd.to_coords())
        hand = flow.solv_system_rhs(sd)(
            np.array([sd.alpha, sd.beta, sd.gamma, sd.delta]))
        got = np.array([r.A, r.C, r.E, -r.G])
        assert np.allclose(got, hand, rtol=1e-12, atol=1e-12)
        # the ansatz shape is preserved slot by slot
        assert r.A == r.B and r.C == -r.D and r.E == -r.F and r.G == r.H
        assert all(x == 0 for x in (r.I, r.J, r.K, r.L, r.M, r.N))


def test_reduced_rhs_abelian_zero(rng):
    r = flow.reduced_rhs(AB, rand_coords(rng))
    assert all(x == 0 for x in r)


def test_reduced_rhs_matches_full_operator(rng):
    for setup in (NIL, SOLV):
        c = inv.PrimitiveCoords(*(rng.uniform(-1, 1) for _ in range(14)))
        r1 = flow.reduced_rhs(setup, c)
        r2 = inv.form_to_coords(la.flow_operator(setup, inv.coords_to_form(c)))
        assert max(abs(a - b) for a, b in zip(r1, r2)) < 1e-11


# --- nil closed form -----------------------------------------------------------------

def test_nil_closed_form_values():
    nd = flow.NilData(H=0.5, R=2.0, constants=inv.PrimitiveCoords())
    assert flow.nil_closed_form(nd, 0.7, 0.0) == 0.7
    assert abs(flow.nil_closed_form(nd, 0.7, 1e6) - nd.R / (4 * nd.H ** 2)) < 1e-12
    nd0 = flow.NilData(H=0.0, R=2.0, constants=inv.PrimitiveCoords())
    assert flow.nil_closed_form(nd0, 0.7, 3.0) == 0.7 + 6.0


def test_nil_trajectory_matches_closed_form(rng):
    for _ in range(4):
        c = rand_nil_coords(rng)
        nd = flow.NilData.from_coords(c)
        traj = flow.integrate(NIL, c, 10.0,
                              flow.FlowControls(detect_stationary=False))
        assert traj.status == "reached_t_max"
        for i, t in enumerate(traj.times):
            expect = flow.nil_closed_form(nd, float(c.A), float(t))
            assert abs(traj.states[i, 0] - expect) <= 1e-6 * max(1.0, abs(expect))
        assert np.array_equal(traj.states[:, 1:],
                              np.tile(traj.states[0, 1:], (len(traj.times), 1)))


def test_nil_linear_branch_exact(rng):
    c = rand_nil_coords(rng)._replace(H=0.0)
    nd = flow.NilData.from_coords(c)
    assert nd.H == 0.0
    traj = flow.integrate(NIL, c, 100.0, flow.FlowControls(detect_stationary=False))
    for i, t in enumerate(traj.times):
        expect = float(c.A) + nd.R * float(t)
        assert abs(traj.states[i, 0] - expect) <= 1e-9 * max(1.0, abs(expect))


def test_nil_convergence_to_stationary_value(rng):
    c = rand_nil_coords(rng, 0.5, 1.0)
    nd = flow.NilData.from_coords(c)
    t_needed = 18.0 / (4 * nd.H ** 2)
    traj = flow.integrate(NIL, c, max(10.0, t_needed))
    limit = nd.R / (4 * nd.H ** 2)
    assert abs(traj.final_state[0] - limit) <= 1e-6 * max(1.0, abs(limit))


def test_abelian_converges_immediately(rng):
    traj = flow.integrate(AB, rand_coords(rng), 50.0)
    assert traj.status == "converged"
    assert traj.t_final == 0.0


# --- normalized limits ----------------------------------------------------------------

def test_normalized_limit_nil_divergent(rng):
    c = rand_nil_coords(rng)._replace(H=0.0)
    nd = flow.NilData.from_coords(c)
    if abs(nd.R) < 0.5:
        c = c._replace(D=1.3, J=1.1, F=0.9, L=0.8)
        nd = flow.NilData.from_coords(c)
    assert nd.R != 0
    traj = flow.integrate(NIL, c, 1e8, flow.FlowControls(detect_stationary=False))
    form, orbit = flow.normalized_limit(traj, "A")
    assert orbit.label == "O3"
    assert form_max_diff(form, basis(1, 3, 5)) < 1e-6


def test_normalized_limit_rejects_stationary(rng):
    traj = flow.integrate(AB, rand_coords(rng), 10.0)
    with pytest.raises(flow.LimitError, match="stationary"):
        flow.normalized_limit(traj, "A")


def test_normalized_limit_rejects_bounded(rng):
    c = rand_nil_coords(rng)  # H != 0: A converges, nothing diverges
    traj = flow.integrate(NIL, c, 5.0, flow.FlowControls(detect_stationary=False))
    with pytest.raises(flow.LimitError, match="divergence"):
        flow.normalized_limit(traj, "A")


# --- solv flow ---------------------------------------------------------------------------

SOLV_CONTROLS = flow.FlowControls(blow_norm=1e5)


def test_solv_blow_up_and_limit(rng):
    sd = rand_solv_data(rng)
    traj = flow.integrate(SOLV, sd.to_coords(), 100.0, SOLV_CONTROLS)
    assert traj.status == "blow_up"
    al, be = traj.states[:, 0], traj.states[:, 2]
    ga, de = traj.states[:, 4], -traj.states[:, 6]
    # ratios frozen along the flow
    assert np.max(np.abs(al / de - al[0] / de[0])) < 1e-8
    assert np.max(np.abs(be / ga - be[0] / ga[0])) < 1e-8
    u, v = 4 * al * de, 4 * be * ga
    assert u[-1] > 1e8
    # |u/v - 1| decreases monotonically over the final resolvable window
    w = max(3, int(0.05 * len(traj.times)))
    tail = np.abs(u[-w:] / v[-w:] - 1.0)
    assert np.all(np.diff(tail) <= 1e-12 + 1e-9 * tail[:-1])
    assert tail[-1] < 1e-2
    assert np.all(np.diff(traj.times) > 0)
    # M, N frozen exactly
    assert np.array_equal(traj.states[:, 12], np.full(len(traj.times), sd.M))
    assert np.array_equal(traj.states[:, 13], np.full(len(traj.times), sd.N))
    form, orbit = flow.normalized_limit(traj, "A")
    cc = inv.form_to_coords(form)
    assert abs(cc.A * (-cc.G) - cc.C * cc.E) < 1e-4
    assert orbit.label == "O-+"


def test_solv_positivity_preserved_along_flow(rng):
    sd = rand_solv_data(rng)
    traj = flow.integrate(SOLV, sd.to_coords(), 100.0, SOLV_CONTROLS)
    for i in range(0, len(traj.times), max(1, len(traj.times) // 20)):
        st = traj.states[i]
        here = flow.SolvData(st[0], st[2], st[4], -st[6], st[12], st[13])
        assert flow.positivity_check(here).ok


def test_solv_blow_up_time_below_bound(rng):
    for _ in range(3):
        sd = rand_solv_data(rng)
        traj = flow.integrate(SOLV, sd.to_coords(), 100.0, SOLV_CONTROLS)
        tools = flow.solv_uv_tools(sd)
        if tools.t_prime.available:
            assert traj.t_final <= tools.t_prime.value + 1e-9


def test_solv_error_status_with_unreachable_gate(rng):
    # with the default coefficient gate the sqrt-type growth exhausts float
    # steps first; the failure surfaces as an explicit error, never silently
    sd = rand_solv_data(rng)
    traj = flow.integrate(SOLV, sd.to_coords(), 100.0)
    assert traj.status == "error"
    assert "underflow" in traj.message


def test_solv_rhs_vanishes_on_stationary_locus():
    # closed data with 4 beta gamma = (M-N)^2 and 4 alpha delta = (M+N)^2
    p, q = 1.5, 0.75
    sd = flow.SolvData(p, q, q, p, M=p + q, N=p - q)
    r = flow.reduced_rhs(SOLV, sd.to_coords())
    assert max(abs(x) for x in r) < 1e-12
    # degenerate branch: beta = gamma = 0 with M = N
    sd2 = flow.SolvData(2.0, 0.0, 0.0, -3.0, M=1.25, N=1.25)
    r2 = flow.reduced_rhs(SOLV, sd2.to_coords())
    assert max(abs(x) for x in r2) < 1e-12


def test_grid_consistency_of_blow_up_time(rng):
    sd = rand_solv_data(rng)
    t1 = flow.integrate(SOLV, sd.to_coords(), 100.0,
                        flow.FlowControls(rtol=1e-9, blow_norm=1e5)).t_final
    t2 = flow.integrate(SOLV, sd.to_coords(), 100.0,
                        flow.FlowControls(rtol=5e-10, blow_norm=1e5)).t_final
    assert abs(t1 - t2) < 1e-9


# --- u-v tools ------------------------------------------------------------------------------

def test_uv_rhs_definitions():
    sd = flow.SolvData(1.0, 2.0, 0.5, 1.5, 0.3, -0.2)
    tools = flow.solv_uv_tools(sd)
    l2 = flow.UV_RATE * sd.lam ** 2
    u, v = 3.0, 4.0
    np.testing.assert_allclose(
        tools.uv_rhs((u, v)),
        [l2 * u * (v - (sd.M - sd.N) ** 2), l2 * v * (u - (sd.M + sd.N) ** 2)])
    np.testing.assert_allclose(
        tools.comparison_rhs((u, v)),
        [l2 * u * (v - sd.S), l2 * v * (u - sd.S)])


def test_uv_rate_regression(rng):
    # the factor in the u-v reduction: differentiating u = 4 alpha delta and
    # v = 4 beta gamma through the generic reduced right side must reproduce
    # uv_rhs exactly; this rules out the quarter-speed variant
    for _ in range(8):
        sd = flow.SolvData(*(rng.uniform(0.3, 2.0) for _ in range(4)),
                           M=rng.uniform(-1, 1), N=rng.uniform(-1, 1))
        r = flow.reduced_rhs(SOLV, sd.to_coords())
        du = 4 * (r.A * sd.delta + sd.alpha * -r.G)
        dv = 4 * (r.C * sd.gamma + sd.beta * r.E)
        tools = flow.solv_uv_tools(sd)
        expect = tools.uv_rhs((sd.u0, sd.v0))
        assert abs(du - expect[0]) < 1e-9 * max(1.0, abs(expect[0]))
        assert abs(dv - expect[1]) < 1e-9 * max(1.0, abs(expect[1]))


def test_uv_consistency_with_coefficient_flow(rng):
    # u = 4 alpha delta and v = 4 beta gamma satisfy the reduced 2x2 system;
    # compare away from the pole, where values are not singularly sensitive
    sd = rand_solv_data(rng)
    tools = flow.solv_uv_tools(sd)
    traj = flow.integrate(SOLV, sd.to_coords(), 100.0, SOLV_CONTROLS)
    t_check = 0.8 * traj.t_final
    uv = flow.integrate_ode(tools.uv_rhs, [sd.u0, sd.v0], t_check,
                            flow.FlowControls(detect_stationary=False))
    assert uv.status == "reached_t_max"
    i = int(np.searchsorted(traj.times, t_check))
    st = traj.states[min(i, len(traj.times) - 1)]
    t_at = traj.times[min(i, len(traj.times) - 1)]
    # re-integrate the uv system to the exact sample time of the trajectory
    uv = flow.integrate_ode(tools.uv_rhs, [sd.u0, sd.v0], float(t_at),
                            flow.FlowControls(detect_stationary=False))
    u_coeff = 4 * st[0] * -st[6]
    v_coeff = 4 * st[2] * st[4]
    assert abs(uv.final_state[0] - u_coeff) / u_coeff < 1e-6
    assert abs(uv.final_state[1] - v_coeff) / v_coeff < 1e-6


def test_symmetric_branch_closed_form():
    sd = flow.SolvData(1.0, 1.0, 1.0, 1.0, 0.3, 0.1)  # u0 = v0 = 4
    tools = flow.solv_uv_tools(sd)
    assert sd.C0 == 0.0
    tp = tools.t_prime
    assert tp.available and tp.branch == "symmetric"
    l2 = flow.UV_RATE * sd.lam ** 2
    assert abs(tp.value - math.log(sd.u0 / (sd.u0 - sd.S)) / (l2 * sd.S)) < 1e-15
    # numeric comparison-system blow-up agrees
    tr = flow.integrate_ode(tools.comparison_rhs, [sd.u0, sd.v0], 10.0,
                            flow.FlowControls(detect_stationary=False))
    assert tr.status == "blow_up"
    assert abs(tr.t_final - tp.value) / tp.value < 0.01


def test_general_t_prime_matches_numeric_pole(rng):
    for _ in range(3):
        sd = rand_solv_data(rng)
        if sd.C0 == 0 or sd.S == 0:
            continue
        tools = flow.solv_uv_tools(sd)
        assert tools.t_prime.available
        tr = flow.integrate_ode(tools.comparison_rhs, [sd.u0, sd.v0], 50.0,
                                flow.FlowControls(detect_stationary=False))
        assert tr.status == "blow_up"
        assert abs(tr.t_final - tools.t_prime.value) / tools.t_prime.value < 0.01
        # w closed form matches e^{8 lam^2 S t} u away from the pole
        for frac in (0.2, 0.5, 0.8):
            i = int(np.searchsorted(tr.times, frac * tr.t_final))
            t_i = float(tr.times[i])
            w_num = math.exp(flow.UV_RATE * sd.lam ** 2 * sd.S * t_i) * tr.states[i, 0]
            assert abs(tools.w_closed_form(t_i) - w_num) / abs(w_num) < 1e-5


def test_full_uv_blows_up_before_comparison(rng):
    sd = rand_solv_data(rng)
    tools = flow.solv_uv_tools(sd)
    full = flow.integrate_ode(tools.uv_rhs, [sd.u0, sd.v0], 50.0,
                              flow.FlowControls(detect_stationary=False))
    comp = flow.integrate_ode(tools.comparison_rhs, [sd.u0, sd.v0], 50.0,
                              flow.FlowControls(detect_stationary=False))
    assert full.status == comp.status == "blow_up"
    assert full.t_final <= comp.t_final + 1e-9


def test_t_prime_unavailable_branch():
    # far outside the admissible region the bound's logarithm domain fails
    sd = flow.SolvData(10.0, 0.25, 1.0, 0.25, 2.0, -0.2)
    tp = flow._t_prime(sd)
    assert not tp.available
    assert "no finite bound" in tp.reason


def test_s_zero_branch():
    sd = flow.SolvData(1.5, 1.0, 1.0, 1.0, 0.0, 0.0)
    tp = flow._t_prime(sd)
    assert tp.branch == "S=0" and tp.available
    tools = flow.solv_uv_tools(sd)
    tr = flow.integrate_ode(tools.comparison_rhs, [sd.u0, sd.v0], 10.0,
                            flow.FlowControls(detect_stationary=False))
    assert tr.status == "blow_up"
    assert abs(tr.t_final - tp.value) / tp.value < 0.01


# --- positivity --------------------------------------------------------------------------

def test_positivity_examples():
    ok = flow.positivity_check(flow.SolvData(1, 1, 1, 1, 0, 0))
    assert ok.ok and ok.matrix_positive_definite
    bad = flow.positivity_check(flow.SolvData(1, 1, 1, 1, 2, 0))
    assert not bad.ok and not bad.matrix_positive_definite
    assert "dominates_M" in bad.failed()
    mixed = flow.positivity_check(flow.SolvData(1, 1, 1, -1, 0, 0))
    assert not mixed.ok and "same_sign" in mixed.failed()
    neg = flow.positivity_check(flow.SolvData(-1, -1, -1, -1, 0, 0))
    assert neg.ok


def test_positivity_matrix_agreement_random(rng):
    for _ in range(50):
        sd = flow.SolvData(*(rng.uniform(-2, 2) for _ in range(4)),
                           M=rng.uniform(-1.5, 1.5), N=rng.uniform(-1.5, 1.5))
        flow.positivity_check(sd)  # raises if the two characterizations split


def test_solv_data_coords_round_trip(rng):
    sd = rand_solv_data(rng)
    back = flow.SolvData.from_coords(sd.to_coords())
    assert (back.alpha, back.beta, back.gamma, back.delta, back.M, back.N) == \
        (sd.alpha, sd.beta, sd.gamma, sd.delta, sd.M, sd.N)
    with pytest.raises(ValueError):
        flow.SolvData.from_coords(inv.PrimitiveCoords(A=1.0, B=0.5))
