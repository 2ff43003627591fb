import cmath
import math

import numpy as np
import pytest

from decoshell.dispersion import MomentumPoint
from decoshell.params import ModelParams, derive_condensate
from decoshell.propagator import (EvanescenceError, KernelPoint,
                                  _value_from_roots, g_bulk_symmetric, g_inter,
                                  g_same, kernel_point, solve_branches)


def make_kp(delta_h, kappa2, omega=0.0, inv_u2=1.0):
    return KernelPoint(omega=omega, k=MomentumPoint(0.0, 0.0),
                       kappa=math.sqrt(kappa2), delta_h=delta_h, inv_u2=inv_u2)


def quartic_residual(x, delta_h, kappa2, c):
    return abs(x * x - (delta_h + kappa2) * x + (delta_h * kappa2 - c * c))


def test_kernel_point_fields():
    p = ModelParams(u_psi=1.0, m_H=1.0)
    d = derive_condensate(ModelParams(m_H=1.0, e_charge=2.0, mu=1.0,
                                      lambda_psi=4.0, u_psi=1.0, m_psi=0.0))
    # rho0 = 1 so m_A = 2; at k_par = 0, kappa = m_A
    kp = kernel_point(d, p, 0.0, MomentumPoint(0.0, 0.0))
    assert kp.kappa == pytest.approx(2.0)
    # k_par^2 = 1, m_H^2 = 1, omega = 0 -> delta = 2
    kp = kernel_point(d, p, 0.0, MomentumPoint(1.0, 0.0))
    assert kp.delta_h == pytest.approx(2.0)
    # omega = 2 u_psi -> delta = 2 - 4 = -2
    kp = kernel_point(d, p, 2.0, MomentumPoint(1.0, 0.0))
    assert kp.delta_h == pytest.approx(-2.0)


def test_branches_decoupled_factorization():
    b = solve_branches(make_kp(2.0, 3.0), 0.0, eps_ret=0.0)
    roots = sorted([abs(b.gamma1**2), abs(b.gamma2**2)])
    assert roots[0] == pytest.approx(2.0, rel=1e-14)
    assert roots[1] == pytest.approx(3.0, rel=1e-14)
    assert b.kind1 == b.kind2 == "evanescent"
    assert not b.degenerate


def test_branches_closed_form_values():
    # (5 +- sqrt(5)) / 2, verified by substitution into the quartic
    b = solve_branches(make_kp(2.0, 3.0), 1.0, eps_ret=0.0)
    x1, x2 = b.gamma1**2, b.gamma2**2
    assert x1.real == pytest.approx((5 - math.sqrt(5)) / 2, rel=1e-13)
    assert x2.real == pytest.approx((5 + math.sqrt(5)) / 2, rel=1e-13)
    for x in (x1, x2):
        assert quartic_residual(x, 2.0, 3.0, 1.0) < 1e-12


def test_branches_propagating_when_constant_term_negative():
    # delta*kappa^2 < C^2 forces one root through zero
    b = solve_branches(make_kp(0.5, 1.0), 2.0, eps_ret=0.0)
    kinds = sorted([b.kind1, b.kind2])
    assert kinds == ["evanescent", "propagating"]
    assert b.gamma1.real >= 0 and b.gamma2.real >= 0


def test_root_residual_random_draws():
    rng = np.random.default_rng(7)
    for _ in range(2000):
        dh = rng.uniform(-20, 20)
        k2 = rng.uniform(0.01, 30)
        c = rng.uniform(0, 8)
        b = solve_branches(make_kp(dh, k2), c, eps_ret=0.0)
        norm = max(1.0, abs(dh + k2), abs(dh * k2 - c * c))
        assert quartic_residual(b.gamma1**2, dh, k2, c) < 1e-10 * norm
        assert quartic_residual(b.gamma2**2, dh, k2, c) < 1e-10 * norm


def test_root_residual_near_degenerate():
    # real couplings only allow near-double roots at delta ~ kappa^2, C ~ 0
    rng = np.random.default_rng(8)
    for _ in range(300):
        k2 = rng.uniform(0.1, 10)
        dh = k2 * (1.0 + rng.uniform(-1e-9, 1e-9))
        c = k2 * rng.uniform(0.0, 1e-9)
        b = solve_branches(make_kp(dh, k2), c, eps_ret=0.0)
        assert b.degenerate
        norm = max(1.0, abs(dh + k2), abs(dh * k2 - c * c))
        assert quartic_residual(b.gamma1**2, dh, k2, c) < 1e-10 * norm
        assert quartic_residual(b.gamma2**2, dh, k2, c) < 1e-10 * norm


def test_retarded_shift_selects_decaying_branch():
    # propagating regime: positive frequency must give Re gamma > 0 and an
    # outgoing (negative imaginary) wavenumber
    kp = make_kp(-4.0, 1.0, omega=2.0)
    b = solve_branches(kp, 0.5)
    prop = b.gamma1 if b.kind1 == "propagating" else b.gamma2
    assert prop.real >= 0.0
    assert prop.imag < 0.0


def test_g_inter_decoupled_oracle():
    rng = np.random.default_rng(9)
    for _ in range(300):
        dh = rng.uniform(0.05, 20)
        k2 = rng.uniform(0.05, 20)
        a = rng.uniform(0.0, 4.0)
        kp = make_kp(dh, k2)
        b = solve_branches(kp, 0.0, eps_ret=0.0)
        val = abs(g_inter(b, kp, a))
        ref = math.exp(-math.sqrt(dh) * a) / (2 * math.sqrt(dh))
        assert val == pytest.approx(ref, rel=1e-12)


def test_g_inter_zero_separation_formula():
    kp = make_kp(2.0, 3.0)
    b = solve_branches(kp, 1.0, eps_ret=0.0)
    x1, x2 = b.gamma1**2, b.gamma2**2
    g1, g2 = b.gamma1, b.gamma2
    expected = ((3.0 - x1) / g1 - (3.0 - x2) / g2) / (2 * (x2 - x1))
    assert g_inter(b, kp, 0.0) == pytest.approx(expected, rel=1e-13)


def test_g_same_is_zero_separation():
    kp = make_kp(1.7, 4.1)
    b = solve_branches(kp, 0.9, eps_ret=0.0)
    assert g_same(b, kp) == g_inter(b, kp, 0.0)


def test_g_same_decoupled_value():
    kp = make_kp(2.0, 3.0)
    b = solve_branches(kp, 0.0, eps_ret=0.0)
    assert abs(g_same(b, kp)) == pytest.approx(1 / (2 * math.sqrt(2.0)), rel=1e-13)


def test_g_same_real_positive_for_real_branches():
    # mixing always interleaves the roots around kappa^2
    # (gamma1^2 < kappa^2 < gamma2^2); whenever both are real positive the
    # same-plate value must be real and positive
    rng = np.random.default_rng(10)
    found = 0
    for _ in range(500):
        dh = rng.uniform(0.1, 5)
        k2 = rng.uniform(0.1, 10)
        c = rng.uniform(0.0, 1.0)
        kp = make_kp(dh, k2)
        b = solve_branches(kp, c, eps_ret=0.0)
        x1, x2 = b.gamma1**2, b.gamma2**2
        if abs(x1.imag) > 0 or abs(x2.imag) > 0:
            continue
        if not (min(x1.real, x2.real) > 0):
            continue
        found += 1
        assert min(x1.real, x2.real) < k2 < max(x2.real, x1.real) or c == 0
        val = g_same(b, kp)
        assert abs(val.imag) < 1e-14
        assert val.real > 0
    assert found > 50


def test_confluent_limit_against_numeric_sequence():
    # evaluate the two-pole formula on a shrinking split and compare with the
    # analytic confluent expression; agreement must be first order in delta
    kappa2 = 5.0
    x = 2.3 + 0.0j
    a = 1.7
    conf = _value_from_roots(x, x, kappa2, a, degenerate=True)
    prev_err = None
    for delta in (1e-3, 1e-4, 1e-5):
        two_pole = _value_from_roots(x, x * (1 + delta), kappa2, a,
                                     degenerate=False)
        err = abs(two_pole - conf) / abs(conf)
        assert err < 2 * delta
        if prev_err is not None:
            assert err < prev_err
        prev_err = err
    # extrapolated agreement at the finest split is inside 1e-6 relative
    assert prev_err < 1e-4 * 0.1


def test_g_inter_continuous_across_degeneracy_flag():
    # values on both sides of the degeneracy tolerance agree closely
    kappa2 = 5.0
    x = 2.3 + 0.0j
    a = 1.3
    just_out = _value_from_roots(x, x * (1 + 1e-7), kappa2, a, degenerate=False)
    flagged = _value_from_roots(x, x * (1 + 1e-9), kappa2, a, degenerate=True)
    assert abs(just_out - flagged) / abs(flagged) < 1e-6


def test_near_degenerate_uses_confluent_value():
    kp = make_kp(2.0, 2.0)
    # C = 0 with delta == kappa^2 is an exactly degenerate decoupled point
    b = solve_branches(kp, 0.0, eps_ret=0.0)
    assert b.degenerate
    val = g_inter(b, kp, 1.1)
    ref = math.exp(-math.sqrt(2.0) * 1.1) / (2 * math.sqrt(2.0))
    assert abs(val) == pytest.approx(ref, rel=1e-12)


def test_attenuation_slope_matches_slowest_branch():
    # log|G| is affine in separation with slope -min(Re gamma) at large a
    kp = make_kp(2.0, 3.0)
    b = solve_branches(kp, 0.5, eps_ret=0.0)
    gmin = min(b.gamma1.real, b.gamma2.real)
    avals = np.linspace(5.0 / gmin, 10.0 / gmin, 12)
    logs = [math.log(abs(g_inter(b, kp, a))) for a in avals]
    slope = np.polyfit(avals, logs, 1)[0]
    assert slope == pytest.approx(-gmin, rel=1e-2)


def test_g_inter_monotone_decreasing_in_separation():
    kp = make_kp(3.0, 4.0)
    b = solve_branches(kp, 1.0, eps_ret=0.0)
    vals = [abs(g_inter(b, kp, a)) for a in np.linspace(0.0, 5.0, 30)]
    assert all(x > y for x, y in zip(vals, vals[1:]))


def test_bulk_symmetric_hand_values():
    p = ModelParams(u_psi=1.0, mu=1.0, a_sep=1.5)
    # kappa_tilde = 1 at k=0, M=1, omega=mu
    val = g_bulk_symmetric(p, 1.0, MomentumPoint(0.0, 0.0), 1.0)
    assert val == pytest.approx(math.exp(-1.5) / 2.0, rel=1e-13)
    # kappa_tilde = 2, zero separation -> 1/4
    p0 = ModelParams(u_psi=1.0, mu=1.0, a_sep=0.0)
    val = g_bulk_symmetric(p0, 1.0, MomentumPoint(math.sqrt(2.0), 0.0),
                           math.sqrt(2.0))
    assert val == pytest.approx(0.25, rel=1e-13)


def test_bulk_symmetric_propagating_raises():
    p = ModelParams(u_psi=1.0, mu=3.0, a_sep=1.0)
    with pytest.raises(EvanescenceError):
        g_bulk_symmetric(p, 0.0, MomentumPoint(0.5, 0.0), 1.0)
