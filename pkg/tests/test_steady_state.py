import numpy as np
import pytest

from acaom import (NumericsError, ParameterError, bistability_scan,
                   derive_dimensionless, fig1_params, solve_steady_state)
from acaom.params import fig10_params
from acaom.steady_state import _cubic_coeffs, cavity_amplitudes, \
    cubic_real_roots


def test_undriven_system_is_trivial():
    p = fig1_params(power_left=0.0, power_right=0.0)
    ss = solve_steady_state(p)
    assert ss.alpha_c == 0
    assert ss.alpha_a == 0
    assert ss.q_ss == 0
    assert ss.x_ss == 0


def test_decoupled_auxiliary_amplitude():
    # J = 0: alpha_a = -i Omega_R / (kappa_a + i Delta_a), independent of
    # the cooling cavity
    p = fig1_params(power_right=20e-3, delta_a=0.3 * 2 * np.pi * 10e6)
    sp = derive_dimensionless(p)
    _, alpha_a = cavity_amplitudes(sp, sp.delta_pinned)
    expected = -1j * sp.drive_right / (sp.kappa_a + 1j * sp.delta_a)
    assert alpha_a == pytest.approx(expected, rel=1e-12)


def test_gauge_makes_coupling_real_nonnegative():
    ss = solve_steady_state(fig1_params())
    assert ss.coupling_g.imag == 0.0
    assert ss.coupling_g.real >= 0.0
    assert abs(ss.alpha_c.imag) <= 1e-12 * abs(ss.alpha_c)


def test_residual_below_tolerance():
    for p in (fig1_params(), fig10_params(), fig10_params(power_left=50e-3)):
        ss = solve_steady_state(p)
        assert ss.residual < 1e-10


def test_pinned_mode_backs_out_bare_detuning():
    p = fig1_params()
    ss = solve_steady_state(p)
    sp = derive_dimensionless(p)
    assert ss.delta_c / p.omega_m == pytest.approx(
        1.0 + sp.g0 * ss.q_ss, rel=1e-12)
    assert ss.delta_eff == pytest.approx(p.omega_m, rel=1e-12)


def test_gauge_does_not_change_magnitudes():
    p = fig1_params()
    ss = solve_steady_state(p, apply_gauge=True)
    ss_raw = solve_steady_state(p, apply_gauge=False)
    assert abs(ss.alpha_c) == pytest.approx(abs(ss_raw.alpha_c), rel=1e-12)
    assert abs(ss.coupling_g) == pytest.approx(abs(ss_raw.coupling_g),
                                               rel=1e-12)


def test_cubic_roots_satisfy_cubic():
    for pl in (20e-3, 50e-3, 120e-3, 300e-3):
        p = fig10_params(power_left=pl)
        sp = derive_dimensionless(p)
        coeffs, _, _, _ = _cubic_coeffs(sp)
        roots = cubic_real_roots(sp)
        vals = np.polyval(coeffs, roots)
        scale = max(abs(coeffs[-1]), 1.0)
        assert np.all(np.abs(vals) < 1e-9 * scale)


def test_fig10_root_counts():
    scan = bistability_scan(fig10_params(), [20e-3, 50e-3])
    assert len(scan[0].q_roots) == 1
    assert scan[0].stable == (True,)
    assert len(scan[1].q_roots) == 3
    # lower branch stable, middle branch statically unstable; the upper
    # branch carries G ~ omega_m at blue effective detuning and is
    # dynamically unstable too
    assert scan[1].stable[0] is True
    assert scan[1].stable[1] is False


def test_scan_root_count_piecewise_one_three_one():
    grid = np.linspace(2e-3, 500e-3, 120)
    scan = bistability_scan(fig10_params(), grid)
    counts = np.array([len(pt.q_roots) for pt in scan])
    assert set(counts) <= {1, 3}
    # transitions only 1->3 and 3->1, each at most once
    changes = np.flatnonzero(np.diff(counts))
    assert len(changes) == 2
    assert counts[0] == 1 and counts[-1] == 1
    assert np.all(counts[changes[0] + 1:changes[1] + 1] == 3)


def test_scan_low_power_root_vanishes():
    scan = bistability_scan(fig10_params(), [1e-7, 1e-6, 1e-5])
    qs = [pt.q_roots[0] for pt in scan]
    assert all(len(pt.q_roots) == 1 for pt in scan)
    # linear-response regime: displacement proportional to drive power,
    # vanishing as P_L -> 0
    assert qs[0] == pytest.approx(qs[1] / 10, rel=1e-3)
    assert qs[1] == pytest.approx(qs[2] / 10, rel=1e-3)
    sp = derive_dimensionless(fig10_params())
    assert sp.g0 * qs[2] < 1e-4  # far below the fold scale u ~ 1


def test_roots_sorted_ascending():
    scan = bistability_scan(fig10_params(), [50e-3])
    assert list(scan[0].q_roots) == sorted(scan[0].q_roots)


def test_scan_rejects_bad_grids():
    p = fig10_params()
    with pytest.raises(ParameterError):
        bistability_scan(p, [30e-3, 20e-3])
    with pytest.raises(ParameterError):
        bistability_scan(p, [-1e-3, 20e-3])
    with pytest.raises(ParameterError):
        bistability_scan(fig1_params(), [20e-3, 30e-3])  # pinned mode


def test_continuation_policy_picks_lower_branch():
    p = fig10_params(power_left=50e-3)
    ss = solve_steady_state(p)
    roots = cubic_real_roots(derive_dimensionless(p))
    sp = derive_dimensionless(p)
    assert sp.g0 * ss.q_ss == pytest.approx(roots[0], rel=1e-9)
    ss_hi = solve_steady_state(p, root_policy="largest")
    assert ss_hi.q_ss > ss.q_ss
    with pytest.raises(ParameterError):
        solve_steady_state(p, root_policy="middle")


def test_unstable_selection_is_flagged():
    # deep in the bistable window the largest root is stable, but strongly
    # driven blue-detuned configurations are not; use a known-unstable one
    p = fig1_params(delta_pinned=-2 * np.pi * 10e6, power_left=100e-3)
    ss = solve_steady_state(p)
    assert ss.stable is False


def test_no_real_root_raises_numerics_error(monkeypatch):
    # a real cubic always has a real root; force complex coefficients to
    # exercise the guard against silent numerics bugs
    import acaom.steady_state as ss_mod

    monkeypatch.setattr(
        ss_mod, "_cubic_coeffs",
        lambda sp: (np.array([1.0, 0.0, 0.0, 1.0j]), 0.1, 1.0, 0.0))
    with pytest.raises(NumericsError):
        cubic_real_roots(object())
