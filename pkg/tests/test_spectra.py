import numpy as np
import pytest

from acaom import (LinearModel, build_drift, fig1_assisted_params,
                   fig1_params, position_spectrum, solve_lyapunov,
                   solve_steady_state)
from acaom.cooling import response_from_model
from acaom.spectra import (make_omega_grid, spectrum_on_grid,
                           thermal_force_spectrum, transfer_matrix)


def test_thermal_spectrum_at_resonance_is_exact():
    # coth(hbar omega_m / 2 k_B T) = 2 nbar + 1 identically via the Bose
    # relation, so the coth and white forms agree exactly at w = +-1
    m = LinearModel(delta=1, delta_a=0, kappa_c=0.1, kappa_a=0.1,
                    gamma_m=1e-5, j=0, g=0j, nbar=42.0)
    s = thermal_force_spectrum(m, np.array([1.0, -1.0]), "coth")
    want = m.gamma_m * (2 * m.nbar + 1)
    np.testing.assert_allclose(s, want, rtol=1e-12)


def test_thermal_spectrum_high_t_limit():
    # nbar >> 1: the coth form flattens to the white level over the band
    m = LinearModel(delta=1, delta_a=0, kappa_c=0.1, kappa_a=0.1,
                    gamma_m=1e-5, j=0, g=0j, nbar=1e4)
    grid = np.linspace(-3, 3, 61)
    s = thermal_force_spectrum(m, grid, "coth")
    white = m.gamma_m * (2 * m.nbar + 1)
    np.testing.assert_allclose(s, white, rtol=1e-7)


def test_thermal_spectrum_zero_temperature():
    m = LinearModel(delta=1, delta_a=0, kappa_c=0.1, kappa_a=0.1,
                    gamma_m=1e-5, j=0, g=0j, nbar=0.0)
    s = thermal_force_spectrum(m, np.array([-2.0, 0.5]), "coth")
    np.testing.assert_allclose(s, m.gamma_m * np.array([2.0, 0.5]),
                               rtol=1e-12)


def test_spectrum_nonnegative_and_identity():
    p = fig1_assisted_params()
    ss = solve_steady_state(p)
    m = LinearModel.from_steady_state(ss, p)
    grid = make_omega_grid(m)
    s_q, s_th, s_rp = spectrum_on_grid(m, grid, "coth")
    assert np.all(s_q >= 0)
    assert np.all(s_rp >= -1e-15)
    # S_q = |chi_eff|^2 (S_rp + S_th) exactly (two independent routes)
    resp = response_from_model(m, grid)
    rebuilt = np.abs(resp.chi_eff) ** 2 * (s_rp + s_th)
    np.testing.assert_allclose(s_q, rebuilt, rtol=1e-9)


def test_transfer_matrix_thermal_column_equals_chi_eff():
    # the q <- xi transfer element is the effective susceptibility itself
    p = fig1_assisted_params()
    ss = solve_steady_state(p)
    m = LinearModel.from_steady_state(ss, p)
    for w in (0.3, 0.95, 1.0, 1.4):
        t = transfer_matrix(m, w)
        chi = response_from_model(m, np.array([w])).chi_eff[0]
        assert t[4, 5] == pytest.approx(chi, rel=1e-10)


def test_uncoupled_variance_is_thermal():
    p = fig1_params(power_left=0.0, nbar=250.0)
    ss = solve_steady_state(p)
    spec = position_spectrum(ss, p, thermal="white")
    assert spec.var_q == pytest.approx(250.5, rel=1e-7)
    assert spec.var_p == pytest.approx(250.5, rel=1e-7)


@pytest.mark.parametrize("mode", ["white", "coth"])
def test_parseval_against_lyapunov(mode):
    for params in (fig1_params(), fig1_assisted_params()):
        ss = solve_steady_state(params)
        cov = solve_lyapunov(build_drift(ss, params))
        spec = position_spectrum(ss, params, thermal=mode)
        assert spec.var_q == pytest.approx(cov.v[4, 4], rel=1e-4)
        assert spec.var_p == pytest.approx(cov.v[5, 5], rel=1e-4)


def test_parseval_white_mode_is_tight():
    params = fig1_params()
    ss = solve_steady_state(params)
    cov = solve_lyapunov(build_drift(ss, params))
    spec = position_spectrum(ss, params, thermal="white")
    assert spec.var_q == pytest.approx(cov.v[4, 4], rel=1e-7)
    assert spec.var_p == pytest.approx(cov.v[5, 5], rel=1e-6)


def test_grid_spans_and_resolves_peaks():
    p = fig1_params()
    ss = solve_steady_state(p)
    m = LinearModel.from_steady_state(ss, p)
    grid = make_omega_grid(m)
    assert grid[0] <= -4.0 + 1e-12 and grid[-1] >= 4.0 - 1e-12
    resp = response_from_model(m, np.array([1.0]))
    width = float(resp.gamma_eff[0])
    near = grid[np.abs(grid - resp.omega_eff[0]) < width]
    assert near.size >= 5
    assert np.min(np.diff(near)) < width / 10


def test_spectrum_requires_stability():
    from acaom import StabilityError
    p = fig1_params(delta_pinned=-2 * np.pi * 10e6, power_left=100e-3)
    ss = solve_steady_state(p)
    with pytest.raises(StabilityError):
        position_spectrum(ss, p)
