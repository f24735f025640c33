import numpy as np
import pytest

from acaom import (Basis, LinearModel, StabilityError, build_drift,
                   check_stability, fig1_assisted_params, fig1_params,
                   solve_lyapunov, solve_steady_state)
from acaom.dynamics import (DriftModel, characteristic_coeffs,
                            complexmode_drift, drift_from_model,
                            quadrature_drift, routh_hurwitz_stable,
                            symplectic_form, uncertainty_min_eig)


def decoupled_model(nbar=0.0):
    return LinearModel(delta=0.7, delta_a=-0.4, kappa_c=0.12, kappa_a=0.2,
                       gamma_m=1e-4, j=0.0, g=0j, nbar=nbar)


def test_decoupled_quadrature_eigenvalues():
    m = decoupled_model()
    a = quadrature_drift(m)
    ev = np.sort_complex(np.linalg.eigvals(a).astype(complex))
    gm = m.gamma_m
    expected = np.sort_complex(np.array([
        -m.kappa_c + 1j * m.delta, -m.kappa_c - 1j * m.delta,
        -m.kappa_a + 1j * m.delta_a, -m.kappa_a - 1j * m.delta_a,
        -gm / 2 + 1j * np.sqrt(1 - gm ** 2 / 4),
        -gm / 2 - 1j * np.sqrt(1 - gm ** 2 / 4)]))
    np.testing.assert_allclose(ev, expected, atol=1e-12)


def test_decoupled_complexmode_eigenvalues_match_quadrature():
    m = decoupled_model()
    eq = np.linalg.eigvals(quadrature_drift(m).astype(complex))
    ec = np.linalg.eigvals(complexmode_drift(m))
    # same multiset (basis change preserves the spectrum)
    for lam in eq:
        assert np.min(np.abs(ec - lam)) < 1e-10


def test_complexmode_conjugation_pairing():
    m = LinearModel(delta=1.0, delta_a=-0.5, kappa_c=0.1, kappa_a=0.07,
                    gamma_m=1e-5, j=0.2, g=0.15 + 0.05j, nbar=10.0)
    a = complexmode_drift(m)
    swap = np.zeros((6, 6))
    for i in range(3):
        swap[i, i + 3] = swap[i + 3, i] = 1.0
    np.testing.assert_allclose(swap @ a.conj() @ swap, a, atol=1e-15)


def test_quadrature_drift_is_real():
    ss = solve_steady_state(fig1_assisted_params())
    d = build_drift(ss, fig1_assisted_params(), Basis.QUADRATURE)
    assert d.drift.dtype.kind == "f"
    assert d.stable is True


def test_identity_drift_margin():
    stable, margin = check_stability(-np.eye(6))
    assert stable is True
    assert margin == pytest.approx(-1.0)


def test_randomized_stable_construction(rng):
    # A = -P P^T + skew has eigenvalues with negative real parts
    for _ in range(20):
        p = rng.normal(size=(6, 6))
        s = rng.normal(size=(6, 6))
        a = -(p @ p.T + 1e-3 * np.eye(6)) + (s - s.T)
        stable, margin = check_stability(a)
        assert stable and margin < 0


def _dummy_model():
    return LinearModel(delta=0, delta_a=0, kappa_c=1, kappa_a=1,
                       gamma_m=0, j=0, g=0j, nbar=0)


def test_lyapunov_scalar_balance():
    d = DriftModel(basis=Basis.QUADRATURE, drift=-np.eye(6),
                   noise_corr=2.0 * np.eye(6), stable=True,
                   stability_margin=-1.0, model=_dummy_model())
    cov = solve_lyapunov(d)
    np.testing.assert_allclose(cov.v, np.eye(6), atol=1e-13)


def test_uncoupled_thermalization():
    nbar = 37.5
    m = decoupled_model(nbar=nbar)
    cov = solve_lyapunov(drift_from_model(m))
    assert cov.v[4, 4] == pytest.approx(nbar + 0.5, rel=1e-10)
    assert cov.v[5, 5] == pytest.approx(nbar + 0.5, rel=1e-10)


def test_vacuum_floor():
    m = decoupled_model(nbar=0.0)
    cov = solve_lyapunov(drift_from_model(m))
    np.testing.assert_allclose(np.diag(cov.v), 0.5 * np.ones(6), atol=1e-12)


def test_lyapunov_residual_and_symmetry():
    p = fig1_assisted_params()
    ss = solve_steady_state(p)
    cov = solve_lyapunov(build_drift(ss, p))
    assert cov.residual < 1e-10
    np.testing.assert_allclose(cov.v, cov.v.T, atol=1e-12)


def test_lyapunov_refuses_unstable():
    m = LinearModel(delta=-1.0, delta_a=0.0, kappa_c=0.05, kappa_a=0.1,
                    gamma_m=1e-5, j=0.0, g=0.3 + 0j, nbar=0.0)
    d = drift_from_model(m)
    assert not d.stable
    with pytest.raises(StabilityError) as err:
        solve_lyapunov(d)
    assert err.value.margin is not None


def test_basis_consistency_100_draws(rng):
    from acaom.cooling import phonon_number_numeric
    from acaom.selftest import random_stable_model
    worst = 0.0
    for _ in range(100):
        m = random_stable_model(rng)
        nf_q = phonon_number_numeric(
            solve_lyapunov(drift_from_model(m, Basis.QUADRATURE)))
        nf_c = phonon_number_numeric(
            solve_lyapunov(drift_from_model(m, Basis.COMPLEX_MODE)))
        worst = max(worst, abs(nf_q - nf_c) / max(nf_q, 1e-12))
    assert worst < 1e-9


def test_uncertainty_relation_on_computed_covariances(rng):
    from acaom.selftest import random_stable_model
    for _ in range(25):
        m = random_stable_model(rng)
        cov = solve_lyapunov(drift_from_model(m))
        assert uncertainty_min_eig(cov.v) > -1e-9


def test_symplectic_form_shape():
    om = symplectic_form(3)
    np.testing.assert_allclose(om, -om.T)
    np.testing.assert_allclose(om @ om, -np.eye(6))


def test_routh_hurwitz_agrees_with_eigenvalues(rng):
    from acaom.selftest import random_model
    checked = 0
    for _ in range(400):
        m = random_model(rng)
        a = quadrature_drift(m)
        _, margin = check_stability(a)
        if abs(margin) <= 1e-8:
            continue
        checked += 1
        assert routh_hurwitz_stable(characteristic_coeffs(a)) == (margin < 0)
    assert checked > 300


def test_routh_hurwitz_known_cases():
    # (s+1)^3 = s^3 + 3 s^2 + 3 s + 1: stable
    assert routh_hurwitz_stable([1, 3, 3, 1]) is True
    # s^2 - 1: root at +1
    assert routh_hurwitz_stable([1, 0, -1]) is False
    # s^2 + 1: marginal (imaginary axis)
    assert routh_hurwitz_stable([1, 0, 1]) is False
