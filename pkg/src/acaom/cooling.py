"""Cooling performance: effective mechanical response and phonon numbers.

Adiabatically eliminating both cavity fields from the linearized dynamics
leaves the mechanical resonator with a frequency-dependent effective
susceptibility

    chi_eff(w) = omega_m / [Omega_eff(w)^2 - w^2 - i w Gamma_eff(w)],

with an optical-spring-shifted resonance Omega_eff and a damping
Gamma_eff = gamma_m + gamma_C.  The net cooling rate

    gamma_C(w) = 2 |G|^2 omega_m (2 Delta kappa_a Pi - phi Phi) / zeta

is built from the two-cavity response polynomials

    beta_pm = +-J^2 +- kappa_c kappa_a -+ (w +- Delta)(w +- Delta_a)
    tau_pm  = kappa_c (w +- Delta_a) + kappa_a (w +- Delta)
    Pi   = beta_+ beta_- + tau_+ tau_-
    Phi  = 2 [kappa_c^2 kappa_a + J^2 (kappa_c + kappa_a)
              + kappa_a (Delta^2 - w^2)
              + kappa_c (kappa_a^2 - w^2 + Delta_a^2)]
    zeta = (beta_+^2 + tau_+^2)(beta_-^2 + tau_-^2)
    phi  = J^2 Delta_a - Delta (kappa_a^2 - w^2 + Delta_a^2).

At J = 0 and w = Delta = omega_m this collapses to the textbook sideband
cooling rate 4 |G|^2 omega_m^2 / [kappa_c (kappa_c^2 + 4 omega_m^2)].

The steady-state phonon number is computed two independent ways:

* numerically, from the Lyapunov covariance,
  n_f = (<dq^2> + <dp^2> - 1)/2 = V_52 - 1/2;
* analytically, by closed-form integration of the white-noise position
  spectrum over a stable sextic denominator (``phonon_number_analytic``).

Both agree to much better than 1e-6 relative; the analytic route guards
the long coefficient chain, the numeric route guards the matrix algebra.

All internal quantities are in units of omega_m.
"""

from dataclasses import dataclass

import numpy as np

from . import dynamics
from .dynamics import Basis, LinearModel
from .errors import CovarianceError, NumericsError, StabilityError
from .params import derive_dimensionless
from .steady_state import solve_steady_state


def response_coeffs(m, w):
    """beta_pm, tau_pm, Pi, Phi, zeta, phi at Fourier frequency w (scaled)."""
    w = np.asarray(w, dtype=float)
    beta_p = m.j ** 2 + m.kappa_c * m.kappa_a - (w + m.delta) * (w + m.delta_a)
    beta_m = -m.j ** 2 - m.kappa_c * m.kappa_a + (w - m.delta) * (w - m.delta_a)
    tau_p = m.kappa_c * (w + m.delta_a) + m.kappa_a * (w + m.delta)
    tau_m = m.kappa_c * (w - m.delta_a) + m.kappa_a * (w - m.delta)
    pi_ = beta_p * beta_m + tau_p * tau_m
    phi_big = 2.0 * (m.kappa_c ** 2 * m.kappa_a
                     + m.j ** 2 * (m.kappa_c + m.kappa_a)
                     + m.kappa_a * (m.delta ** 2 - w ** 2)
                     + m.kappa_c * (m.kappa_a ** 2 - w ** 2 + m.delta_a ** 2))
    zeta = (beta_p ** 2 + tau_p ** 2) * (beta_m ** 2 + tau_m ** 2)
    phi_small = m.j ** 2 * m.delta_a - m.delta * (m.kappa_a ** 2 - w ** 2
                                                  + m.delta_a ** 2)
    return beta_p, beta_m, tau_p, tau_m, pi_, phi_big, zeta, phi_small


def net_cooling_rate(m, w):
    """gamma_C(w), the optically induced addition to mechanical damping."""
    _, _, _, _, pi_, phi_big, zeta, phi_small = response_coeffs(m, w)
    g2 = abs(m.g) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        return 2.0 * g2 * (2.0 * m.delta * m.kappa_a * pi_
                           - phi_small * phi_big) / zeta


def effective_frequency(m, w):
    """Optical-spring-shifted resonance Omega_eff(w)."""
    _, _, _, _, pi_, phi_big, zeta, phi_small = response_coeffs(m, w)
    g2 = abs(m.g) ** 2
    w = np.asarray(w, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        shift = 2.0 * g2 * (phi_small * pi_ + 2.0 * m.delta * m.kappa_a
                            * w ** 2 * phi_big) / zeta
    arg = 1.0 - shift
    return np.sqrt(np.where(arg >= 0, arg, np.nan))


def single_cavity_cooling_rate(g, kappa_c):
    """Textbook sideband rate at w = Delta = omega_m (independent oracle).

    gamma_C = 4 g^2 / (kappa_c (kappa_c^2 + 4)) in units of omega_m.
    """
    return 4.0 * abs(g) ** 2 / (kappa_c * (kappa_c ** 2 + 4.0))


@dataclass(frozen=True)
class MechanicalResponse:
    omega_grid: np.ndarray
    omega_eff: np.ndarray     # units of omega_m
    gamma_eff: np.ndarray
    chi_eff: np.ndarray       # complex, units of 1/omega_m
    gamma_cool: np.ndarray
    pole_mask: np.ndarray     # True where zeta vanished (flagged, not NaN'd)


def response_from_model(m, omega_grid):
    omega_grid = np.asarray(omega_grid, dtype=float)
    _, _, _, _, _, _, zeta, _ = response_coeffs(m, omega_grid)
    poles = zeta == 0.0
    gamma_c = net_cooling_rate(m, omega_grid)
    omega_eff = effective_frequency(m, omega_grid)
    gamma_eff = m.gamma_m + gamma_c
    with np.errstate(divide="ignore", invalid="ignore"):
        chi = 1.0 / (omega_eff ** 2 - omega_grid ** 2
                     - 1j * omega_grid * gamma_eff)
    bad = poles | ~np.isfinite(gamma_c)
    if np.any(bad):
        gamma_c = np.where(bad, np.nan, gamma_c)
        gamma_eff = np.where(bad, np.nan, gamma_eff)
        chi = np.where(bad, np.nan, chi)
    return MechanicalResponse(omega_grid=omega_grid, omega_eff=omega_eff,
                              gamma_eff=gamma_eff, chi_eff=chi,
                              gamma_cool=gamma_c, pole_mask=poles | bad)


def effective_response(ss, params, omega_grid):
    """MechanicalResponse on ``omega_grid`` (grid in units of omega_m)."""
    m = LinearModel.from_steady_state(ss, params)
    d = dynamics.drift_from_model(m)
    if not d.stable:
        raise StabilityError("effective response requested for an unstable "
                             "working point", margin=d.stability_margin)
    return response_from_model(m, omega_grid)


def _model_at(params, j, p_r):
    p = params.with_(tunneling_j=j, power_right=p_r)
    ss = solve_steady_state(p)
    return LinearModel.from_steady_state(ss, p), ss


def amplification_factor(params, j, p_r, require_stable=True):
    """Net-cooling-rate amplification Lambda at w = Delta = omega_m.

    Both the assisted (given j, p_r) and the unassisted (J = 0) reference
    configuration keep the same Delta and P_L; only the auxiliary-cavity
    settings differ.
    """
    m_as, _ = _model_at(params, j, p_r)
    m_un, _ = _model_at(params, 0.0, 0.0)
    if require_stable:
        for tag, mm in (("assisted", m_as), ("unassisted", m_un)):
            d = dynamics.drift_from_model(mm)
            if not d.stable:
                raise StabilityError(f"{tag} configuration unstable",
                                     margin=d.stability_margin)
    gc_un = float(net_cooling_rate(m_un, 1.0))
    if gc_un <= 0:
        raise NumericsError("unassisted net cooling rate is not positive; "
                            "amplification factor undefined")
    return float(net_cooling_rate(m_as, 1.0)) / gc_un


def phonon_number_numeric(cov):
    """n_f from a steady-state covariance matrix (either basis)."""
    v = cov.v
    if cov.basis is Basis.QUADRATURE:
        nf = 0.5 * (v[4, 4].real + v[5, 5].real - 1.0)
    else:
        nf = float(np.real(v[4, 1])) - 0.5
    if nf < -1e-9:
        raise CovarianceError(f"negative phonon number {nf:.3e}; "
                              "covariance integrity violated")
    return float(max(nf, 0.0))


def phonon_number_from_model(m):
    """Lyapunov-route n_f for a dimensionless LinearModel."""
    return phonon_number_numeric(
        dynamics.solve_lyapunov(dynamics.drift_from_model(m)))


def improvement_rate(params, assisted_j, assisted_p_r, route="numeric"):
    """Cooling improvement chi = (n_assisted - n_unassisted)/n_unassisted.

    Negative chi means improved cooling; callers typically report |chi|
    alongside the signed value.
    """
    m_as, _ = _model_at(params, assisted_j, assisted_p_r)
    m_un, _ = _model_at(params, 0.0, 0.0)
    fn = (phonon_number_from_model if route == "numeric"
          else analytic_phonon_from_model)
    n_un = fn(m_un)
    if n_un == 0:
        raise NumericsError("unassisted phonon number vanished; "
                            "improvement rate undefined")
    return (fn(m_as) - n_un) / n_un


# ---------------------------------------------------------------------------
# Closed-form phonon number via the sextic spectral integrals
# ---------------------------------------------------------------------------
#
# The position spectrum of the six-dimensional linear system is a ratio of
# even polynomials, S_q(w) = N(w)/|h(w)|^2 with a stable sextic
# h(w) = sum_k a_k w^(6-k) (a_0 = 1, a_k alternately real/imaginary).  The
# variance integrals (1/2pi) int N/|h|^2 dw have a closed form in the a_k
# and the numerator coefficients; n_f = (var_q + var_p - 1)/2.


def _sextic_coeffs(m):
    """Denominator a_0..a_6 and numerator b_1..b_5 of the position spectrum.

    The numerator is N(w) = b1 w^8 + b2 w^6 + b3 w^4 + b4 w^2 + b5 for the
    white-noise thermal drive gamma_m (2 nbar + 1).
    """
    kc, ka, gm = m.kappa_c, m.kappa_a, m.gamma_m
    d, da, j = m.delta, m.delta_a, m.j
    g2 = abs(m.g) ** 2
    gc = 1.0 + d ** 2
    ga = 1.0 + da ** 2
    fcp = kc ** 2 + d ** 2
    fcm = kc ** 2 - d ** 2
    fap = ka ** 2 + da ** 2
    fam = ka ** 2 - da ** 2

    a = np.empty(7, dtype=complex)
    a[0] = 1.0
    a[1] = -1j * (2.0 * (kc + ka) + gm)
    a[2] = (-2.0 * j ** 2 - 2.0 * kc * (2.0 * ka + gm)
            - ka * (ka + 2.0 * gm) - gc - (kc ** 2 + da ** 2))
    a[3] = 1j * (ka ** 2 * gm + 2.0 * j ** 2 * (kc + ka + gm)
                 + kc ** 2 * (2.0 * ka + gm) + 2.0 * ka * gc
                 + gm * (d ** 2 + da ** 2)
                 + 2.0 * kc * (2.0 * ka * gm + 1.0 + fap))
    a[4] = (j ** 4 - 2.0 * g2 * d + (2.0 * ka * gm + 1.0) * d ** 2
            + fap * gc
            + 2.0 * j ** 2 * (ka * gm + kc * (ka + gm) + 1.0 - d * da)
            + kc ** 2 * (ka ** 2 + 2.0 * ka * gm + ga)
            + 2.0 * kc * (gm * fap + 2.0 * ka))
    a[5] = 1j * (-j ** 4 * gm
                 + ka * (kc * (-kc * ka * gm - 2.0 * (kc + ka))
                         + 4.0 * g2 * d
                         - (ka * gm + 2.0) * d ** 2)
                 - (2.0 * kc + gm * fcp) * da ** 2
                 - 2.0 * j ** 2 * (ka + kc * (ka * gm + 1.0) - gm * d * da))
    a[6] = -(j ** 4 + 2.0 * j ** 2 * (kc * ka + g2 * da - d * da)
             + (-2.0 * g2 * d + fcp) * fap)

    th = gm * (2.0 * m.nbar + 1.0)
    b = np.empty(6, dtype=float)
    b[0] = 0.0
    b[1] = th
    b[2] = 2.0 * (g2 * kc - th * (2.0 * j ** 2 - fcm - fam))
    b[3] = (2.0 * g2 * (j ** 2 * (-2.0 * kc + ka) + kc * (fcp + 2.0 * fam))
            + th * (6.0 * j ** 4 - 4.0 * d ** 2 * fam + fcp ** 2 + fap ** 2
                    + 4.0 * kc ** 2 * fam
                    + 4.0 * j ** 2 * (kc * ka - d * da - fcm - fam)))
    b[4] = 2.0 * (
        -th * (2.0 * j ** 6 + kc ** 4 * (da ** 2 - ka ** 2)
               + j ** 4 * (4.0 * kc * ka - 4.0 * d * da - fcm - fam)
               - 2.0 * j ** 2 * (kc * ka * (kc ** 2 - kc * ka + ka ** 2)
                                 + ka * (kc + ka) * d ** 2
                                 + (4.0 * kc * ka + ka ** 2 + fcp) * d * da
                                 + (kc * ka + fcm + d * da) * da ** 2)
               - kc ** 2 * (2.0 * d ** 2 * fam + fap ** 2)
               + d ** 2 * (fap ** 2 - fam * d ** 2))
        + g2 * (j ** 4 * (kc - 2.0 * ka)
                + kc * (2.0 * fcp * fam + fap ** 2)
                + j ** 2 * (3.0 * kc ** 2 * ka
                            + ka * (d ** 2 + 4.0 * d * da + fap)
                            + 2.0 * kc * (d * da - fam))))
    dc = j ** 4 + 2.0 * j ** 2 * (kc * ka - d * da) + fcp * fap
    b[5] = dc * (2.0 * g2 * (j ** 2 * ka + kc * fap) + th * dc)
    return a, b


def _sextic_patterns(a):
    """The six cofactor combinations entering the variance integrals."""
    a0, a1, a2, a3, a4, a5, a6 = a
    p0 = -(a5 * (-a2 * a3 * a4 + a2 ** 2 * a5 + a4 * (a1 * a4 - a0 * a5))
           + (-a1 * a3 * a4 + a0 * a3 * a5
              + a2 * (a3 ** 2 - 2.0 * a1 * a5)) * a6
           + a1 ** 2 * a6 ** 2)
    p1 = -a3 * a4 * a5 + a3 ** 2 * a6 + a5 * (a2 * a5 - a1 * a6)
    p2 = a1 * a4 * a5 - a5 ** 2 - a1 * a3 * a6
    p3 = -a1 * a2 * a5 + a3 * a5 + a1 ** 2 * a6
    p4 = -a3 ** 2 - a1 ** 2 * a4 + a1 * (a2 * a3 + a5)
    if a6 == 0:
        raise NumericsError("singular configuration: a6 = 0 in the sextic")
    p5 = (a3 ** 2 * a4 - a2 * a3 * a5 + a5 ** 2
          + a1 ** 2 * (a4 ** 2 - a2 * a6)
          + a1 * (-a2 * a3 * a4 + a2 ** 2 * a5 - 2.0 * a4 * a5
                  + a3 * a6)) / a6
    delta6 = (a5 * (a4 * (-a1 * a2 * a3 + a3 ** 2 + a1 ** 2 * a4)
                    + (-a2 * a3 + a1 * (a2 ** 2 - 2.0 * a4)) * a5
                    + a5 ** 2)
              - (a3 ** 3 - a1 * a3 * (a2 * a3 + 3.0 * a5)
                 + a1 ** 2 * (a3 * a4 + 2.0 * a2 * a5)) * a6
              + a1 ** 3 * a6 ** 2)
    return (p0, p1, p2, p3, p4, p5), delta6


def analytic_variances(m):
    """Closed-form (<dq^2>, <dp^2>) of the white-noise model."""
    a, b = _sextic_coeffs(m)
    (p0, p1, p2, p3, p4, p5), delta6 = _sextic_patterns(a)
    if delta6 == 0:
        raise NumericsError("singular configuration: Delta_6 = 0")
    d6 = b[1] * p1 + b[2] * p2 + b[3] * p3 + b[4] * p4 + b[5] * p5
    m6 = b[1] * p0 + b[2] * p1 + b[3] * p2 + b[4] * p3 + b[5] * p4
    var_q = 1j * d6 / (2.0 * delta6)
    var_p = 1j * m6 / (2.0 * delta6)
    imag = max(abs(var_q.imag), abs(var_p.imag))
    scale = max(abs(var_q), abs(var_p), 1.0)
    if imag > 1e-8 * scale:
        raise NumericsError(
            f"spectral integrals came out complex (imag {imag:.2e}); "
            "configuration is likely unstable or singular")
    return float(var_q.real), float(var_p.real)


def analytic_phonon_from_model(m):
    var_q, var_p = analytic_variances(m)
    nf = 0.5 * (var_q + var_p - 1.0)
    if nf < -1e-9:
        raise NumericsError(f"analytic phonon number negative ({nf:.3e})")
    return float(max(nf, 0.0))


def phonon_number_analytic(ss, params):
    """Closed-form steady-state phonon number at a classical steady state."""
    m = LinearModel.from_steady_state(ss, params)
    d = dynamics.drift_from_model(m)
    if not d.stable:
        raise StabilityError("analytic phonon number requires stability",
                             margin=d.stability_margin)
    return analytic_phonon_from_model(m)


def phonon_number(params, route="numeric"):
    """Convenience: solve the steady state of ``params`` and return n_f."""
    ss = solve_steady_state(params)
    if route == "numeric":
        cov = dynamics.solve_lyapunov(dynamics.build_drift(ss, params))
        return phonon_number_numeric(cov)
    return phonon_number_analytic(ss, params)
