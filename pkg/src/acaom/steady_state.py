"""Classical steady state of the driven two-cavity optomechanical system.

The mean-field equations

    <a_c> = -i (Omega_L + J <a_a>) / (kappa_c + i Delta)
    <a_a> = -i (Omega_R + J <a_c>) / (kappa_a + i Delta_a)
    <q>   = g0 |<a_c>|^2 / omega_m,     <p> = 0,
    Delta = Delta_c - g0 <q>

close on a single real unknown.  Eliminating the field amplitudes gives a
real cubic in u = g0 <q> (units of omega_m):

    u [kappa_eff^2 + (Delta_t - u)^2] = g0^2 |n|^2,

with chi_a = 1/(kappa_a + i Delta_a), kappa_eff = kappa_c + J^2 Re chi_a,
Delta_t = Delta_c - J^2 Delta_a / |kappa_a + i Delta_a|^2 and
n = i Omega_L + J Omega_R chi_a.  One or three real roots exist; the drive
power window with three roots is the bistable regime.

In the pinned-detuning mode the cubic is bypassed entirely: Delta is given,
the field amplitudes follow from the linear two-cavity steady state, and
the bare detuning Delta_c = Delta + g0 <q> is backed out.
"""

from dataclasses import dataclass

import numpy as np

from . import dynamics
from .errors import NumericsError, ParameterError
from .params import derive_dimensionless


@dataclass(frozen=True)
class ClassicalSteadyState:
    """Self-consistent mean values, with the global phase gauge applied.

    alpha_c / alpha_a are the (dimensionless) intracavity amplitudes,
    q_ss the dimensionless displacement, x_ss the displacement in metres.
    delta_eff and coupling_g are in rad/s.  With the gauge applied,
    coupling_g is real and non-negative.
    """

    alpha_c: complex
    alpha_a: complex
    q_ss: float
    x_ss: float
    delta_eff: float
    coupling_g: complex
    delta_c: float           # bare detuning (given or backed out), rad/s
    stable: bool
    residual: float          # max relative residual of the fixed point
    gauge_phase: float       # phase removed from alpha_c (0 if not applied)


def cavity_amplitudes(sp, delta):
    """Linear two-cavity amplitudes at fixed effective detuning (scaled)."""
    chi_a = 1.0 / (sp.kappa_a + 1j * sp.delta_a)
    denom = sp.kappa_c + 1j * delta + sp.j ** 2 * chi_a
    alpha_c = -(1j * sp.drive_left + sp.j * sp.drive_right * chi_a) / denom
    alpha_a = -1j * (sp.drive_right + sp.j * alpha_c) / (sp.kappa_a
                                                         + 1j * sp.delta_a)
    return alpha_c, alpha_a


def _cubic_coeffs(sp):
    """Monic cubic coefficients for u = g0 <q> plus helper constants."""
    abs2 = sp.kappa_a ** 2 + sp.delta_a ** 2
    chi_a = (sp.kappa_a - 1j * sp.delta_a) / abs2
    kappa_eff = sp.kappa_c + sp.j ** 2 * chi_a.real
    delta_t = sp.delta_c - sp.j ** 2 * sp.delta_a / abs2
    n = 1j * sp.drive_left + sp.j * sp.drive_right * chi_a
    rhs = sp.g0 ** 2 * abs(n) ** 2
    coeffs = np.array([1.0, -2.0 * delta_t,
                       delta_t ** 2 + kappa_eff ** 2, -rhs])
    return coeffs, kappa_eff, delta_t, rhs


def cubic_real_roots(sp, polish_steps=1):
    """All real roots of the elimination cubic, ascending.

    Roots come from the companion-matrix eigenvalues (np.roots) to avoid
    Cardano branch-cut issues, then each is polished by a Newton step.
    """
    coeffs, _, _, _ = _cubic_coeffs(sp)
    roots = np.roots(coeffs)
    scale = max(np.max(np.abs(roots)), 1.0)
    real = roots[np.abs(roots.imag) <= 1e-9 * scale].real
    if real.size == 0:
        raise NumericsError("cubic returned no real root; numerics bug")
    poly = np.polynomial.Polynomial(coeffs[::-1])
    dpoly = poly.deriv()
    for _ in range(polish_steps):
        slope = dpoly(real)
        safe = slope != 0
        real = np.where(safe, real - poly(real) / np.where(safe, slope, 1.0),
                        real)
    return np.sort(real)


def _fixed_point_residual(sp, alpha_c, alpha_a, q_ss, delta):
    r1 = abs(-(sp.kappa_c + 1j * delta) * alpha_c - 1j * sp.drive_left
             - 1j * sp.j * alpha_a)
    r2 = abs(-(sp.kappa_a + 1j * sp.delta_a) * alpha_a - 1j * sp.drive_right
             - 1j * sp.j * alpha_c)
    r3 = abs(q_ss - sp.g0 * abs(alpha_c) ** 2)
    s1 = max(1.0, sp.drive_left + sp.j * abs(alpha_a))
    s2 = max(1.0, sp.drive_right + sp.j * abs(alpha_c))
    s3 = max(1.0, abs(q_ss))
    return float(max(r1 / s1, r2 / s2, r3 / s3))


def solve_steady_state(params, apply_gauge=True, root_policy="continuation"):
    """Self-consistent classical steady state of ``params``.

    With ``delta_pinned`` set the effective detuning is taken as given.
    Otherwise the elimination cubic is solved and a root selected by
    ``root_policy``:

    * ``"continuation"`` (default): the branch continuously connected to
      <q>_ss = 0 at zero drive, i.e. the smallest real root;
    * ``"largest"``: the upper branch.

    A dynamically unstable selection is flagged (``stable=False``), never
    silently returned.
    """
    sp = derive_dimensionless(params)
    if sp.pinned:
        delta = sp.delta_pinned
        alpha_c, _ = cavity_amplitudes(sp, delta)
        u = sp.g0 ** 2 * abs(alpha_c) ** 2
        delta_c = delta + u
    else:
        roots = cubic_real_roots(sp)
        if root_policy == "continuation":
            u = float(roots[0])
        elif root_policy == "largest":
            u = float(roots[-1])
        else:
            raise ParameterError(f"unknown root policy {root_policy!r}")
        delta = sp.delta_c - u
        delta_c = sp.delta_c

    alpha_c, alpha_a = cavity_amplitudes(sp, delta)
    q_ss = sp.g0 * abs(alpha_c) ** 2
    # residual belongs to the solve; the gauge below rotates the drive
    # phase convention and is applied afterwards
    residual = _fixed_point_residual(sp, alpha_c, alpha_a, q_ss, delta)
    phase = 0.0
    if apply_gauge:
        phase = float(np.angle(alpha_c))
        rot = np.exp(-1j * phase)
        alpha_c *= rot
        alpha_a *= rot
    g_scaled = sp.g0 * alpha_c
    if apply_gauge:
        g_scaled = complex(abs(g_scaled))

    w = params.omega_m
    ss = ClassicalSteadyState(
        alpha_c=complex(alpha_c), alpha_a=complex(alpha_a),
        q_ss=float(q_ss), x_ss=float(q_ss * params.x_scale),
        delta_eff=float(delta * w), coupling_g=complex(g_scaled * w),
        delta_c=float(delta_c * w), stable=True, residual=residual,
        gauge_phase=phase)
    stable, _ = dynamics.check_stability(
        dynamics.build_drift(ss, params, dynamics.Basis.QUADRATURE))
    if not stable:
        ss = ClassicalSteadyState(
            alpha_c=ss.alpha_c, alpha_a=ss.alpha_a, q_ss=ss.q_ss,
            x_ss=ss.x_ss, delta_eff=ss.delta_eff, coupling_g=ss.coupling_g,
            delta_c=ss.delta_c, stable=False, residual=ss.residual,
            gauge_phase=ss.gauge_phase)
    return ss


@dataclass(frozen=True)
class BistabilityPoint:
    power_left: float        # W
    q_roots: tuple           # dimensionless <q>_ss, ascending
    x_roots: tuple           # metres
    stable: tuple            # bool per root


def bistability_scan(params, power_grid):
    """All real steady-state branches over a drive-power grid.

    Each root is flagged stable/unstable from the eigenvalues of the full
    linearized drift evaluated on that branch.  Requires delta_c mode.
    """
    power_grid = np.asarray(power_grid, dtype=float)
    if power_grid.ndim != 1 or power_grid.size == 0:
        raise ParameterError("power grid must be a non-empty 1-D sequence")
    if np.any(power_grid < 0):
        raise ParameterError("power grid entries must be >= 0")
    if np.any(np.diff(power_grid) <= 0):
        raise ParameterError("power grid must be strictly increasing")
    if params.delta_pinned is not None:
        raise ParameterError(
            "bistability_scan needs delta_c mode (cubic); got pinned delta")

    out = []
    for p in power_grid:
        pp = params.with_(power_left=float(p))
        sp = derive_dimensionless(pp)
        roots = cubic_real_roots(sp)
        q_roots, x_roots, flags = [], [], []
        for u in roots:
            delta = sp.delta_c - u
            alpha_c, alpha_a = cavity_amplitudes(sp, delta)
            q = sp.g0 * abs(alpha_c) ** 2
            g = sp.g0 * abs(alpha_c)
            model = dynamics.LinearModel(
                delta=delta, delta_a=sp.delta_a, kappa_c=sp.kappa_c,
                kappa_a=sp.kappa_a, gamma_m=sp.gamma_m, j=sp.j,
                g=complex(g), nbar=sp.nbar)
            stable, _ = dynamics.check_stability(
                dynamics.drift_from_model(model))
            q_roots.append(float(q))
            x_roots.append(float(q * pp.x_scale))
            flags.append(bool(stable))
        out.append(BistabilityPoint(power_left=float(p),
                                    q_roots=tuple(q_roots),
                                    x_roots=tuple(x_roots),
                                    stable=tuple(flags)))
    return out
