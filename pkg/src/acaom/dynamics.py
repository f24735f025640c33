"""Linearized fluctuation dynamics: drift/noise matrices, stability, Lyapunov.

The linearized quantum Langevin equations around the classical steady state,

    d(dq)/dt  =  omega_m dp
    d(dp)/dt  = -omega_m dq - gamma_m dp + G* da_c + G da_c^dag + xi
    d(da_c)/dt = -(kappa_c + i Delta) da_c + i G dq - i J da_a + sqrt(2 kappa_c) a_in
    d(da_a)/dt = -(kappa_a + i Delta_a) da_a - i J da_c + sqrt(2 kappa_a) a_in',

are assembled in two equivalent bases:

* quadrature basis u = (dX_c, dY_c, dX_a, dY_a, dq, dp), real drift matrix,
  diagonal symmetrized noise Q = diag{kappa_c, kappa_c, kappa_a, kappa_a,
  0, gamma_m (2 nbar + 1)};
* complex-mode basis u = (da_c, db, da_a, da_c^dag, db^dag, da_a^dag) with
  b = (q + i p)/sqrt(2).

The complex-mode matrix is the exact image of the quadrature system under
the linear basis change (no rotating-wave approximation on the mechanical
damping), so both routes give identical covariances to machine precision.
Written out, the mechanical row reads

    d(db)/dt = -(gamma_m/2 + i omega_m) db + (gamma_m/2) db^dag
               + i (G*/sqrt2) da_c + i (G/sqrt2) da_c^dag + i xi/sqrt2,

i.e. the Brownian momentum damping splits into a gamma_m/2 decay plus a
gamma_m/2 coupling to db^dag, and the thermal noise acquires correlated
entries on both conjugate rows.

Everything here is dimensionless (rates in units of omega_m).
"""

import enum
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NumericsError, StabilityError
from .params import derive_dimensionless

STABILITY_MARGIN_TOL = -1e-10   # margin must be below this to count as stable


class Basis(enum.Enum):
    QUADRATURE = "quadrature"
    COMPLEX_MODE = "complex_mode"


@dataclass(frozen=True)
class LinearModel:
    """Dimensionless inputs of the linearized dynamics (omega_m = 1)."""

    delta: float       # effective cooling-cavity detuning
    delta_a: float
    kappa_c: float
    kappa_a: float
    gamma_m: float
    j: float
    g: complex         # effective optomechanical coupling G = g0 <a_c>_ss
    nbar: float

    @classmethod
    def from_steady_state(cls, ss, params):
        sp = derive_dimensionless(params)
        w = params.omega_m
        return cls(delta=ss.delta_eff / w, delta_a=sp.delta_a,
                   kappa_c=sp.kappa_c, kappa_a=sp.kappa_a,
                   gamma_m=sp.gamma_m, j=sp.j,
                   g=complex(ss.coupling_g) / w, nbar=sp.nbar)


@dataclass(frozen=True)
class DriftModel:
    basis: Basis
    drift: np.ndarray        # 6x6, real (quadrature) or complex (complex-mode)
    noise_corr: np.ndarray   # 6x6 noise correlation matrix
    stable: bool
    stability_margin: float  # max Re eigenvalue, units of omega_m
    model: LinearModel


@dataclass(frozen=True)
class CovarianceMatrix:
    v: np.ndarray
    basis: Basis
    residual: float          # ||A V + V A^T + Q|| / ||Q||


def quadrature_drift(m):
    """Real 6x6 drift in the (dX_c, dY_c, dX_a, dY_a, dq, dp) basis.

    For complex G the q column of the X_c row and the Y_c column of the
    p row pick up the imaginary part; with the usual gauge (G real) those
    entries vanish.
    """
    gr, gi = np.real(m.g), np.imag(m.g)
    s2 = np.sqrt(2.0)
    return np.array([
        [-m.kappa_c, m.delta, 0.0, m.j, -s2 * gi, 0.0],
        [-m.delta, -m.kappa_c, -m.j, 0.0, s2 * gr, 0.0],
        [0.0, m.j, -m.kappa_a, m.delta_a, 0.0, 0.0],
        [-m.j, 0.0, -m.delta_a, -m.kappa_a, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        [s2 * gr, s2 * gi, 0.0, 0.0, -1.0, -m.gamma_m],
    ])


def quadrature_noise(m):
    """Symmetrized input-noise matrix Q for the quadrature basis.

    Cavity baths are vacuum; the mechanical bath enters through the
    white-noise Brownian correlator <xi xi> = gamma_m (2 nbar + 1) delta.
    """
    return np.diag([m.kappa_c, m.kappa_c, m.kappa_a, m.kappa_a,
                    0.0, m.gamma_m * (2.0 * m.nbar + 1.0)])


def complexmode_drift(m):
    """Complex 6x6 drift in the (da_c, db, da_a, h.c.) basis.

    Exact rewrite of the quadrature dynamics; rows 4-6 are the conjugate
    images of rows 1-3.
    """
    gt = m.g / np.sqrt(2.0)
    gtc = np.conj(gt)
    kbc = m.kappa_c + 1j * m.delta
    kba = m.kappa_a + 1j * m.delta_a
    gh = 0.5 * m.gamma_m
    return np.array([
        [-kbc, 1j * gt, -1j * m.j, 0.0, 1j * gt, 0.0],
        [1j * gtc, -(gh + 1j), 0.0, 1j * gt, gh, 0.0],
        [-1j * m.j, 0.0, -kba, 0.0, 0.0, 0.0],
        [0.0, -1j * gtc, 0.0, -np.conj(kbc), -1j * gtc, 1j * m.j],
        [-1j * gtc, gh, 0.0, -1j * gt, -(gh - 1j), 0.0],
        [0.0, 0.0, 0.0, 1j * m.j, 0.0, -np.conj(kba)],
    ], dtype=complex)


def complexmode_noise(m):
    """Noise correlation matrix <N_k N_l> in the complex-mode basis.

    Image of the quadrature noise under the same basis change: vacuum
    cavity inputs give the 2*kappa entries on the (a, a^dag) slots, the
    Brownian force spreads gamma_m (2 nbar + 1)/2 over the b rows with
    alternating signs.
    """
    gbar = m.gamma_m * (2.0 * m.nbar + 1.0)
    c = np.zeros((6, 6), dtype=complex)
    c[0, 3] = 2.0 * m.kappa_c
    c[2, 5] = 2.0 * m.kappa_a
    c[1, 1] = -0.5 * gbar
    c[1, 4] = 0.5 * gbar
    c[4, 1] = 0.5 * gbar
    c[4, 4] = -0.5 * gbar
    return c


def drift_from_model(model, basis=Basis.QUADRATURE):
    """Assemble a DriftModel (drift + noise + stability verdict)."""
    if not np.isfinite(model.g):
        raise NumericsError("effective coupling G is not finite")
    if basis is Basis.QUADRATURE:
        a = quadrature_drift(model)
        q = quadrature_noise(model)
    else:
        a = complexmode_drift(model)
        q = complexmode_noise(model)
    margin = _stability_margin(a)
    return DriftModel(basis=basis, drift=a, noise_corr=q,
                      stable=margin < STABILITY_MARGIN_TOL,
                      stability_margin=margin, model=model)


def build_drift(ss, params, basis=Basis.QUADRATURE):
    """Drift/noise model at a classical steady state ``ss``."""
    return drift_from_model(LinearModel.from_steady_state(ss, params), basis)


def _stability_margin(a):
    try:
        ev = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise NumericsError(f"eigenvalue solver failed: {exc}") from exc
    return float(np.max(ev.real))


def check_stability(d):
    """Return (stable, margin) for a DriftModel or a bare matrix."""
    a = d.drift if isinstance(d, DriftModel) else np.asarray(d)
    margin = _stability_margin(a)
    return margin < STABILITY_MARGIN_TOL, margin


def characteristic_coeffs(a):
    """Real coefficients (descending powers) of det(s I - A)."""
    coeffs = np.poly(np.asarray(a))
    return np.real_if_close(coeffs, tol=1e6).astype(float)


def routh_hurwitz_stable(coeffs):
    """Routh-Hurwitz tableau test on a real polynomial (descending coeffs).

    Returns True iff all roots have negative real parts.  Implemented
    independently of any eigenvalue computation so it can serve as a
    cross-check of the spectral stability verdict.
    """
    c = np.asarray(coeffs, dtype=float)
    c = np.trim_zeros(c, "f")
    if c.size == 0:
        raise NumericsError("empty polynomial")
    if c[0] < 0:
        c = -c
    n = c.size - 1
    if n == 0:
        return True
    # all coefficients strictly positive is necessary for Hurwitz stability
    if np.any(c <= 0):
        return False
    width = (n // 2) + 1
    rows = np.zeros((n + 1, width + 1))
    rows[0, :c[0::2].size] = c[0::2]
    rows[1, :c[1::2].size] = c[1::2]
    for i in range(2, n + 1):
        pivot = rows[i - 1, 0]
        if pivot == 0.0:
            pivot = 1e-300  # epsilon substitution for degenerate tableau rows
        for jcol in range(width):
            rows[i, jcol] = (pivot * rows[i - 2, jcol + 1]
                             - rows[i - 2, 0] * rows[i - 1, jcol + 1]) / pivot
        if rows[i, 0] == 0.0 and np.all(rows[i] == 0.0):
            return False  # auxiliary-polynomial case: roots on the axis
    first_col = rows[: n + 1, 0]
    return bool(np.all(first_col > 0))


def solve_lyapunov(d):
    """Steady-state covariance from A V + V A^T = -Q.

    Solved as the 36x36 Kronecker linear system; at this fixed size a dense
    direct solve is bit-stable and fast.  Refuses unstable drift.
    """
    if not d.stable:
        raise StabilityError(
            f"drift is not stable (margin {d.stability_margin:.3e}); "
            "no steady-state covariance exists", margin=d.stability_margin)
    a = d.drift
    q = 0.5 * (d.noise_corr + d.noise_corr.T)
    eye = np.eye(6)
    k = np.kron(eye, a) + np.kron(a, eye)
    cond = np.linalg.cond(k)
    if cond > 1e12:
        warnings.warn(f"Lyapunov system ill-conditioned (cond ~ {cond:.2e})",
                      RuntimeWarning, stacklevel=2)
    try:
        v = np.linalg.solve(k, -q.reshape(-1)).reshape(6, 6)
    except np.linalg.LinAlgError as exc:
        raise NumericsError(f"Lyapunov solve failed: {exc}") from exc
    v = 0.5 * (v + v.T)
    if d.basis is Basis.QUADRATURE:
        v = v.real
    res = np.linalg.norm(a @ v + v @ a.T + q) / np.linalg.norm(q)
    return CovarianceMatrix(v=v, basis=d.basis, residual=float(res))


def symplectic_form(n_modes=3):
    """Block-diagonal symplectic form for (x1, p1, ..., xn, pn) ordering."""
    j2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return np.kron(np.eye(n_modes), j2)


def uncertainty_min_eig(v):
    """Minimum eigenvalue of V + (i/2) Omega; >= 0 for a physical state."""
    omega = symplectic_form(v.shape[0] // 2)
    h = np.asarray(v, dtype=complex) + 0.5j * omega
    return float(np.min(np.linalg.eigvalsh(h)))
