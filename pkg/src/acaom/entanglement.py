"""Gaussian entanglement measures on the steady-state covariance matrix.

The 6x6 quadrature covariance (vacuum variance 1/2 convention) fully
describes the Gaussian steady state of the three modes (cooling cavity,
auxiliary cavity, mechanics).  Bipartite entanglement of a mode pair is the
logarithmic negativity

    E_N = max[0, -ln(2 zeta-)],
    zeta- = 2^(-1/2) sqrt(Sigma - sqrt(Sigma^2 - 4 det V')),
    Sigma = det A + det B - 2 det C,

where A, B, C are the 2x2 blocks of the reduced 4x4 covariance V'.  The
one-versus-two negativity uses the minimum symplectic eigenvalue of the
full covariance partially transposed on the single mode (momentum sign
flip).  Contangles are squared negativities; the minimum residual contangle

    E_tau^{r|s|t} = min over pivots r of [E_tau^{r|(st)} - E_tau^{r|s}
                                          - E_tau^{r|t}]

is strictly positive only for genuine tripartite entanglement, and each
pivot term is non-negative by entanglement monogamy (checked).
"""

from dataclasses import dataclass

import numpy as np

from . import dynamics
from .dynamics import Basis, LinearModel
from .errors import CovarianceError, NumericsError
from .params import derive_dimensionless
from .steady_state import solve_steady_state

MODE_LABELS = ("cooling_cavity", "auxiliary_cavity", "mechanics")
_PAIR_INDEX = {"cooling_cavity": 0, "auxiliary_cavity": 1, "mechanics": 2}


@dataclass(frozen=True)
class BipartiteCM:
    """2x2 block decomposition of a reduced two-mode covariance."""

    a_block: np.ndarray
    b_block: np.ndarray
    c_block: np.ndarray
    pair: tuple

    @classmethod
    def from_full(cls, cov, i, j):
        """Exact sub-matrix extraction of modes (i, j) from a 6x6 CM."""
        v = _as_quadrature(cov)
        idx = [2 * i, 2 * i + 1, 2 * j, 2 * j + 1]
        sub = v[np.ix_(idx, idx)]
        return cls(a_block=sub[:2, :2].copy(), b_block=sub[2:, 2:].copy(),
                   c_block=sub[:2, 2:].copy(),
                   pair=(MODE_LABELS[i], MODE_LABELS[j]))

    @property
    def reduced(self):
        return np.block([[self.a_block, self.c_block],
                         [self.c_block.T, self.b_block]])


@dataclass(frozen=True)
class EntanglementReport:
    e_ab: float          # auxiliary cavity -- mechanics
    e_cb: float          # cooling cavity -- mechanics
    e_ac: float          # auxiliary cavity -- cooling cavity
    tripartite: float    # minimum residual contangle
    monogamy_ok: bool


def _as_quadrature(cov):
    if isinstance(cov, dynamics.CovarianceMatrix):
        if cov.basis is not Basis.QUADRATURE:
            raise CovarianceError("entanglement measures need the "
                                  "quadrature-basis covariance")
        return cov.v
    return np.asarray(cov, dtype=float)


def log_negativity_1v1(cm, clamp=True):
    """Logarithmic negativity of a two-mode reduced covariance.

    With ``clamp=False`` the raw -ln(2 zeta-) is returned (negative for
    separable states), which is what threshold interpolation wants.
    """
    det_a = np.linalg.det(cm.a_block)
    det_b = np.linalg.det(cm.b_block)
    det_c = np.linalg.det(cm.c_block)
    det_v = np.linalg.det(cm.reduced)
    sigma = det_a + det_b - 2.0 * det_c
    disc = sigma ** 2 - 4.0 * det_v
    if disc < -1e-9 * max(sigma ** 2, 1.0):
        raise CovarianceError(f"non-physical covariance: Sigma^2 - 4 det V "
                              f"= {disc:.3e} < 0")
    zeta2 = 0.5 * (sigma - np.sqrt(max(disc, 0.0)))
    if zeta2 <= 0.0:
        raise CovarianceError(f"non-physical covariance: zeta-^2 = "
                              f"{zeta2:.3e} <= 0")
    raw = -np.log(2.0 * np.sqrt(zeta2))
    return float(max(0.0, raw)) if clamp else float(raw)


def log_negativity_pair(cov, i, j, clamp=True):
    return log_negativity_1v1(BipartiteCM.from_full(cov, i, j), clamp=clamp)


def symplectic_eigenvalues(v):
    """Symplectic spectrum of a (2n x 2n) covariance: |eig(i Omega V)|."""
    omega = dynamics.symplectic_form(v.shape[0] // 2)
    try:
        ev = np.linalg.eigvals(1j * omega @ v)
    except np.linalg.LinAlgError as exc:
        raise NumericsError(f"symplectic spectrum failed: {exc}") from exc
    nus = np.sort(np.abs(ev))
    return nus[::2]  # each value appears twice (+-)


def log_negativity_1v2(cov, single_mode, clamp=True):
    """Negativity of one mode against the remaining two.

    ``single_mode`` is a mode index (0..2) or one of the MODE_LABELS.
    Partial transposition is the momentum sign flip on that mode.
    """
    if isinstance(single_mode, str):
        single_mode = _PAIR_INDEX[single_mode]
    v = _as_quadrature(cov)
    flip = np.ones(6)
    flip[2 * single_mode + 1] = -1.0
    v_pt = v * np.outer(flip, flip)
    nu_min = float(np.min(symplectic_eigenvalues(v_pt)))
    if nu_min <= 0.0:
        raise CovarianceError("vanishing symplectic eigenvalue after "
                              "partial transpose")
    raw = -np.log(2.0 * nu_min)
    return float(max(0.0, raw)) if clamp else float(raw)


def contangle_1v1(cov, i, j):
    return log_negativity_pair(cov, i, j) ** 2


def contangle_1v2(cov, single_mode):
    return log_negativity_1v2(cov, single_mode) ** 2


def residual_contangle(cov, slack=1e-9):
    """Minimum residual contangle over the three single-mode pivots.

    Returns (tripartite, per_pivot, monogamy_ok).  The tripartite measure
    is the pivot minimum floored at zero; a negative minimum certifies no
    genuine tripartite entanglement.  monogamy_ok reports whether all
    pivots respect the inequality within the slack.  The squared-negativity
    contangle can violate monogamy by a small amount on mixed states even
    for perfectly physical covariances, so a violation alone is only
    flagged; an *unphysical* covariance (uncertainty relation broken) is an
    integrity error.
    """
    per_pivot = {}
    for r in range(3):
        s, t = (x for x in range(3) if x != r)
        res = (contangle_1v2(cov, r) - contangle_1v1(cov, r, s)
               - contangle_1v1(cov, r, t))
        per_pivot[MODE_LABELS[r]] = res
    worst = min(per_pivot.values())
    monogamy_ok = worst >= -slack
    if not monogamy_ok:
        v = _as_quadrature(cov)
        if dynamics.uncertainty_min_eig(v) < -1e-9:
            raise CovarianceError(
                f"monogamy violated by {worst:.3e} on an unphysical "
                "covariance; integrity error")
    tripartite = max(0.0, worst)
    return tripartite, per_pivot, monogamy_ok


def entanglement_report(cov):
    """All bipartite negativities plus the tripartite measure."""
    e_cb = log_negativity_pair(cov, 0, 2)
    e_ab = log_negativity_pair(cov, 1, 2)
    e_ac = log_negativity_pair(cov, 1, 0)
    tri, _, ok = residual_contangle(cov)
    return EntanglementReport(e_ab=e_ab, e_cb=e_cb, e_ac=e_ac,
                              tripartite=tri, monogamy_ok=ok)


def covariance_for(params):
    ss = solve_steady_state(params)
    return dynamics.solve_lyapunov(
        dynamics.build_drift(ss, params, Basis.QUADRATURE))


@dataclass(frozen=True)
class RobustnessResult:
    nbar_grid: np.ndarray
    e_cb: np.ndarray
    e_ab: np.ndarray
    e_ac: np.ndarray
    thresholds: dict         # pair label -> nbar where E_N first reaches 0
    grid_resolution: float   # spacing attached to the threshold estimates


def robustness_sweep(params, nbar_grid):
    """Bipartite negativities versus mechanical bath occupancy.

    Thresholds are located by linear interpolation of the unclamped
    -ln(2 zeta-) between the grid points bracketing its zero crossing; no
    extrapolation beyond the grid (open thresholds are reported as inf).
    """
    nbar_grid = np.asarray(nbar_grid, dtype=float)
    if nbar_grid.ndim != 1 or nbar_grid.size < 2:
        raise ValueError("nbar grid must be 1-D with at least two points")
    if np.any(np.diff(nbar_grid) <= 0):
        raise ValueError("nbar grid must be strictly increasing")

    sp = derive_dimensionless(params)
    ss = solve_steady_state(params)
    base = LinearModel.from_steady_state(ss, params)
    raw = {key: np.empty_like(nbar_grid) for key in ("cb", "ab", "ac")}
    for k, nb in enumerate(nbar_grid):
        m = LinearModel(delta=base.delta, delta_a=sp.delta_a,
                        kappa_c=sp.kappa_c, kappa_a=sp.kappa_a,
                        gamma_m=sp.gamma_m, j=sp.j, g=base.g, nbar=float(nb))
        cov = dynamics.solve_lyapunov(dynamics.drift_from_model(m))
        raw["cb"][k] = log_negativity_pair(cov, 0, 2, clamp=False)
        raw["ab"][k] = log_negativity_pair(cov, 1, 2, clamp=False)
        raw["ac"][k] = log_negativity_pair(cov, 1, 0, clamp=False)

    thresholds = {}
    for key, label in (("cb", "cooling_cavity|mechanics"),
                       ("ab", "auxiliary_cavity|mechanics"),
                       ("ac", "auxiliary_cavity|cooling_cavity")):
        thresholds[label] = _zero_crossing(nbar_grid, raw[key])
    res = float(np.max(np.diff(nbar_grid)))
    return RobustnessResult(
        nbar_grid=nbar_grid,
        e_cb=np.maximum(raw["cb"], 0.0), e_ab=np.maximum(raw["ab"], 0.0),
        e_ac=np.maximum(raw["ac"], 0.0),
        thresholds=thresholds, grid_resolution=res)


def _zero_crossing(x, y):
    """First downward zero crossing of y(x), linearly interpolated."""
    if y[0] <= 0.0:
        return float(x[0])
    for k in range(1, len(x)):
        if y[k] <= 0.0:
            x0, x1, y0, y1 = x[k - 1], x[k], y[k - 1], y[k]
            return float(x0 + (x1 - x0) * y0 / (y0 - y1))
    return float("inf")
