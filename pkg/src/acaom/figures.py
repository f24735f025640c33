"""Sweep orchestration and figure-data emission.

``run_sweep`` evaluates a configured list of output quantities over a 1-D
or 2-D parameter grid, one row per grid point; dynamically unstable points
become flagged rows, never silent gaps.  ``run_figure`` reproduces the
named data sets of the reference scenarios at documented default
resolutions (201 points per 1-D axis, 101 per 2-D axis).
"""

import multiprocessing
from dataclasses import replace

import numpy as np

from . import cooling, dynamics, entanglement
from .config import RATE_KEYS
from .dynamics import Basis, LinearModel
from .errors import ConfigError, NumericsError, StabilityError
from .params import derive_dimensionless, fig1_params, fig10_params
from .steady_state import bistability_scan, solve_steady_state
from .tables import ResultTable

DEFAULT_POINTS_1D = 201
DEFAULT_POINTS_2D = 101


class _Point:
    """Lazy per-point evaluation pipeline (steady state -> drift -> cov)."""

    def __init__(self, params):
        self.params = params
        self._ss = None
        self._cov = None

    @property
    def ss(self):
        if self._ss is None:
            self._ss = solve_steady_state(self.params)
        return self._ss

    @property
    def model(self):
        return LinearModel.from_steady_state(self.ss, self.params)

    @property
    def cov(self):
        if self._cov is None:
            self._cov = dynamics.solve_lyapunov(
                dynamics.build_drift(self.ss, self.params, Basis.QUADRATURE))
        return self._cov

    def require_stable(self):
        if not self.ss.stable:
            raise StabilityError("working point unstable")


def _q_nf_numeric(pt):
    pt.require_stable()
    return cooling.phonon_number_numeric(pt.cov)


def _q_nf_analytic(pt):
    return cooling.phonon_number_analytic(pt.ss, pt.params)


def _q_gamma_cool(pt):
    return float(cooling.net_cooling_rate(pt.model, 1.0))


def _q_gamma_eff(pt):
    return pt.model.gamma_m + _q_gamma_cool(pt)


def _q_omega_eff(pt):
    return float(cooling.effective_frequency(pt.model, 1.0))


def _q_lambda(pt):
    return cooling.amplification_factor(
        pt.params, pt.params.tunneling_j, pt.params.power_right)


def _q_chi(pt):
    return cooling.improvement_rate(
        pt.params, pt.params.tunneling_j, pt.params.power_right)


def _q_e_cb(pt):
    pt.require_stable()
    return entanglement.log_negativity_pair(pt.cov, 0, 2)


def _q_e_ab(pt):
    pt.require_stable()
    return entanglement.log_negativity_pair(pt.cov, 1, 2)


def _q_e_ac(pt):
    pt.require_stable()
    return entanglement.log_negativity_pair(pt.cov, 1, 0)


def _q_tripartite(pt):
    pt.require_stable()
    return entanglement.residual_contangle(pt.cov)[0]


def _q_margin(pt):
    d = dynamics.build_drift(pt.ss, pt.params)
    return d.stability_margin


def _q_coupling(pt):
    return abs(pt.ss.coupling_g) / pt.params.omega_m


QUANTITIES = {
    "nf_numeric": ("", _q_nf_numeric),
    "nf_analytic": ("", _q_nf_analytic),
    "gamma_cool": ("omega_m", _q_gamma_cool),
    "gamma_eff": ("omega_m", _q_gamma_eff),
    "omega_eff": ("omega_m", _q_omega_eff),
    "lambda_amp": ("", _q_lambda),
    "chi_improve": ("", _q_chi),
    "e_cb": ("", _q_e_cb),
    "e_ab": ("", _q_e_ab),
    "e_ac": ("", _q_e_ac),
    "tripartite": ("", _q_tripartite),
    "stability_margin": ("omega_m", _q_margin),
    "coupling_g": ("omega_m", _q_coupling),
}


def axis_values(axis):
    if axis.scale == "log":
        return np.geomspace(axis.start, axis.stop, axis.points)
    return np.linspace(axis.start, axis.stop, axis.points)


def _apply_axis(params, units, name, value):
    v = float(value)
    if units == "omega_m" and name in RATE_KEYS:
        v *= params.omega_m
    if name == "delta_pinned":
        return replace(params, delta_pinned=v, delta_c=None)
    if name == "delta_c":
        return replace(params, delta_c=v, delta_pinned=None)
    return params.with_(**{name: v})


def _eval_point(task):
    params, units, overrides, outputs = task
    for name, value in overrides:
        params = _apply_axis(params, units, name, value)
    pt = _Point(params)
    values, flag = [], ""
    for out in outputs:
        try:
            values.append(float(QUANTITIES[out][1](pt)))
        except (StabilityError, NumericsError) as exc:
            values.append(float("nan"))
            flag = "unstable" if isinstance(exc, StabilityError) else "numeric"
    return values, flag


def run_sweep(cfg):
    """Evaluate cfg.outputs over cfg.sweep; returns a ResultTable.

    Points are dispatched to a worker pool when cfg.jobs > 1; results are
    gathered in grid order, so parallel output is byte-identical to serial.
    """
    if not cfg.sweep:
        raise ConfigError("run_sweep needs at least one sweep axis")
    if not cfg.outputs:
        raise ConfigError("run_sweep needs a non-empty outputs list")
    for out in cfg.outputs:
        if out not in QUANTITIES:
            raise ConfigError(f"unknown output {out!r} "
                              f"(known: {', '.join(sorted(QUANTITIES))})")

    grids = [axis_values(ax) for ax in cfg.sweep]
    if len(grids) == 1:
        points = [((cfg.sweep[0].param, v),) for v in grids[0]]
    else:
        points = [((cfg.sweep[0].param, v0), (cfg.sweep[1].param, v1))
                  for v0 in grids[0] for v1 in grids[1]]
    tasks = [(cfg.params, cfg.units, ovr, cfg.outputs) for ovr in points]

    if cfg.jobs > 1:
        with multiprocessing.Pool(cfg.jobs) as pool:
            results = pool.map(_eval_point, tasks, chunksize=32)
    else:
        results = [_eval_point(t) for t in tasks]

    columns = [(ax.param, "omega_m" if (cfg.units == "omega_m"
                                        and ax.param in RATE_KEYS) else "SI")
               for ax in cfg.sweep]
    columns += [(out, QUANTITIES[out][0]) for out in cfg.outputs]
    table = ResultTable(name=f"sweep_{cfg.name}", columns=columns,
                        meta={"config_hash": cfg.hash,
                              "axes": " x ".join(ax.param for ax in cfg.sweep)})
    n_ok = 0
    for ovr, (values, flag) in zip(points, results):
        row = [v for _, v in ovr] + values
        table.add_row(row, flag=flag)
        n_ok += 0 if flag else 1
    if n_ok == 0:
        raise NumericsError("sweep produced no stable points; empty result")
    return table


# ---------------------------------------------------------------------------
# figure registry
# ---------------------------------------------------------------------------


def _assisted(params, j=0.15, p_r=50e-3):
    return params.with_(tunneling_j=j * params.omega_m, power_right=p_r)


def _nf_pair(params):
    """(analytic, numeric) phonon numbers at a stable steady state."""
    ss = solve_steady_state(params)
    cov = dynamics.solve_lyapunov(dynamics.build_drift(ss, params))
    return (cooling.phonon_number_analytic(ss, params),
            cooling.phonon_number_numeric(cov))


def _fig1bc(base):
    grid = np.linspace(-2.0, 2.0, DEFAULT_POINTS_1D)
    tables = []
    un = solve_steady_state(base)
    asd_params = _assisted(base)
    asd = solve_steady_state(asd_params)
    r_un = cooling.effective_response(un, base, grid)
    r_as = cooling.effective_response(asd, asd_params, grid)
    t = ResultTable(
        name="fig1bc",
        columns=[("omega", "omega_m"),
                 ("omega_eff_unassisted", "omega_m"),
                 ("gamma_eff_unassisted", "omega_m"),
                 ("omega_eff_assisted", "omega_m"),
                 ("gamma_eff_assisted", "omega_m")])
    for k, w in enumerate(grid):
        t.add_row([w, r_un.omega_eff[k], r_un.gamma_eff[k],
                   r_as.omega_eff[k], r_as.gamma_eff[k]])
    tables.append(t)
    return tables


def _lambda_map(base, j_grid, pr_grid):
    un_model = LinearModel.from_steady_state(
        solve_steady_state(base.with_(tunneling_j=0.0, power_right=0.0)),
        base)
    gc_un = float(cooling.net_cooling_rate(un_model, 1.0))
    t = ResultTable(name="fig2a",
                    columns=[("tunneling_j", "omega_m"), ("power_right", "W"),
                             ("lambda_amp", "")])
    w = base.omega_m
    for j in j_grid:
        for pr in pr_grid:
            p = base.with_(tunneling_j=j * w, power_right=pr)
            ss = solve_steady_state(p)
            if not ss.stable:
                t.add_row([j, pr, float("nan")], flag="unstable")
                continue
            m = LinearModel.from_steady_state(ss, p)
            t.add_row([j, pr, float(cooling.net_cooling_rate(m, 1.0)) / gc_un])
    return [t]


def _fig2a(base):
    return _lambda_map(base,
                       np.linspace(0.0, 0.6, DEFAULT_POINTS_2D),
                       np.linspace(0.0, 0.150, DEFAULT_POINTS_2D))


def _fig2b(base):
    grid = np.linspace(0.0, 0.5, DEFAULT_POINTS_1D)
    t = ResultTable(name="fig2b",
                    columns=[("tunneling_j", "omega_m"),
                             ("lambda_pr50mw", ""), ("lambda_pr100mw", "")])
    for j in grid:
        t.add_row([j,
                   cooling.amplification_factor(base, j * base.omega_m, 50e-3),
                   cooling.amplification_factor(base, j * base.omega_m,
                                                100e-3)])
    return [t]


def _fig2c(base):
    grid = np.linspace(0.0, 0.150, DEFAULT_POINTS_1D)
    t = ResultTable(name="fig2c",
                    columns=[("power_right", "W"),
                             ("lambda_j0", ""), ("lambda_j02", "")])
    for pr in grid:
        t.add_row([pr,
                   cooling.amplification_factor(base, 0.0, pr),
                   cooling.amplification_factor(base, 0.2 * base.omega_m, pr)])
    return [t]


def _nf_axis_table(name, axis_name, unit, grid, params_of):
    nf_un = _nf_pair(fig1_params())[1]
    t = ResultTable(name=name,
                    columns=[(axis_name, unit), ("nf_analytic", ""),
                             ("nf_numeric", ""), ("nf_unassisted", "")])
    for x in grid:
        p = params_of(x)
        ss = solve_steady_state(p)
        if not ss.stable:
            t.add_row([x, float("nan"), float("nan"), nf_un],
                      flag="unstable")
            continue
        nf_a, nf_n = _nf_pair(p)
        t.add_row([x, nf_a, nf_n, nf_un])
    return t


def _fig3a(base):
    w = base.omega_m
    asd = _assisted(base)
    grid = np.linspace(-2.0, 2.0, DEFAULT_POINTS_1D)
    return [_nf_axis_table("fig3a", "delta_a", "omega_m", grid,
                           lambda x: asd.with_(delta_a=x * w))]


def _fig3b(base):
    w = base.omega_m
    asd = _assisted(base).with_(delta_a=0.0)
    grid = np.linspace(0.02, 0.5, DEFAULT_POINTS_1D)
    return [_nf_axis_table("fig3b", "kappa_a", "omega_m", grid,
                           lambda x: asd.with_(kappa_a=x * w))]


def _fig4a(base):
    w = base.omega_m
    grid = np.linspace(0.25, 2.0, DEFAULT_POINTS_1D)
    asd = _assisted(base)
    t = ResultTable(name="fig4a",
                    columns=[("delta", "omega_m"),
                             ("nf_unassisted", ""), ("nf_assisted", "")])
    for d in grid:
        nf_u = _nf_pair(base.pin_delta(d * w))[1]
        nf_a = _nf_pair(asd.pin_delta(d * w))[1]
        t.add_row([d, nf_u, nf_a])
    return [t]


def _fig4b(base):
    w = base.omega_m
    jg = np.linspace(0.0, 0.5, DEFAULT_POINTS_2D)
    prg = np.linspace(0.0, 0.150, DEFAULT_POINTS_2D)
    t = ResultTable(name="fig4b",
                    columns=[("tunneling_j", "omega_m"), ("power_right", "W"),
                             ("nf_analytic", ""), ("nf_numeric", "")])
    for j in jg:
        for pr in prg:
            p = base.with_(tunneling_j=j * w, power_right=pr)
            ss = solve_steady_state(p)
            if not ss.stable:
                t.add_row([j, pr, float("nan"), float("nan")],
                          flag="unstable")
                continue
            nf_a, nf_n = _nf_pair(p)
            t.add_row([j, pr, nf_a, nf_n])
    return [t]


def _fig4c(base):
    w = base.omega_m
    grid = np.linspace(0.0, 0.150, DEFAULT_POINTS_1D)
    return [_nf_axis_table("fig4c", "power_right", "W", grid,
                           lambda x: base.with_(tunneling_j=0.15 * w,
                                                power_right=x))]


def _fig4d(base):
    w = base.omega_m
    grid = np.linspace(0.0, 0.5, DEFAULT_POINTS_1D)
    return [_nf_axis_table("fig4d", "tunneling_j", "omega_m", grid,
                           lambda x: base.with_(tunneling_j=x * w,
                                                power_right=50e-3))]


def _fig5a(base):
    w = base.omega_m
    grid = np.geomspace(1e-7, 1e-3, DEFAULT_POINTS_1D)
    asd = _assisted(base)
    t = ResultTable(name="fig5a",
                    columns=[("gamma_m", "omega_m"),
                             ("nf_unassisted", ""), ("nf_assisted", "")])
    for g in grid:
        t.add_row([g, _nf_pair(base.with_(gamma_m=g * w))[1],
                   _nf_pair(asd.with_(gamma_m=g * w))[1]])
    return [t]


def _fig5b(base):
    w = base.omega_m
    grid = np.geomspace(0.03, 4.0, DEFAULT_POINTS_1D)
    asd = _assisted(base)
    t = ResultTable(name="fig5b",
                    columns=[("kappa_c", "omega_m"),
                             ("nf_unassisted", ""), ("nf_assisted", "")])
    for k in grid:
        t.add_row([k, _nf_pair(base.with_(kappa_c=k * w))[1],
                   _nf_pair(asd.with_(kappa_c=k * w))[1]])
    return [t]


def _entanglement_at(params):
    cov = entanglement.covariance_for(params)
    return entanglement.entanglement_report(cov)


def _fig6(base):
    w = base.omega_m
    asd = _assisted(base)
    da_grid = np.linspace(-2.0, 2.0, DEFAULT_POINTS_2D)
    ka_grid = np.linspace(0.01, 0.2, DEFAULT_POINTS_2D)
    t = ResultTable(name="fig6",
                    columns=[("delta_a", "omega_m"), ("kappa_a", "omega_m"),
                             ("e_ab", ""), ("e_cb", ""), ("e_ac", "")])
    for da in da_grid:
        for ka in ka_grid:
            p = asd.with_(delta_a=da * w, kappa_a=ka * w)
            ss = solve_steady_state(p)
            if not ss.stable:
                t.add_row([da, ka] + [float("nan")] * 3, flag="unstable")
                continue
            rep = _entanglement_at(p)
            t.add_row([da, ka, rep.e_ab, rep.e_cb, rep.e_ac])
    return [t]


def _fig7(base):
    w = base.omega_m
    j_grid = np.linspace(0.0, 0.6, DEFAULT_POINTS_2D)
    pr_grid = np.linspace(0.0, 0.150, DEFAULT_POINTS_2D)
    narrow = base.with_(kappa_a=0.5 * base.kappa_c)
    t = ResultTable(
        name="fig7",
        columns=[("tunneling_j", "omega_m"), ("power_right", "W"),
                 ("e_ab", ""), ("e_ac", ""), ("e_cb", "")],
        meta={"detuning_note": "e_ab/e_ac at delta_a=-omega_m, "
                               "e_cb at delta_a=0"})
    for j in j_grid:
        for pr in pr_grid:
            p_blue = narrow.with_(tunneling_j=j * w, power_right=pr,
                                  delta_a=-w)
            p_zero = narrow.with_(tunneling_j=j * w, power_right=pr,
                                  delta_a=0.0)
            row = [j, pr]
            flag = ""
            try:
                rep_b = _entanglement_at(p_blue)
                rep_z = _entanglement_at(p_zero)
                row += [rep_b.e_ab, rep_b.e_ac, rep_z.e_cb]
            except StabilityError:
                row += [float("nan")] * 3
                flag = "unstable"
            t.add_row(row, flag=flag)
    return [t]


def _fig8(base):
    w = base.omega_m
    nbar_grid = np.linspace(0.0, 2000.0, DEFAULT_POINTS_1D)
    narrow = base.with_(kappa_a=0.5 * base.kappa_c)
    configs = {
        "assisted_da0": _assisted(narrow).with_(delta_a=0.0),
        "assisted_dam1": _assisted(narrow).with_(delta_a=-w),
        "unassisted": narrow.with_(tunneling_j=0.0, power_right=0.0),
    }
    sweeps = {key: entanglement.robustness_sweep(p, nbar_grid)
              for key, p in configs.items()}
    t = ResultTable(
        name="fig8",
        columns=[("nbar", ""),
                 ("e_cb_assisted", ""), ("e_ab_assisted", ""),
                 ("e_ac_assisted", ""), ("e_cb_unassisted", "")],
        meta={"detuning_note": "e_cb at delta_a=0; e_ab/e_ac at "
                               "delta_a=-omega_m",
              "threshold_e_cb_assisted":
                  sweeps["assisted_da0"].thresholds[
                      "cooling_cavity|mechanics"],
              "threshold_e_cb_unassisted":
                  sweeps["unassisted"].thresholds[
                      "cooling_cavity|mechanics"],
              "threshold_grid_resolution":
                  sweeps["unassisted"].grid_resolution})
    for k, nb in enumerate(nbar_grid):
        t.add_row([nb,
                   sweeps["assisted_da0"].e_cb[k],
                   sweeps["assisted_dam1"].e_ab[k],
                   sweeps["assisted_dam1"].e_ac[k],
                   sweeps["unassisted"].e_cb[k]])
    return [t]


def _fig9(base):
    w = base.omega_m
    grid = np.linspace(-2.0, 2.0, DEFAULT_POINTS_1D)
    narrow = base.with_(kappa_a=0.5 * base.kappa_c)
    variants = [("tri_j0", narrow.with_(tunneling_j=0.0, power_right=0.0)),
                ("tri_j015_pr0", narrow.with_(tunneling_j=0.15 * w,
                                              power_right=0.0)),
                ("tri_j015_pr50mw", narrow.with_(tunneling_j=0.15 * w,
                                                 power_right=50e-3))]
    t = ResultTable(name="fig9",
                    columns=[("delta_a", "omega_m")]
                    + [(nm, "") for nm, _ in variants])
    for da in grid:
        row = [da]
        flag = ""
        for _, p in variants:
            try:
                cov = entanglement.covariance_for(p.with_(delta_a=da * w))
                row.append(entanglement.residual_contangle(cov)[0])
            except StabilityError:
                row.append(float("nan"))
                flag = "unstable"
        t.add_row(row, flag=flag)
    return [t]


def _fig10(base):
    params = fig10_params() if base is None else base
    grid = np.linspace(2e-3, 0.5, DEFAULT_POINTS_1D)
    scan = bistability_scan(params, grid)
    t = ResultTable(name="fig10",
                    columns=[("power_left", "W"), ("n_roots", ""),
                             ("root_index", ""), ("x_ss", "m"),
                             ("q_ss", ""), ("stable", "")])
    for pt in scan:
        n = len(pt.q_roots)
        for i in range(n):
            t.add_row([pt.power_left, n, i, pt.x_roots[i], pt.q_roots[i],
                       pt.stable[i]])
    return [t]


FIGURES = {
    "fig1bc": _fig1bc, "fig2a": _fig2a, "fig2b": _fig2b, "fig2c": _fig2c,
    "fig3a": _fig3a, "fig3b": _fig3b,
    "fig4a": _fig4a, "fig4b": _fig4b, "fig4c": _fig4c, "fig4d": _fig4d,
    "fig5a": _fig5a, "fig5b": _fig5b,
    "fig6": _fig6, "fig7": _fig7, "fig8": _fig8, "fig9": _fig9,
    "fig10": _fig10,
}


def run_figure(tag, base_params=None, meta=None):
    """Emit the ResultTables of the named figure data set."""
    if tag not in FIGURES:
        raise ConfigError(f"unknown figure tag {tag!r} "
                          f"(known: {', '.join(sorted(FIGURES))})")
    if base_params is None:
        base_params = fig10_params() if tag == "fig10" else fig1_params()
    tables = FIGURES[tag](base_params)
    for t in tables:
        t.meta.setdefault("figure", tag)
        if meta:
            for k, v in meta.items():
                t.meta.setdefault(k, v)
    return tables
