"""Command-line interface.

Subcommands:

* ``figure <tag>``   -- emit the data tables of a named figure
* ``sweep <config>`` -- run a configured 1-D/2-D parameter sweep
* ``check <config>`` -- stability / bistability report for a scenario
* ``selftest``       -- run the acceptance suite

Exit codes: 0 success, 2 validation error, 3 numeric/stability error.
For ``selftest``, any failing criterion also exits 3.
"""

import argparse
import os
import sys

import numpy as np

from . import selftest as selftest_mod
from .config import load_config, make_config
from .errors import ConfigError, CovarianceError, NumericsError, \
    ParameterError, StabilityError
from .figures import FIGURES, run_figure, run_sweep
from .params import PRESETS, derive_dimensionless
from .steady_state import bistability_scan, solve_steady_state

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3


def build_parser():
    p = argparse.ArgumentParser(
        prog="acaom",
        description="Steady states, cooling and entanglement of an "
                    "auxiliary-cavity-assisted optomechanical system")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("figure", help="emit the data of a named figure")
    f.add_argument("tag", choices=sorted(FIGURES))
    _common_io(f)

    s = sub.add_parser("sweep", help="run a configured parameter sweep")
    s.add_argument("config_path", metavar="config")
    _common_io(s, config_flag=False)

    c = sub.add_parser("check", help="stability/bistability report")
    c.add_argument("config_path", metavar="config")
    c.add_argument("--preset", choices=sorted(PRESETS))

    t = sub.add_parser("selftest", help="run the acceptance suite")
    t.add_argument("--only", type=int, action="append",
                   help="run only the given criterion number (repeatable)")
    return p


def _common_io(sp, config_flag=True):
    if config_flag:
        sp.add_argument("--config", dest="config_path",
                        help="scenario YAML overriding the defaults")
    sp.add_argument("--out", default=".", help="output directory")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--preset", choices=sorted(PRESETS),
                    help="baseline parameter preset")


def _load(args, default_preset=None):
    preset = getattr(args, "preset", None) or default_preset
    path = getattr(args, "config_path", None)
    if path:
        cfg = load_config(path, preset_override=preset)
    else:
        cfg = make_config({"preset": preset} if preset else {"preset": "fig1"})
    jobs = getattr(args, "jobs", None)
    fmt = getattr(args, "format", None)
    if jobs or fmt:
        from dataclasses import replace
        cfg = replace(cfg, jobs=jobs or cfg.jobs, fmt=fmt or cfg.fmt)
    return cfg


def _write_tables(tables, out_dir, fmt):
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for t in tables:
        path = os.path.join(out_dir, f"{t.name}.{fmt}")
        t.write(path, fmt=fmt)
        paths.append(path)
    return paths


def cmd_figure(args):
    default_preset = "fig10" if args.tag == "fig10" else "fig1"
    cfg = _load(args, default_preset=default_preset)
    tables = run_figure(args.tag, cfg.params,
                        meta={"config_hash": cfg.hash})
    for path in _write_tables(tables, args.out, cfg.fmt):
        print(path)
    return EXIT_OK


def cmd_sweep(args):
    cfg = _load(args)
    table = run_sweep(cfg)
    for path in _write_tables([table], args.out, cfg.fmt):
        print(path)
    return EXIT_OK


def cmd_check(args):
    cfg = load_config(args.config_path, preset_override=args.preset)
    params = cfg.params
    sp = derive_dimensionless(params)
    print(f"scenario: {cfg.name} (hash {cfg.hash})")
    print(f"scaled rates (units of omega_m): kappa_c={sp.kappa_c:.6g} "
          f"kappa_a={sp.kappa_a:.6g} gamma_m={sp.gamma_m:.6g} "
          f"J={sp.j:.6g} delta_a={sp.delta_a:.6g}")
    mode = "pinned" if sp.pinned else "self-consistent"
    print(f"detuning mode: {mode}")
    ss = solve_steady_state(params)
    w = params.omega_m
    print(f"steady state: |alpha_c|={abs(ss.alpha_c):.6g} "
          f"|alpha_a|={abs(ss.alpha_a):.6g} q_ss={ss.q_ss:.6g} "
          f"Delta/omega_m={ss.delta_eff / w:.6g} "
          f"G/omega_m={abs(ss.coupling_g) / w:.6g}")
    print(f"dynamically stable: {ss.stable}")
    if not sp.pinned:
        grid = np.linspace(max(params.power_left * 0.2, 1e-4),
                           max(params.power_left * 2.0, 1e-3), 21)
        scan = bistability_scan(params, grid)
        counts = sorted({len(pt.q_roots) for pt in scan})
        print(f"bistability over P_L in [{grid[0] * 1e3:.2f}, "
              f"{grid[-1] * 1e3:.2f}] mW: root counts {counts}")
        at_op = bistability_scan(params, [params.power_left])[0]
        print(f"at P_L={params.power_left * 1e3:.2f} mW: "
              f"{len(at_op.q_roots)} root(s), stable flags {at_op.stable}")
    if not ss.stable:
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_selftest(args):
    results = selftest_mod.run_all(numbers=args.only)
    for r in results:
        print(selftest_mod.format_result(r))
    n_fail = sum(not r.passed for r in results)
    print(f"{len(results) - n_fail}/{len(results)} acceptance criteria passed")
    return EXIT_OK if n_fail == 0 else EXIT_NUMERIC


def main(argv=None):
    args = build_parser().parse_args(argv)
    handlers = {"figure": cmd_figure, "sweep": cmd_sweep,
                "check": cmd_check, "selftest": cmd_selftest}
    try:
        return handlers[args.command](args)
    except (ConfigError, ParameterError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (StabilityError, NumericsError, CovarianceError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
