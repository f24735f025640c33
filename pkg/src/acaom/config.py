"""Scenario configuration: YAML loading, validation, presets.

A scenario file is a small YAML mapping:

    preset: fig1          # optional baseline (fig1 / fig1_assisted / fig10)
    units: omega_m        # "omega_m" (default) or "si" for rate-like params
    params:
      tunneling_j: 0.15
      power_right: 0.050  # powers are always in watts
      delta_pinned: 1.0
    sweep:
      - param: delta_a
        start: -2.0
        stop: 2.0
        points: 201
        scale: linear     # or "log"
    outputs: [nf_numeric, nf_analytic]
    format: csv           # or json
    jobs: 1

Rate-like parameters (kappa_c, kappa_a, gamma_m, detunings, tunneling_j,
omega_c) are interpreted in units of omega_m unless ``units: si``; powers,
nbar, mass, lengths and omega_m itself are always SI.  Exactly one of
delta_c / delta_pinned may be active: setting one clears the preset's
value of the other, setting both is an error.
"""

from dataclasses import dataclass, field

import yaml

from .errors import ConfigError
from .params import PRESETS, SystemParams
from .tables import config_hash

RATE_KEYS = ("kappa_c", "kappa_a", "gamma_m", "delta_a", "delta_c",
             "delta_pinned", "tunneling_j", "omega_c")
ABSOLUTE_KEYS = ("omega_m", "power_left", "power_right", "mass",
                 "cavity_length", "wavelength", "nbar")
PARAM_KEYS = RATE_KEYS + ABSOLUTE_KEYS
SWEEPABLE = ("kappa_c", "kappa_a", "gamma_m", "delta_a", "delta_c",
             "delta_pinned", "tunneling_j", "power_left", "power_right",
             "nbar")
TOP_KEYS = ("name", "preset", "units", "params", "sweep", "outputs",
            "format", "jobs", "out_dir")


@dataclass(frozen=True)
class SweepAxis:
    param: str
    start: float
    stop: float
    points: int
    scale: str = "linear"


@dataclass(frozen=True)
class ScenarioConfig:
    params: SystemParams
    units: str = "omega_m"
    sweep: tuple = ()
    outputs: tuple = ()
    fmt: str = "csv"
    jobs: int = 1
    name: str = "scenario"
    preset: str | None = None
    source: dict = field(default_factory=dict)

    @property
    def hash(self):
        return config_hash(self.source)


def _require_number(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    return float(value)


def _build_params(preset, raw_params, units, where):
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"{where}: unknown preset {preset!r} "
                              f"(known: {', '.join(sorted(PRESETS))})")
        base = PRESETS[preset]()
    else:
        base = None

    if raw_params is None:
        raw_params = {}
    if not isinstance(raw_params, dict):
        raise ConfigError(f"{where}: params must be a mapping")
    for key in raw_params:
        if key not in PARAM_KEYS:
            raise ConfigError(f"{where}: params.{key}: unknown parameter "
                              f"(known: {', '.join(PARAM_KEYS)})")
    if "delta_c" in raw_params and "delta_pinned" in raw_params:
        raise ConfigError(f"{where}: params: delta_c and delta_pinned are "
                          "mutually exclusive")

    if base is None:
        missing = [k for k in PARAM_KEYS
                   if k not in raw_params
                   and k not in ("delta_c", "delta_pinned")]
        if missing:
            raise ConfigError(f"{where}: no preset given and params missing "
                              f"required fields: {', '.join(missing)}")
        if "delta_c" not in raw_params and "delta_pinned" not in raw_params:
            raise ConfigError(f"{where}: params: one of delta_c / "
                              "delta_pinned is required")
        fields = {}
    else:
        fields = {k: getattr(base, k) for k in PARAM_KEYS}

    omega_m = _require_number(raw_params.get("omega_m",
                                             fields.get("omega_m")),
                              f"{where}: params.omega_m")
    for key, value in raw_params.items():
        v = _require_number(value, f"{where}: params.{key}")
        if units == "omega_m" and key in RATE_KEYS:
            v *= omega_m
        fields[key] = v
    # mode switch: a user-specified detuning key replaces the preset's mode
    if "delta_c" in raw_params:
        fields["delta_pinned"] = None
    if "delta_pinned" in raw_params:
        fields["delta_c"] = None
    fields.setdefault("delta_c", None)
    fields.setdefault("delta_pinned", None)
    return SystemParams(**fields)


def _build_sweep(raw_sweep, where):
    if raw_sweep is None:
        return ()
    if not isinstance(raw_sweep, list):
        raise ConfigError(f"{where}: sweep must be a list of axes")
    if len(raw_sweep) > 2:
        raise ConfigError(f"{where}: at most two sweep axes supported")
    axes = []
    for i, raw in enumerate(raw_sweep):
        path = f"{where}: sweep[{i}]"
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: axis must be a mapping")
        unknown = set(raw) - {"param", "start", "stop", "points", "scale"}
        if unknown:
            raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
        try:
            param = raw["param"]
            start = _require_number(raw["start"], f"{path}.start")
            stop = _require_number(raw["stop"], f"{path}.stop")
            points = raw["points"]
        except KeyError as exc:
            raise ConfigError(f"{path}: missing key {exc}") from None
        if param not in SWEEPABLE:
            raise ConfigError(f"{path}.param: {param!r} is not sweepable "
                              f"(known: {', '.join(SWEEPABLE)})")
        if not isinstance(points, int) or points < 2:
            raise ConfigError(f"{path}.points: need an integer >= 2, "
                              f"got {points!r}")
        if start == stop:
            raise ConfigError(f"{path}: degenerate range start == stop")
        scale = raw.get("scale", "linear")
        if scale not in ("linear", "log"):
            raise ConfigError(f"{path}.scale: must be linear or log")
        if scale == "log" and (start <= 0 or stop <= 0):
            raise ConfigError(f"{path}: log scale needs positive bounds")
        axes.append(SweepAxis(param=param, start=start, stop=stop,
                              points=points, scale=scale))
    return tuple(axes)


def make_config(data, where="config", preset_override=None):
    """Validate a raw mapping into a ScenarioConfig."""
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: top level must be a mapping")
    for key in data:
        if key not in TOP_KEYS:
            raise ConfigError(f"{where}: unknown key {key!r} "
                              f"(known: {', '.join(TOP_KEYS)})")
    units = data.get("units", "omega_m")
    if units not in ("omega_m", "si"):
        raise ConfigError(f"{where}: units must be 'omega_m' or 'si'")
    preset = preset_override or data.get("preset")
    params = _build_params(preset, data.get("params"), units, where)
    sweep = _build_sweep(data.get("sweep"), where)
    outputs = data.get("outputs") or ()
    if isinstance(outputs, str):
        outputs = (outputs,)
    if not isinstance(outputs, (list, tuple)):
        raise ConfigError(f"{where}: outputs must be a list of names")
    fmt = data.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"{where}: format must be csv or json")
    jobs = data.get("jobs", 1)
    if not isinstance(jobs, int) or jobs < 1:
        raise ConfigError(f"{where}: jobs must be a positive integer")
    name = data.get("name", preset or "scenario")

    source = {
        "name": name, "preset": preset, "units": units,
        "params": {k: getattr(params, k) for k in PARAM_KEYS},
        "delta_c": params.delta_c, "delta_pinned": params.delta_pinned,
        "sweep": [vars(ax) for ax in sweep],
        "outputs": list(outputs), "format": fmt,
    }
    return ScenarioConfig(params=params, units=units, sweep=sweep,
                          outputs=tuple(outputs), fmt=fmt, jobs=jobs,
                          name=str(name), preset=preset, source=source)


def load_config(path, preset_override=None):
    """Load and validate a scenario YAML file."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: YAML parse error: {exc}") from exc
    return make_config(data, where=str(path), preset_override=preset_override)
