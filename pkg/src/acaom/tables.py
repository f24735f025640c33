"""Result tables with provenance headers and deterministic serialization.

Tables are rectangular; every cell is a float, int, string or bool.  Rows
at unstable/skipped sweep points carry a non-empty ``flag`` value and may
hold NaN; everywhere else NaN is forbidden.  Floats are written with 17
significant digits so identical configs reproduce identical bytes.
"""

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

CODE_VERSION = "0.1.0"


def config_hash(config_dict):
    """Stable short hash of a canonicalized config mapping."""
    blob = json.dumps(config_dict, sort_keys=True, default=_jsonable)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _jsonable(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"not JSON-serializable: {type(value)}")


def fmt_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


@dataclass
class ResultTable:
    name: str                      # figure tag or sweep name
    columns: list                  # [(name, unit), ...]
    rows: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add_row(self, values, flag=""):
        if len(values) != len(self.columns):
            raise ValueError(f"row width {len(values)} != "
                             f"{len(self.columns)} columns")
        if not flag:
            for v, (cname, _) in zip(values, self.columns):
                if isinstance(v, (float, np.floating)) and not np.isfinite(v):
                    raise ValueError(f"non-finite {cname} in unflagged row")
        self.rows.append((list(values), flag))

    @property
    def column_names(self):
        return [c for c, _ in self.columns]

    def header_lines(self):
        lines = [f"# table: {self.name}",
                 f"# code_version: {CODE_VERSION}"]
        for key in sorted(self.meta):
            lines.append(f"# {key}: {self.meta[key]}")
        cols = ", ".join(f"{c} [{u}]" if u else c for c, u in self.columns)
        lines.append(f"# columns: {cols}, flag")
        return lines

    def to_csv(self):
        out = list(self.header_lines())
        out.append(",".join(self.column_names + ["flag"]))
        for values, flag in self.rows:
            out.append(",".join([fmt_value(v) for v in values] + [flag]))
        return "\n".join(out) + "\n"

    def to_json_obj(self):
        return {
            "table": self.name,
            "code_version": CODE_VERSION,
            "meta": {k: self.meta[k] for k in sorted(self.meta)},
            "columns": [{"name": c, "unit": u} for c, u in self.columns],
            "rows": [{"values": [_json_cell(v) for v in values],
                      "flag": flag}
                     for values, flag in self.rows],
        }

    def to_json(self):
        return json.dumps(self.to_json_obj(), indent=1,
                          default=_jsonable) + "\n"

    def write(self, path, fmt="csv"):
        text = self.to_csv() if fmt == "csv" else self.to_json()
        with open(path, "w") as fh:
            fh.write(text)

    def column(self, name):
        """Values of a named column over the unflagged rows, as an array."""
        k = self.column_names.index(name)
        return np.array([values[k] for values, flag in self.rows if not flag])


def _json_cell(v):
    if isinstance(v, (float, np.floating)):
        return float(fmt_value(v))
    if isinstance(v, (np.integer,)):
        return int(v)
    return v
