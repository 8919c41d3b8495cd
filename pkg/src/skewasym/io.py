"""JSON and CSV formats.

Matrix file::

    {"dim": 2, "entries": [[re, im], ...]}      # dim*dim entries, row-major

Monotone table::

    {"name": "mine", "f0": 0.25, "samples": [[x, fx], ...]}

Clock scenario::

    {"layout": [2, 2], "global_state": <matrix>, "H_list": [<matrix>, ...],
     "threshold": 0.15, "f_id": "WY", "alpha": null, "rule": "naive"}

Sweep CSV: header ``M,global,local_sum,gap``; numbers use 12 significant
digits everywhere.
"""
from __future__ import annotations

import csv
import io
import json
from importlib import resources
from pathlib import Path
from typing import Iterable

import numpy as np

from .clocknet import ClockScenario, DecisionResult
from .monotone import MonotoneFunction, builtin, from_table

__all__ = [
    "fmt",
    "matrix_to_json",
    "matrix_from_json",
    "load_matrix",
    "save_matrix",
    "load_table",
    "scenario_to_json",
    "scenario_from_json",
    "load_scenario",
    "save_scenario",
    "result_record",
    "bundled_scenario_path",
    "sweep_csv",
]


def fmt(x: float) -> str:
    return f"{float(x):.12g}"


def _round12(x: float) -> float:
    return float(fmt(x))


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("only square matrices are serialised")
    return {"dim": int(m.shape[0]),
            "entries": [[float(z.real), float(z.imag)] for z in m.ravel()]}


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "dim" not in obj or "entries" not in obj:
        raise ValueError("matrix object needs 'dim' and 'entries'")
    dim = int(obj["dim"])
    entries = obj["entries"]
    if dim < 1 or len(entries) != dim * dim:
        raise ValueError(f"matrix of dim {dim} needs {dim * dim} entries, got {len(entries)}")
    vals = []
    for e in entries:
        if isinstance(e, (int, float)):
            vals.append(complex(e))
        elif len(e) == 2:
            vals.append(complex(float(e[0]), float(e[1])))
        else:
            raise ValueError(f"bad matrix entry {e!r}; expected [re, im]")
    return np.array(vals, dtype=complex).reshape(dim, dim)


def load_matrix(path) -> np.ndarray:
    return matrix_from_json(json.loads(Path(path).read_text()))


def save_matrix(path, m) -> None:
    Path(path).write_text(json.dumps(matrix_to_json(m)) + "\n")


def load_table(path) -> MonotoneFunction:
    obj = json.loads(Path(path).read_text())
    for key in ("name", "f0", "samples"):
        if key not in obj:
            raise ValueError(f"monotone table is missing {key!r}")
    return from_table(obj["name"], obj["f0"], obj["samples"])


def scenario_to_json(sc: ClockScenario, f_id: str = "WY", alpha: float | None = None,
                     rule: str = "conservative") -> dict:
    return {
        "name": sc.name,
        "layout": list(sc.layout),
        "global_state": matrix_to_json(sc.global_state.matrix),
        "H_list": [matrix_to_json(h) for h in sc.H_list],
        "threshold": sc.threshold,
        "f_id": f_id,
        "alpha": alpha,
        "rule": rule,
    }


def scenario_from_json(obj) -> tuple[ClockScenario, str]:
    """Parse a scenario object; returns ``(scenario, rule)``."""
    for key in ("layout", "global_state", "H_list", "threshold"):
        if key not in obj:
            raise ValueError(f"scenario is missing {key!r}")
    f = builtin(obj.get("f_id", "WY"), obj.get("alpha"))
    sc = ClockScenario(
        matrix_from_json(obj["global_state"]),
        obj["layout"],
        [matrix_from_json(h) for h in obj["H_list"]],
        float(obj["threshold"]),
        f,
        name=obj.get("name", ""),
    )
    return sc, obj.get("rule", "conservative")


def load_scenario(path) -> tuple[ClockScenario, str]:
    return scenario_from_json(json.loads(Path(path).read_text()))


def save_scenario(path, sc: ClockScenario, **kw) -> None:
    Path(path).write_text(json.dumps(scenario_to_json(sc, **kw), indent=1) + "\n")


def result_record(res: DecisionResult) -> dict:
    rec = res.to_record()
    rec["reports"] = [_round12(r) for r in rec["reports"]]
    rec["actual_global"] = _round12(rec["actual_global"])
    return rec


def sweep_csv(rows: Iterable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["M", "global", "local_sum", "gap"])
    for r in rows:
        w.writerow([r.M, fmt(r.global_value), fmt(r.local_sum), fmt(r.gap)])
    return buf.getvalue()


def bundled_scenario_path(name: str) -> Path:
    """Path of a scenario shipped with the package (``aberg_m4`` or ``product``)."""
    ref = resources.files("skewasym") / "data" / f"{name}.json"
    if not ref.is_file():
        raise FileNotFoundError(f"no bundled scenario named {name!r}")
    return Path(str(ref))
