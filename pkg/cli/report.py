"""Report writers.

JSON: {"schema": 1, "header": {timestamp, wall_time_s}, "body": {...}} with the body serialised
with sorted keys, so equal runs give equal bodies. CSV: provenance as "# key: value" lines, then
the result rows.
"""
from __future__ import annotations

import json
import math
import platform
import sys
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

import numpy as np
import pandas as pd
import scipy
import sympy

SCHEMA = 1


def package_versions() -> dict:
    return dict(python=platform.python_version(), numpy=np.__version__, scipy=scipy.__version__,
                pandas=pd.__version__, sympy=sympy.__version__)


def to_jsonable(obj):
    """Plain JSON types: complex as [re, im], Fraction as {num, den}, arrays as lists."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, Fraction):
        return dict(num=obj.numerator, den=obj.denominator)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [to_jsonable(float(obj.real)), to_jsonable(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else str(float(obj))
    if isinstance(obj, sympy.Basic):
        return str(obj)
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "as_record"):
        return to_jsonable(obj.as_record())
    return str(obj)


def build_body(command: str, inputs: dict, results: dict, provenance: dict) -> dict:
    prov = dict(provenance); prov["versions"] = package_versions()
    return to_jsonable(dict(command=command, inputs=inputs, results=results, provenance=prov))


def render_json(body: dict, wall_time: float) -> str:
    doc = {"schema": SCHEMA,
           "header": {"timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"), "wall_time_s": round(wall_time, 6)},
           "body": body}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def body_text(body: dict) -> str:
    return json.dumps(body, indent=2, sort_keys=True)


def _flat(prefix: str, obj, out: dict):
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flat(f"{prefix}.{k}" if prefix else str(k), obj[k], out)
    else:
        out[prefix] = json.dumps(obj, sort_keys=True) if isinstance(obj, list) else obj


def _is_pair(v) -> bool:
    return isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)


def _row(r: dict) -> dict:
    # complex values, already [re, im], become <key>_re and <key>_im columns
    out = {}
    for k, v in r.items():
        if _is_pair(v):
            out[f"{k}_re"], out[f"{k}_im"] = v
        else:
            _flat(k, v, out)
    return out


def render_csv(body: dict, wall_time: float) -> str:
    """Rows come from results["rows"] when present, else one flattened row of results."""
    meta = {}
    _flat("", dict(schema=SCHEMA, command=body["command"], inputs=body["inputs"], provenance=body["provenance"]), meta)
    lines = [f"# {k}: {v}" for k, v in meta.items()]
    lines.append(f"# wall_time_s: {round(wall_time, 6)}")
    results = body["results"]
    if isinstance(results.get("rows"), list) and results["rows"]:
        df = pd.DataFrame([_row(r) for r in results["rows"]])
    else:
        flat = {}; _flat("", results, flat); df = pd.DataFrame([flat])
    return "\n".join(lines) + "\n" + df.to_csv(index=False)


def write_report(body: dict, wall_time: float, fmt: str, output: str | None) -> str:
    text = render_json(body, wall_time) if fmt == "json" else render_csv(body, wall_time)
    if output is None:
        sys.stdout.write(text)
    else:
        path = Path(output); path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    return text
