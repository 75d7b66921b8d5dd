"""Dataset and result file formats.

X.csv / Y.csv are headerless numeric CSV, one observation per row. Numbers
are written with 17 significant digits so they reload bit-for-bit.
truth.json holds the simulation ground truth and the generating config.
"""

import csv
import json
import math
import os
import platform

import numpy as np

from .errors import InputError

FLOAT_FMT = "%.17g"


def read_matrix(path):
    """Load a headerless numeric CSV, naming the offending cell on failure."""
    rows = []
    width = None
    with open(path, newline="") as fh:
        for r, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise InputError(f"{path}: row {r} has {len(row)} columns, expected {width}")
            vals = []
            for c, cell in enumerate(row, start=1):
                try:
                    v = float(cell)
                except ValueError:
                    raise InputError(f"{path}: row {r}, column {c}: not a number: {cell!r}") from None
                if not math.isfinite(v):
                    raise InputError(f"{path}: row {r}, column {c}: non-finite value {cell!r}")
                vals.append(v)
            rows.append(vals)
    if not rows:
        raise InputError(f"{path}: no data")
    return np.array(rows, dtype=np.float64)


def write_matrix(path, A):
    np.savetxt(path, np.atleast_2d(A), delimiter=",", fmt=FLOAT_FMT)


def load_dataset(directory=None, x_path=None, y_path=None):
    """Read ``(X, Y)`` from a dataset directory or explicit file paths."""
    if directory is not None:
        x_path = x_path or os.path.join(directory, "X.csv")
        y_path = y_path or os.path.join(directory, "Y.csv")
    if x_path is None or y_path is None:
        raise InputError("need --data DIR or both --x and --y")
    return read_matrix(x_path), read_matrix(y_path)


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj):
    return json.dumps(obj, default=_jsonable, indent=2, sort_keys=True)


def save_simulation(directory, sim):
    os.makedirs(directory, exist_ok=True)
    write_matrix(os.path.join(directory, "X.csv"), sim.X_raw)
    write_matrix(os.path.join(directory, "Y.csv"), sim.Y_raw)
    truth = {
        "U_true": sim.truth.U_true,
        "V_true": sim.truth.V_true,
        "support": sim.truth.support_true,
        "config": sim.config.to_dict(),
    }
    with open(os.path.join(directory, "truth.json"), "w") as fh:
        fh.write(dumps(truth) + "\n")


def format_cell(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return FLOAT_FMT % v
    return str(v)


def write_csv(fh, columns, rows, header=None):
    """Write `rows` (dicts) under `columns`, preceded by ``# key: value`` header lines."""
    for key, val in (header or {}).items():
        fh.write(f"# {key}: {val if isinstance(val, str) else json.dumps(val, default=_jsonable, sort_keys=True)}\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format_cell(row[c]) for c in columns])


def hardware_fingerprint():
    return (
        f"{platform.machine()} {platform.processor() or 'unknown-cpu'}; "
        f"cores={os.cpu_count()}; python={platform.python_version()}; numpy={np.__version__}"
    )
