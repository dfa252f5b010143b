"""CSV schema contracts shared with the simulation CLI."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

FISHER = ["path_label", "beta", "phi", "k", "re_z", "im_z", "branch_n", "is_crossing"]
RATE = ["gamma0", "lambda0", "gammaf", "lambdaf", "beta", "phi", "N", "t", "r_t", "is_cusp"]
MAG = ["gamma", "lambda", "beta", "phi", "mz", "mx", "my", "r_used", "converged"]
BETA_C = ["x_param_name", "x_value", "beta_c", "status"]
AREA = ["x_value", "y_value", "beta_c_at_max_amplitude", "mx", "my", "mz", "in_dqpt_area"]

# trailing columns that may be absent without breaking a plot
OPTIONAL = {"is_cusp"}


class SchemaError(ValueError):
    """Header of a CSV does not match its schema; names the bad column."""


def _parse(value: str):
    if value == "" or value is None:
        return np.nan
    try:
        return float(value)
    except ValueError:
        return value


def read_table(path, schema: list[str]) -> dict[str, np.ndarray]:
    """Load a schema-checked CSV into named columns.

    Numeric cells become floats (blank -> nan); non-numeric cells stay
    strings.  Optional trailing columns may be missing.
    """
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"{path}: file not found")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file")
        rows = list(reader)
    required = [c for c in schema if c not in OPTIONAL]
    for i, name in enumerate(required):
        if i >= len(header) or header[i] != name:
            found = header[i] if i < len(header) else "<missing>"
            raise SchemaError(f"{path}: expected column {name!r}, found {found!r}")
    for extra in header[len(schema):]:
        if extra != "status":
            raise SchemaError(f"{path}: unexpected column {extra!r}")
    columns: dict[str, list] = {name: [] for name in header}
    for row in rows:
        for name, cell in zip(header, row):
            columns[name].append(_parse(cell))
    out = {}
    for name, values in columns.items():
        if all(isinstance(v, float) for v in values):
            out[name] = np.asarray(values, dtype=float)
        else:
            out[name] = np.asarray(values, dtype=object)
    for name in schema:
        if name in OPTIONAL and name not in out:
            out[name] = np.full(len(rows), np.nan)
    return out
