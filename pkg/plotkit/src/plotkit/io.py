"""Readers for the solver's run-directory files.

The solver writes long-format CSV tables: `#` header lines carrying
`key = value` metadata, one `# columns:` line naming the columns, then
one row per grid point with x varying slowest. Numbers use 17
significant digits, so everything read here equals the solver's doubles
bit for bit. This module knows only that documented schema; it never
imports the solver.
"""

import json

import numpy as np


class PlotError(Exception):
    """Unusable input: missing files, wrong schema, bad field shape."""


def _coerce(text):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def read_table(path):
    """Parse one CSV table; returns (meta, columns, data array)."""
    meta = {"config": []}
    columns = None
    rows = []
    try:
        fh = open(path)
    except OSError as exc:
        raise PlotError(f"cannot open {path}: {exc.strerror}") from None
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("columns:"):
                    columns = [c.strip() for c in body[8:].split(",")]
                elif body.startswith("config:"):
                    meta["config"].append(body[7:].strip())
                elif "=" in body:
                    key, _, value = body.partition("=")
                    meta[key.strip()] = _coerce(value.strip())
                continue
            try:
                rows.append([float(part) for part in line.split(",")])
            except ValueError:
                raise PlotError(f"{path}:{lineno}: not numeric: {line!r}") from None
    if columns is None:
        raise PlotError(f"{path}: missing '# columns:' header")
    if not rows:
        raise PlotError(f"{path}: no data rows")
    data = np.array(rows)
    if data.shape[1] != len(columns):
        raise PlotError(f"{path}: {data.shape[1]} columns of data but "
                        f"{len(columns)} named in the header")
    return meta, columns, data


def reshape_field(path, meta, columns, data):
    """Rebuild the structured grid from a long-format table.

    Rows are written x-major (y cycles fastest), so the unique y count
    fixes the shape. Returns (x, y, fields) with fields of shape
    (nx, ny, ncomp) for the columns after x and y.
    """
    ny = np.unique(data[:, 1]).size
    nx, rem = divmod(data.shape[0], ny)
    if rem != 0 or np.unique(data[:, 0]).size != nx:
        raise PlotError(f"{path}: rows do not form a structured grid")
    x = data[:, 0].reshape(nx, ny)[:, 0]
    y = data[:, 1].reshape(nx, ny)[0, :]
    fields = data[:, 2:].reshape(nx, ny, len(columns) - 2)
    return x, y, fields


def read_interleaved(path):
    """Read the half-mesh dataset; returns (meta, names, x, y, fields).

    The dataset of an N1 x N2 run is (2 N1 + 1) x (2 N2 + 1): corner
    values at even/even indices, cell averages at odd/odd, face values
    at the mixed parities.
    """
    meta, columns, data = read_table(path)
    x, y, fields = reshape_field(path, meta, columns, data)
    n1, n2 = meta.get("n1"), meta.get("n2")
    if n1 is not None and (x.size, y.size) != (2 * n1 + 1, 2 * n2 + 1):
        raise PlotError(f"{path}: dataset is {x.size} x {y.size}, expected "
                        f"{2 * n1 + 1} x {2 * n2 + 1} from n1={n1}, n2={n2}")
    return meta, columns[2:], x, y, fields


def read_report(path):
    """Load a run report; returns the parsed dict."""
    try:
        with open(path) as fh:
            rep = json.load(fh)
    except OSError as exc:
        raise PlotError(f"cannot open {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise PlotError(f"{path}: not a run report: {exc}") from None
    if "n1" not in rep:
        raise PlotError(f"{path}: not a run report (no mesh size)")
    return rep
