"""Readers and writers for the package's file formats.

CSV carries tabular numbers at 10 significant digits, with provenance
embedded in leading ``#`` comment lines.  JSON reports use Python's
shortest round-trip float representation and sorted keys, so reruns with
the same inputs are byte-identical.  Large fields use the AFLD1
container: the 5-byte magic ``AFLD1``, a little-endian uint32 header
length, a UTF-8 JSON header carrying the grid and provenance, then the
sample values as little-endian float64 in row-major order with the
channel axis fastest.  Every writer goes through a temporary file and
``os.replace``, so a reader never sees partial output.
"""

import csv
import io
import json
import os
import struct
import tempfile

import numpy as np

from .errors import FileFormatError

AFLD_MAGIC = b"AFLD1"


def format_float(x):
    """Decimal text at 10 significant digits."""
    return f"{float(x):.10g}"


def _atomic_write_bytes(path, data):
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".aniso-", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def write_json(path, doc):
    """Write a JSON document atomically, keys sorted, trailing newline."""
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    _atomic_write_bytes(path, text.encode())


def read_json(path):
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        return json.loads(raw.decode())
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"{path}: not valid JSON ({exc})") from None


def write_csv(path, header, rows, provenance=None):
    """Write numeric rows under a named header, atomically.

    Parameters
    ----------
    path : str
    header : sequence of str
        Column names, one per entry of each row.
    rows : iterable of sequences
        Numeric rows; every value is formatted at 10 significant digits.
    provenance : dict, optional
        Embedded as one compact-JSON comment line before the header.
    """
    buf = io.StringIO()
    if provenance:
        blob = json.dumps(provenance, sort_keys=True, separators=(",", ":"))
        buf.write(f"# provenance: {blob}\n")
    buf.write(",".join(header) + "\n")
    width = len(header)
    for row in rows:
        if len(row) != width:
            raise FileFormatError(
                f"{path}: row has {len(row)} values, header has {width}")
        buf.write(",".join(format_float(v) for v in row) + "\n")
    _atomic_write_bytes(path, buf.getvalue().encode())


def read_csv(path, min_columns=1):
    """Read a numeric CSV as a 2-D array.

    Comment lines starting with ``#`` are skipped, as is one optional
    non-numeric header row.  All remaining rows must be numeric and of
    equal width.
    """
    rows = []
    with open(path, newline="") as fh:
        for record in csv.reader(fh):
            if not record or record[0].lstrip().startswith("#"):
                continue
            try:
                rows.append([float(v) for v in record])
            except ValueError:
                if rows:
                    raise FileFormatError(
                        f"{path}: non-numeric row after data began") from None
                continue
    if not rows:
        raise FileFormatError(f"{path}: no numeric rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise FileFormatError(f"{path}: rows have unequal width")
    if width < min_columns:
        raise FileFormatError(
            f"{path}: expected at least {min_columns} columns, found {width}")
    return np.asarray(rows)


def write_variogram_csv(path, table, provenance=None):
    """Write a VariogramTable as columns h_1..h_N, value, err."""
    n = table.lags.shape[1]
    header = [f"h_{j + 1}" for j in range(n)] + ["value", "err"]
    rows = [list(table.lags[i]) + [table.values[i], table.errs[i]]
            for i in range(len(table.values))]
    write_csv(path, header, rows, provenance)


def write_field_csv(path, fs, provenance=None):
    """Write a FieldSample as columns t_1..t_N, channel, value."""
    header = [f"t_{j + 1}" for j in range(fs.grid.ndim)] + ["channel", "value"]
    points = fs.grid.points()
    values = fs.values.reshape(fs.grid.npoints, fs.nchannels)

    def rows():
        for i in range(points.shape[0]):
            coords = list(points[i])
            for c in range(fs.nchannels):
                yield coords + [c, values[i, c]]

    write_csv(path, header, rows(), provenance)


def write_prediction_csv(path, sites, predictions, variances, provenance=None):
    """Write kriging output as columns t_1..t_N, prediction, variance."""
    sites = np.atleast_2d(np.asarray(sites, dtype=float))
    header = [f"t_{j + 1}" for j in range(sites.shape[1])]
    header += ["prediction", "variance"]
    rows = [list(sites[i]) + [predictions[i], variances[i]]
            for i in range(sites.shape[0])]
    write_csv(path, header, rows, provenance)


def write_field_afld(path, fs, provenance=None):
    """Write a FieldSample in the AFLD1 container."""
    header = {
        "origin": list(fs.grid.origin),
        "spacing": list(fs.grid.spacing),
        "shape": list(fs.grid.shape),
        "channels": fs.nchannels,
        "seed": int(fs.seed),
        "metadata": fs.metadata,
        "provenance": provenance or {},
    }
    blob = json.dumps(header, sort_keys=True, separators=(",", ":")).encode()
    payload = np.ascontiguousarray(fs.values, dtype="<f8").tobytes()
    _atomic_write_bytes(
        path, AFLD_MAGIC + struct.pack("<I", len(blob)) + blob + payload)


def read_field_afld(path):
    """Read an AFLD1 container back into a FieldSample."""
    from .simulate import FieldSample, Grid
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:5] != AFLD_MAGIC or len(raw) < 9:
        raise FileFormatError(f"{path}: missing AFLD1 magic")
    (hlen,) = struct.unpack("<I", raw[5:9])
    if len(raw) < 9 + hlen:
        raise FileFormatError(f"{path}: truncated header")
    try:
        header = json.loads(raw[9:9 + hlen].decode())
        grid = Grid(origin=tuple(header["origin"]),
                    spacing=tuple(header["spacing"]),
                    shape=tuple(header["shape"]))
        channels = int(header["channels"])
        seed = int(header.get("seed", 0))
    except (UnicodeDecodeError, json.JSONDecodeError, KeyError, TypeError,
            ValueError) as exc:
        raise FileFormatError(f"{path}: bad AFLD1 header ({exc})") from None
    values = np.frombuffer(raw, dtype="<f8", offset=9 + hlen)
    expected = grid.npoints * channels
    if values.size != expected:
        raise FileFormatError(
            f"{path}: payload holds {values.size} floats, header promises "
            f"{expected}")
    values = values.reshape(grid.shape + (channels,))
    meta = dict(header.get("metadata") or {})
    meta["provenance"] = header.get("provenance") or {}
    return FieldSample(grid=grid, values=values, seed=seed, metadata=meta)
