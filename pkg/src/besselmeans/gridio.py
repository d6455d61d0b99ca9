"""CSV exchange format for sampled fields, and fields interpolated from tables.

Layout::

    # n: 2
    # gamma: 1.0 1.0
    # <any other key>: <value>
    x1,x2,value
    0,0,1.0
    0,0.5,0.77880078307140488
    ...

Rows enumerate the tensor grid in row-major order (last coordinate fastest).
Numbers are written with 17 significant digits, which round-trips doubles.
"""
from __future__ import annotations

import csv
import io
from typing import Dict, Tuple

import numpy as np

from .fields import EvenField
from .hankel import GridTable, _even_spline_matrix

__all__ = ["TableFormatError", "format_number", "write_grid_csv", "read_grid_csv", "table_field"]


class TableFormatError(ValueError):
    """Malformed table; ``line`` is the 1-based line number (0 if not tied to one)."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


def format_number(v) -> str:
    return f"{float(v):.17g}"


def write_grid_csv(table: GridTable, meta: Dict[str, object] = None) -> str:
    buf = io.StringIO()
    buf.write(f"# n: {table.dim}\n")
    buf.write("# gamma: " + " ".join(repr(float(g)) for g in table.gamma) + "\n")
    for key, value in (meta or {}).items():
        if key not in ("n", "gamma"):
            buf.write(f"# {key}: {value}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"x{i + 1}" for i in range(table.dim)] + ["value"])
    pts = table.points()
    for p, v in zip(pts, table.values.ravel()):
        w.writerow([format_number(c) for c in p] + [format_number(v)])
    return buf.getvalue()


def _parse_meta(lineno, body, meta):
    key, sep, value = body.partition(":")
    if not sep:
        return
    key = key.strip()
    if key in meta:
        raise TableFormatError(lineno, f"duplicate header key {key!r}")
    meta[key] = value.strip()


def read_grid_csv(text: str) -> Tuple[GridTable, Dict[str, str]]:
    """Parse the format written by ``write_grid_csv``."""
    meta: Dict[str, str] = {}
    header_line = None
    rows, row_lines = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if header_line is not None:
                raise TableFormatError(lineno, "comment lines must precede the column header")
            _parse_meta(lineno, line[1:], meta)
            continue
        cells = [c.strip() for c in next(csv.reader([line]))]
        if header_line is None:
            header_line = lineno
            header = cells
            continue
        try:
            rows.append([float(c) for c in cells])
        except ValueError:
            raise TableFormatError(lineno, f"non-numeric entry in {line!r}") from None
        row_lines.append(lineno)
        if len(cells) != len(header):
            raise TableFormatError(lineno, f"expected {len(header)} columns, found {len(cells)}")
        if not np.all(np.isfinite(rows[-1])):
            raise TableFormatError(lineno, "entries must be finite")

    if header_line is None:
        raise TableFormatError(0, "no column header found")
    if "n" not in meta or "gamma" not in meta:
        raise TableFormatError(1, "header must declare '# n:' and '# gamma:'")
    try:
        n = int(meta["n"])
        gamma = tuple(float(g) for g in meta["gamma"].replace(",", " ").split())
    except ValueError:
        raise TableFormatError(1, "could not read n or gamma from the header") from None
    if n < 1 or len(gamma) != n or any(not g > 0 for g in gamma):
        raise TableFormatError(1, f"gamma must list {n} positive entries")
    expected = [f"x{i + 1}" for i in range(n)] + ["value"]
    if header != expected:
        raise TableFormatError(header_line, f"column header must be {','.join(expected)}")
    if not rows:
        raise TableFormatError(header_line, "table has no data rows")

    data = np.array(rows)
    axes = []
    for i in range(n):
        axis = np.unique(data[:, i])
        if axis[0] < 0:
            bad = row_lines[int(np.argmax(data[:, i] < 0))]
            raise TableFormatError(bad, f"coordinate x{i + 1} is negative")
        axes.append(axis)
    size = int(np.prod([a.size for a in axes]))
    if size != len(rows):
        raise TableFormatError(row_lines[-1], f"{len(rows)} rows do not form a full {n}-D grid of {size} points")
    grids = np.meshgrid(*axes, indexing="ij")
    expected_pts = np.stack([g.ravel() for g in grids], axis=-1)
    mismatch = np.nonzero(np.any(expected_pts != data[:, :n], axis=1))[0]
    if mismatch.size:
        raise TableFormatError(row_lines[mismatch[0]], "rows are not in row-major grid order")
    try:
        table = GridTable(tuple(axes), data[:, n].reshape(tuple(a.size for a in axes)), gamma)
    except ValueError as exc:
        raise TableFormatError(0, str(exc)) from None
    return table, meta


def table_field(table: GridTable) -> EvenField:
    """Even spline interpolant of a table, zero beyond each axis' last node."""
    n = table.dim

    def func(pts):
        flat = np.abs(pts.reshape(-1, n))
        mats = [_even_spline_matrix(table.axes[i], flat[:, i]) for i in range(n)]
        out = table.values
        # contract the leading grid axis with the per-point weights, keep points aligned
        out = np.tensordot(mats[0], out, axes=(1, 0))
        for i in range(1, n):
            out = np.einsum("pk,pk...->p...", mats[i], out)
        return out.reshape(pts.shape[:-1])

    return EvenField(n, func, smoothness="smooth", name="table")
