"""CSV input of price series and CSV output of series and ensemble tables.

Every writer goes through :func:`atomic_write_rows`, which writes to a
temporary file in the target directory and renames it into place, so a
failed run never leaves a partial file behind.
"""

from __future__ import annotations

import csv
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import DataFormatError, DomainError
from .ensemble import PARAM_NAMES

__all__ = [
    "COORD_ORDER",
    "read_price_csv",
    "write_stats_csv",
    "write_series_csv",
    "atomic_write_rows",
    "format_float",
]

COORD_ORDER = ("N", "s", "r", "beta0")
_INT_COORDS = {"N", "s"}


def format_float(v: float) -> str:
    """17 significant digits in scientific notation."""
    return "%.16e" % v


def read_price_csv(path, column: str) -> np.ndarray:
    """Read one strictly positive price column from a headed CSV file.

    Rows keep file order. Line numbers in error messages count the header as
    line 1.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise DataFormatError(f"{path}: empty file, header row required")
        if column not in reader.fieldnames:
            raise DataFormatError(
                f"{path}: column {column!r} not found in header {reader.fieldnames}"
            )
        prices = []
        for row in reader:
            line = reader.line_num
            raw = row.get(column)
            if raw is None or raw.strip() == "":
                raise DataFormatError(f"{path}:{line}: missing value in column {column!r}")
            try:
                v = float(raw)
            except ValueError:
                raise DataFormatError(f"{path}:{line}: cannot parse {raw!r} as a number") from None
            if not math.isfinite(v):
                raise DataFormatError(f"{path}:{line}: non-finite price {raw!r}")
            if v <= 0:
                raise DomainError(f"{path}:{line}: price must be > 0, got {raw.strip()}")
            prices.append(v)
    if not prices:
        raise DataFormatError(f"{path}: no data rows")
    return np.array(prices)


def atomic_write_rows(path, header, rows) -> None:
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def write_series_csv(path, columns: dict) -> None:
    """Write equal-length 1-d arrays as columns, preceded by a 1-based index ``t``."""
    names = list(columns)
    arrays = [np.asarray(columns[k], dtype=float) for k in names]
    n = len(arrays[0])
    if any(len(a) != n for a in arrays):
        raise DomainError("all series columns must have the same length")
    rows = ([str(i + 1)] + [format_float(a[i]) for a in arrays] for i in range(n))
    atomic_write_rows(path, ["t"] + names, rows)


def _coord_str(name, value):
    return str(int(value)) if name in _INT_COORDS else format_float(float(value))


def write_stats_csv(stats, path) -> None:
    """One row per ensemble cell, sorted by cell coordinates.

    ``stats`` is a list of :class:`EnsembleStats` or a dict of them (as
    returned by ``detrend_experiment``).
    """
    cells = list(stats.values()) if isinstance(stats, dict) else list(stats)
    if not cells:
        raise DomainError("no statistics to write")
    coords = [c for c in COORD_ORDER if any(c in st.cell for st in cells)]
    unknown = {k for st in cells for k in st.cell} - set(COORD_ORDER)
    if unknown:
        raise DomainError(f"unknown cell coordinates {sorted(unknown)}")

    def sort_key(st):
        return tuple(st.cell.get(c, -math.inf) for c in coords)

    header = list(coords) + ["replicates_requested", "replicates_converged"]
    for p in PARAM_NAMES:
        header += [f"{p}_mean", f"{p}_std", f"{p}_relstd"]
    rows = []
    for st in sorted(cells, key=sort_key):
        row = [_coord_str(c, st.cell[c]) if c in st.cell else "" for c in coords]
        row += [str(st.replicates_requested), str(st.replicates_converged)]
        for p in PARAM_NAMES:
            row += [format_float(st.mean[p]), format_float(st.std[p]),
                    format_float(st.rel_std[p])]
        rows.append(row)
    atomic_write_rows(path, header, rows)
