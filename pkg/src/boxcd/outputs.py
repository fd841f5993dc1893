"""CSV/JSON output conventions shared by the CLI and the studies.

Floats are rendered with ``repr``, giving the shortest decimal string that
round-trips to the same binary value, so equal runs produce byte-identical
files.  CSVs are UTF-8, header first, newline-terminated.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

__all__ = [
    "fmt",
    "write_csv",
    "read_csv_columns",
    "write_json",
    "write_dataset_csv",
    "read_matrix_csv",
]


def fmt(value) -> str:
    """Round-trip text for one cell."""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if value is None:
        return ""
    return repr(float(value))


def write_csv(path, header, rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def read_csv_columns(path) -> tuple[list[str], np.ndarray]:
    """Header plus a float matrix (rows x columns)."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty CSV")
    header = lines[0].split(",")
    data = np.array([[float(cell) for cell in ln.split(",")] for ln in lines[1:]],
                    dtype=float).reshape(len(lines) - 1, len(header))
    return header, data


def write_json(path, obj) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_dataset_csv(path, data, prefix: str = "y") -> None:
    """Simulated dataset as CSV with a one-line header."""
    arr = np.asarray(data)
    if arr.ndim == 1:
        header = [prefix]
        rows = ([v] for v in arr)
    else:
        header = [f"{prefix}{j + 1}" for j in range(arr.shape[1])]
        rows = arr
    write_csv(path, header, rows)


def read_matrix_csv(path) -> np.ndarray:
    _, data = read_csv_columns(path)
    return data
