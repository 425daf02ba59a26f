"""Header-checked CSV reading for figure inputs."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np


class MissingColumnError(ValueError):
    """An input CSV lacks a column the figure needs."""


def read_columns(path, required: tuple[str, ...]) -> dict[str, np.ndarray]:
    """Float columns of ``path``, verifying the ``required`` names exist.

    Input files are read only, never modified.  Extra numeric columns are
    returned as well (scripts may plot optional ones such as standard
    errors); extra non-numeric columns are skipped, but a non-numeric
    required column is an error.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise MissingColumnError(
                f"{path}: empty file, expected columns {', '.join(required)}"
            )
        missing = [name for name in required if name not in header]
        if missing:
            raise MissingColumnError(
                f"{path}: missing column(s) {', '.join(missing)}; "
                f"found {', '.join(header)}"
            )
        rows = [row for row in reader if row]
    data: dict[str, np.ndarray] = {}
    for j, name in enumerate(header):
        try:
            data[name] = np.array([float(row[j]) for row in rows])
        except (ValueError, IndexError):
            if name in required:
                raise ValueError(f"{path}: column '{name}' is not numeric") from None
    return data
