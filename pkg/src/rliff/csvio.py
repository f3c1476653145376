"""Trajectory CSV reading/writing and atomic output files.

Schema: header ``t,x_true,y_true,x_rssi,y_rssi,x_pdr,y_pdr,x_aoa,y_aoa``,
comma separated, LF line endings, no quoting, positions with 6 decimals.
"""

from __future__ import annotations

import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .core import REPLAY, Trajectory

HEADER = ("t", "x_true", "y_true", "x_rssi", "y_rssi", "x_pdr", "y_pdr", "x_aoa", "y_aoa")


class SchemaError(ValueError):
    pass


def atomic_write(path: str | Path, text: str) -> None:
    """Write ``text`` to a temp file next to ``path`` and rename it into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_trajectory(trajectory: Trajectory) -> str:
    lines = [",".join(HEADER)]
    for r in trajectory.records:
        coords = (r.truth, r.rssi, r.pdr, r.aoa)
        # +0.0 turns a -0.0 into 0.0 so signs never depend on round-off
        cells = [f"{v + 0.0:.6f}" for p in coords for v in (p.x, p.y)]
        lines.append(",".join([str(r.t), *cells]))
    return "\n".join(lines) + "\n"


def write_trajectory_csv(path: str | Path, trajectory: Trajectory) -> None:
    atomic_write(path, format_trajectory(trajectory))


def parse_trajectory(text: str, env_id: str = REPLAY, scenario: str = REPLAY) -> Trajectory:
    """Parse CSV text; row numbers in errors count the header as row 1."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise SchemaError("row 1: empty file, expected header")
    header = tuple(c.strip() for c in lines[0].rstrip("\r").split(","))
    if header != HEADER:
        raise SchemaError(f"row 1: bad header {','.join(header)!r}, expected {','.join(HEADER)!r}")
    ts: list[int] = []
    rows: list[list[float]] = []
    for i, line in enumerate(lines[1:], start=2):
        cells = line.rstrip("\r").split(",")
        if len(cells) != len(HEADER):
            raise SchemaError(f"row {i}: expected {len(HEADER)} fields, got {len(cells)}")
        try:
            t = int(cells[0])
        except ValueError:
            raise SchemaError(f"row {i}: timestamp {cells[0]!r} is not an integer") from None
        if t < 0:
            raise SchemaError(f"row {i}: negative timestamp {t}")
        if ts and t <= ts[-1]:
            raise SchemaError(f"row {i}: timestamp {t} does not increase (previous {ts[-1]})")
        vals = []
        for name, cell in zip(HEADER[1:], cells[1:]):
            try:
                v = float(cell)
            except ValueError:
                raise SchemaError(f"row {i}: {name} value {cell!r} is not a number") from None
            if not math.isfinite(v):
                raise SchemaError(f"row {i}: {name} value {cell!r} is not finite")
            vals.append(v)
        ts.append(t)
        rows.append(vals)
    if not rows:
        raise SchemaError("no data rows")
    a = np.array(rows)
    return Trajectory.from_arrays(env_id, scenario, a[:, 0:2], a[:, 2:4], a[:, 4:6], a[:, 6:8], t=ts)


def read_trajectory_csv(path: str | Path, env_id: str = REPLAY, scenario: str = REPLAY) -> Trajectory:
    with open(path, newline="") as f:
        return parse_trajectory(f.read(), env_id, scenario)
