"""Trajectory CSV import and export.

File format: a header row ``traj_id,t,y1,...,y{n_y}`` followed by one row
per measurement, sorted by (traj_id, t). The time column holds step * dt
in seconds. Floats are written with 17 significant digits, which round-trips
IEEE doubles exactly.
"""

from __future__ import annotations

import csv

import numpy as np

from .trajectories import SampleSet, Trajectory


class TrajectoryFormatError(ValueError):
    """Raised for malformed trajectory CSV files."""


def _format_float(x: float) -> str:
    return format(x, ".17g")


def save_sample_set_csv(path, sample_set: SampleSet) -> None:
    """Write a sample set in the trajectory CSV format."""
    n_y = sample_set.n_y
    dt = sample_set.dt
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["traj_id", "t"] + [f"y{k + 1}" for k in range(n_y)])
        for traj_id, traj in enumerate(sample_set.trajectories):
            for step, row in enumerate(traj.values):
                writer.writerow([str(traj_id), _format_float(step * dt)] + [_format_float(v) for v in row])


def load_sample_set_csv(path, label: str | None = None) -> SampleSet:
    """Read a sample set from the trajectory CSV format.

    Trajectories are grouped by the traj_id column (in order of first
    appearance); all groups must have the same length and a uniform time
    grid. Errors name the offending trajectory, row, or column.
    """
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise TrajectoryFormatError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if len(header) < 3 or header[0] != "traj_id" or header[1] != "t":
            raise TrajectoryFormatError(
                f"{path}: header must be traj_id,t,y1,...  got {','.join(header)}"
            )
        expected_y = [f"y{k + 1}" for k in range(len(header) - 2)]
        if header[2:] != expected_y:
            raise TrajectoryFormatError(
                f"{path}: output columns must be {','.join(expected_y)}, got {','.join(header[2:])}"
            )
        n_y = len(header) - 2
        groups: dict[str, list[tuple[float, list[float]]]] = {}
        order: list[str] = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != n_y + 2:
                raise TrajectoryFormatError(f"{path}:{line_no}: expected {n_y + 2} fields, got {len(row)}")
            traj_id = row[0]
            parsed = []
            for col_idx, cell in enumerate(row[1:], start=2):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise TrajectoryFormatError(
                        f"{path}:{line_no}: column {header[col_idx - 1]} holds non-numeric value {cell!r}"
                    ) from None
            if traj_id not in groups:
                groups[traj_id] = []
                order.append(traj_id)
            groups[traj_id].append((parsed[0], parsed[1:]))
        if not groups:
            raise TrajectoryFormatError(f"{path}: no data rows")

    lengths = {tid: len(rows) for tid, rows in groups.items()}
    expected_len = lengths[order[0]]
    ragged = [tid for tid in order if lengths[tid] != expected_len]
    if ragged:
        raise TrajectoryFormatError(
            f"{path}: ragged trajectories {ragged} "
            f"(have {[lengths[t] for t in ragged]} rows, expected {expected_len} like trajectory {order[0]})"
        )

    times = np.asarray([t for t, _ in groups[order[0]]])
    dt = float(times[1] - times[0]) if len(times) > 1 else 1.0
    if dt <= 0:
        raise TrajectoryFormatError(f"{path}: time column of trajectory {order[0]} is not increasing")
    for tid in order:
        ts = np.asarray([t for t, _ in groups[tid]])
        expected = np.arange(len(ts)) * dt
        if np.max(np.abs(ts - expected)) > 1e-9 * max(1.0, float(np.max(np.abs(expected)))):
            raise TrajectoryFormatError(
                f"{path}: trajectory {tid} has a non-uniform or misaligned time grid"
            )

    trajectories = tuple(
        Trajectory(np.asarray([vals for _, vals in groups[tid]], dtype=float), dt) for tid in order
    )
    return SampleSet(trajectories, label=label if label is not None else "")
