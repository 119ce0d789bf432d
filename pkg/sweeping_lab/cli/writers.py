"""
CSV and JSON writers for trajectories, convergence tables, fields and reports.

Floats are written as shortest round-trip decimals so repeated runs diff cleanly.
"""

import csv
import logging
from collections.abc import Iterable, Sequence
from pathlib import Path

import numpy as np
from pydantic import BaseModel

from ..catchup.models import ConvergenceTable, Trajectory
from ..eikonal.models import EXIT, FREE, OBSTACLE, GridField

logger = logging.getLogger(__name__)


def format_float(value: float) -> str:
    return repr(float(value))


def _write_rows(path: Path, header: Sequence[str], rows: Iterable[Sequence[str]]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    logger.info(f"wrote {path}")


def trajectory_rows(trajectory: Trajectory) -> list[list[str]]:
    """
    One row per grid time: t, u^i, Delta^i.

    The last grid time has no step of its own and repeats the last Delta.
    """
    rows = []
    for i, t in enumerate(trajectory.times):
        delta = trajectory.deltas[min(i, trajectory.n - 1)]
        rows.append(
            [format_float(t)]
            + [format_float(x) for x in trajectory.states[i]]
            + [format_float(x) for x in delta]
        )
    return rows


def write_trajectory_csv(path: Path, trajectory: Trajectory) -> None:
    d = trajectory.dim
    header = ["t", *(f"u_{k}" for k in range(1, d + 1)), *(f"delta_{k}" for k in range(1, d + 1))]
    _write_rows(path, header, trajectory_rows(trajectory))


def write_frames_csv(path: Path, trajectory: Trajectory) -> None:
    """Crowd frames: t, q_1x, q_1y, ..., q_Nx, q_Ny."""
    header = ["t"]
    for disk in range(1, trajectory.dim // 2 + 1):
        header += [f"q_{disk}x", f"q_{disk}y"]
    rows = (
        [format_float(t), *(format_float(x) for x in state)]
        for t, state in zip(trajectory.times, trajectory.states, strict=True)
    )
    _write_rows(path, header, rows)


def write_convergence_csv(path: Path, table: ConvergenceTable) -> None:
    order = "exact" if table.exact else (
        "" if table.fitted_order is None else format_float(table.fitted_order)
    )
    rows = ([str(row.n), format_float(row.gap), order] for row in table.rows)
    _write_rows(path, ["n", "gap", "fitted_order"], rows)


def write_field_csv(path: Path, field: GridField) -> None:
    """One row per y index j, listing T(x_i, y_j) for increasing i; unreachable nodes read inf."""
    nx, ny = field.dimensions
    header = [format_float(field.origin[0] + i * field.spacing) for i in range(nx)]
    rows = ([format_float(v) for v in field.values[:, j]] for j in range(ny))
    _write_rows(path, header, rows)


class FieldSummary(BaseModel):
    """Metadata written next to ``field.csv``."""

    origin: list[float]
    spacing: float
    nx: int
    ny: int
    free_nodes: int
    obstacle_nodes: int
    exit_nodes: int
    unreachable_nodes: int
    max_distance: float | None


def field_summary(field: GridField) -> FieldSummary:
    values, mask = field.values, np.asarray(field.mask)
    finite = values[np.isfinite(values)]
    nx, ny = field.dimensions
    return FieldSummary(
        origin=field.origin.tolist(),
        spacing=field.spacing,
        nx=nx,
        ny=ny,
        free_nodes=int(np.count_nonzero(mask == FREE)),
        obstacle_nodes=int(np.count_nonzero(mask == OBSTACLE)),
        exit_nodes=int(np.count_nonzero(mask == EXIT)),
        unreachable_nodes=int(np.count_nonzero(np.isinf(values) & (mask != OBSTACLE))),
        max_distance=float(finite.max()) if finite.size else None,
    )


def write_json(path: Path, payload: BaseModel) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(payload.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info(f"wrote {path}")
