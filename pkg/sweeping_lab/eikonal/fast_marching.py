"""
First-order fast marching for |grad T| = 1, an 8-neighbour Dijkstra oracle, and
the spontaneous velocity -grad T / |grad T|.
"""

import heapq
import logging
import math
from collections.abc import Iterator, Sequence
from typing import Final, NamedTuple

import numpy as np
from numpy.typing import NDArray

from ..errors import InvalidInputError
from .models import EXIT, FREE, OBSTACLE, GridField, Room

AXIS_STEPS: Final[tuple[tuple[int, int], ...]] = ((1, 0), (-1, 0), (0, 1), (0, -1))
DIAGONAL_STEPS: Final[tuple[tuple[int, int], ...]] = ((1, 1), (1, -1), (-1, 1), (-1, -1))

Mask = NDArray[np.int8]
Values = NDArray[np.float64]

logger = logging.getLogger(__name__)


class MarchResult(NamedTuple):
    values: Values
    order: list[tuple[int, int]]


def rasterize_room(room: Room) -> Mask:
    """
    Cell mask of ``room``: obstacle iff the node lies in a rectangle, exit iff it
    is within half a spacing of an exit segment (obstacles win).
    """
    nx, ny = room.shape
    x, y = np.meshgrid(
        np.arange(nx) * room.spacing, np.arange(ny) * room.spacing, indexing="ij"
    )
    points = np.stack([x, y], axis=-1)
    mask = np.full((nx, ny), FREE, dtype=np.int8)
    for exit_ in room.exits:
        mask[exit_.distance(points) <= 0.5 * room.spacing + 1e-12] = EXIT
    for o in room.obstacles:
        inside = (o.x_min <= x) & (x <= o.x_max) & (o.y_min <= y) & (y <= o.y_max)
        mask[inside] = OBSTACLE
    return mask


def _check_mask(mask: Mask) -> Mask:
    mask = np.asarray(mask, dtype=np.int8)
    if mask.ndim != 2:
        raise InvalidInputError("the cell mask must be a 2-D array")
    if not np.all(np.isin(mask, (FREE, OBSTACLE, EXIT))):
        raise InvalidInputError("mask entries must be free, obstacle or exit")
    if not np.any(mask == EXIT):
        raise InvalidInputError("the room has no exit cell")
    return mask


def _neighbours(
    mask: Mask, i: int, j: int, steps: Sequence[tuple[int, int]]
) -> Iterator[tuple[int, int]]:
    nx, ny = mask.shape
    for di, dj in steps:
        a, b = i + di, j + dj
        if 0 <= a < nx and 0 <= b < ny and mask[a, b] != OBSTACLE:
            yield a, b


def _upwind_update(values: Values, accepted: NDArray[np.bool_], i: int, j: int, h: float) -> float:
    nx, ny = values.shape

    def smallest(pairs: Sequence[tuple[int, int]]) -> float:
        best = math.inf
        for a, b in pairs:
            if 0 <= a < nx and 0 <= b < ny and accepted[a, b]:
                best = min(best, float(values[a, b]))
        return best

    tx = smallest(((i - 1, j), (i + 1, j)))
    ty = smallest(((i, j - 1), (i, j + 1)))
    low, high = min(tx, ty), max(tx, ty)
    if math.isinf(high) or high - low >= h:
        return low + h
    return 0.5 * (low + high + math.sqrt(2.0 * h * h - (high - low) ** 2))


def fast_marching(mask: Mask, spacing: float) -> MarchResult:
    """
    Fast marching from the exit cells with a binary heap.

    Returns:
        MarchResult: distance values and the order in which nodes were accepted

    Raises:
        InvalidInputError: If the mask is malformed or has no exit
    """
    mask = _check_mask(mask)
    if spacing <= 0:
        raise InvalidInputError("grid spacing must be positive")
    values = np.full(mask.shape, math.inf)
    accepted = np.zeros(mask.shape, dtype=bool)
    heap: list[tuple[float, int, int]] = []
    for i, j in zip(*np.nonzero(mask == EXIT), strict=True):
        values[i, j] = 0.0
        heapq.heappush(heap, (0.0, int(i), int(j)))

    order: list[tuple[int, int]] = []
    while heap:
        value, i, j = heapq.heappop(heap)
        if accepted[i, j] or value > values[i, j]:
            continue
        accepted[i, j] = True
        order.append((i, j))
        for a, b in _neighbours(mask, i, j, AXIS_STEPS):
            if accepted[a, b]:
                continue
            candidate = _upwind_update(values, accepted, a, b, spacing)
            if candidate < values[a, b]:
                values[a, b] = candidate
                heapq.heappush(heap, (candidate, a, b))
    return MarchResult(values, order)


def solve_eikonal(
    mask: Mask, spacing: float, origin: Sequence[float] = (0.0, 0.0)
) -> GridField:
    """
    Distance to the exit for every node of ``mask``.

    Raises:
        InvalidInputError: If the mask has no exit cell
    """
    values, order = fast_marching(mask, spacing)
    unreachable = int(np.count_nonzero(np.isinf(values) & (np.asarray(mask) != OBSTACLE)))
    if unreachable:
        logger.warning(f"{unreachable} free cells cannot reach any exit")
    logger.info(f"fast marching accepted {len(order)} nodes on a {values.shape} grid")
    return GridField(origin=list(origin), spacing=spacing, values=values, mask=mask)


def solve_room(room: Room) -> GridField:
    return solve_eikonal(rasterize_room(room), room.spacing)


def dijkstra_distance(mask: Mask, spacing: float) -> Values:
    """
    Shortest 8-neighbour path length to an exit.

    Diagonal moves that would cut an obstacle corner are not allowed.
    """
    mask = _check_mask(mask)
    values = np.full(mask.shape, math.inf)
    heap: list[tuple[float, int, int]] = []
    for i, j in zip(*np.nonzero(mask == EXIT), strict=True):
        values[i, j] = 0.0
        heapq.heappush(heap, (0.0, int(i), int(j)))

    diagonal = math.sqrt(2.0) * spacing
    while heap:
        value, i, j = heapq.heappop(heap)
        if value > values[i, j]:
            continue
        for a, b in _neighbours(mask, i, j, AXIS_STEPS):
            if value + spacing < values[a, b]:
                values[a, b] = value + spacing
                heapq.heappush(heap, (value + spacing, a, b))
        for a, b in _neighbours(mask, i, j, DIAGONAL_STEPS):
            if mask[a, j] == OBSTACLE or mask[i, b] == OBSTACLE:
                continue
            if value + diagonal < values[a, b]:
                values[a, b] = value + diagonal
                heapq.heappush(heap, (value + diagonal, a, b))
    return values


def _one_sided(field: GridField, i: int, j: int, axis: int) -> float:
    """Upwind difference of T along ``axis`` at node (i, j)."""
    values, mask = field.values, field.mask
    here = float(values[i, j])
    best_slope, best_value = 0.0, here
    for sign in (-1, 1):
        a, b = (i + sign, j) if axis == 0 else (i, j + sign)
        if not (0 <= a < values.shape[0] and 0 <= b < values.shape[1]):
            continue
        if mask[a, b] == OBSTACLE or not math.isfinite(values[a, b]):
            continue
        if values[a, b] < best_value:
            best_value = float(values[a, b])
            best_slope = sign * (best_value - here) / field.spacing
    return best_slope


def node_gradient(field: GridField, i: int, j: int) -> NDArray[np.float64]:
    if field.mask[i, j] == EXIT:
        return np.zeros(2)
    return np.array([_one_sided(field, i, j, 0), _one_sided(field, i, j, 1)])


def _usable(field: GridField, i: int, j: int) -> bool:
    return field.mask[i, j] != OBSTACLE and math.isfinite(field.values[i, j])


def spontaneous_velocity(field: GridField, pos: Sequence[float] | NDArray[np.float64]) -> NDArray[np.float64]:
    """
    Unit vector -grad T / |grad T| at ``pos``, zero on exit cells.

    Node gradients are upwind one-sided differences; off-grid positions use
    bilinear weights over the surrounding usable nodes.

    Raises:
        InvalidInputError: If ``pos`` is outside the grid, in an obstacle or unreachable
    """
    nx, ny = field.dimensions
    local = (np.asarray(pos, dtype=np.float64) - field.origin) / field.spacing
    if local.shape != (2,) or not np.all(np.isfinite(local)):
        raise InvalidInputError("position must be a finite planar point")
    if np.any(local < -0.5) or local[0] > nx - 0.5 or local[1] > ny - 0.5:
        raise InvalidInputError(f"position {list(pos)} lies outside the grid")

    ci = min(max(int(round(local[0])), 0), nx - 1)
    cj = min(max(int(round(local[1])), 0), ny - 1)
    if not _usable(field, ci, cj):
        raise InvalidInputError(f"position {list(pos)} is in an obstacle or unreachable cell")
    if field.mask[ci, cj] == EXIT:
        return np.zeros(2)

    i0 = min(max(int(math.floor(local[0])), 0), max(nx - 2, 0))
    j0 = min(max(int(math.floor(local[1])), 0), max(ny - 2, 0))
    fx = min(max(local[0] - i0, 0.0), 1.0)
    fy = min(max(local[1] - j0, 0.0), 1.0)
    gradient = np.zeros(2)
    for a, wa in ((i0, 1.0 - fx), (i0 + 1, fx)):
        for b, wb in ((j0, 1.0 - fy), (j0 + 1, fy)):
            if a < nx and b < ny and wa * wb > 0.0 and _usable(field, a, b):
                gradient += wa * wb * node_gradient(field, a, b)

    norm = float(np.linalg.norm(gradient))
    if norm <= 1e-12:
        gradient = node_gradient(field, ci, cj)
        norm = float(np.linalg.norm(gradient))
        if norm == 0.0:
            return np.zeros(2)
    return -gradient / norm
