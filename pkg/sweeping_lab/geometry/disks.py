"""
Constraint kernels of the disk-configuration set.

Constraints are ordered pairs first (i < j, lexicographic) and walls next, in
the order they were declared. Every constraint is written g(q) >= 0.
"""

from functools import lru_cache

import numpy as np
from numpy.typing import NDArray

from ..errors import InvalidInputError
from .models import DiskConfigurationSet


@lru_cache(maxsize=64)
def pair_indices(n_disks: int) -> tuple[tuple[int, int], ...]:
    """All pairs (i, j) with i < j."""
    return tuple((i, j) for i in range(n_disks) for j in range(i + 1, n_disks))


def centers(q: NDArray[np.float64]) -> NDArray[np.float64]:
    return q.reshape(-1, 2)


def constraint_labels(disk_set: DiskConfigurationSet) -> list[str]:
    labels = [f"contact({i},{j})" for i, j in pair_indices(disk_set.n_disks)]
    labels += [
        f"wall(disk={w.disk},{w.axis} {'>=' if w.side == 'lower' else '<='} {w.value})"
        for w in disk_set.walls
    ]
    return labels


def constraint_values(
    disk_set: DiskConfigurationSet, q: NDArray[np.float64]
) -> NDArray[np.float64]:
    """Values of D_ij(q) for every pair followed by the wall slacks."""
    c = centers(q)
    pairs = pair_indices(disk_set.n_disks)
    values = np.empty(len(pairs) + len(disk_set.walls))
    for k, (i, j) in enumerate(pairs):
        values[k] = float(np.linalg.norm(c[i] - c[j])) - 2.0 * disk_set.radius
    offset = len(pairs)
    for k, wall in enumerate(disk_set.walls):
        coordinate = q[wall.coordinate]
        slack = coordinate - wall.value if wall.side == "lower" else wall.value - coordinate
        values[offset + k] = slack
    return values


def constraint_jacobian(
    disk_set: DiskConfigurationSet, q: NDArray[np.float64]
) -> NDArray[np.float64]:
    """
    Gradients of the constraints, one row each.

    Pair rows are G_ij = (.., -e_ij, .., e_ij, ..) with e_ij = (q_j - q_i)/|q_j - q_i|;
    wall rows are signed unit coordinate vectors.

    Raises:
        InvalidInputError: If two centers coincide (the gradient is undefined)
    """
    c = centers(q)
    pairs = pair_indices(disk_set.n_disks)
    jac = np.zeros((len(pairs) + len(disk_set.walls), q.size))
    for k, (i, j) in enumerate(pairs):
        d = c[j] - c[i]
        norm = float(np.linalg.norm(d))
        if norm == 0.0:
            raise InvalidInputError(f"disks {i} and {j} have coincident centers")
        e = d / norm
        jac[k, 2 * i : 2 * i + 2] = -e
        jac[k, 2 * j : 2 * j + 2] = e
    offset = len(pairs)
    for k, wall in enumerate(disk_set.walls):
        jac[offset + k, wall.coordinate] = 1.0 if wall.side == "lower" else -1.0
    return jac
