"""
Contacts between disks and the projection of desired velocities onto the
feasible cone C_q = {v : G_k . v >= 0 for every active constraint k}.
"""

import logging
from collections.abc import Sequence

import numpy as np
from numpy.typing import NDArray

from ..errors import InvalidInputError
from ..geometry.disks import (
    centers,
    constraint_jacobian,
    constraint_labels,
    constraint_values,
    pair_indices,
)
from ..geometry.models import DiskConfigurationSet
from ..geometry.sets import member
from ..projection.cone import project_cone
from ..settings import tolerance_settings
from ..types import as_vector
from .models import ActualVelocity, ContactBasis, DiskConfiguration

logger = logging.getLogger(__name__)


def signed_distance(
    q: Sequence[float] | NDArray[np.float64], i: int, j: int, radius: float
) -> float:
    """
    D_ij(q) = |q_i - q_j| - 2 r.

    Raises:
        InvalidInputError: If i == j, an index is out of range or the centers coincide
    """
    c = centers(as_vector(q))
    if i == j or not (0 <= i < len(c) and 0 <= j < len(c)):
        raise InvalidInputError(f"invalid disk pair ({i}, {j}) for {len(c)} disks")
    gap = float(np.linalg.norm(c[i] - c[j]))
    if gap == 0.0:
        raise InvalidInputError(f"disks {i} and {j} have coincident centers")
    return gap - 2.0 * radius


def contact_basis(config: DiskConfiguration, tol_active: float | None = None) -> ContactBasis:
    """
    Constraints of ``config`` with value at most ``tol_active`` and their gradients.

    Raises:
        InvalidInputError: If the configuration is infeasible or two centers coincide
    """
    tol = tolerance_settings.tol_active if tol_active is None else tol_active
    set_ = config.feasible_set
    if not member(set_, config.q):
        raise InvalidInputError("contact bases are only defined at feasible configurations")

    return active_constraints(set_, config.q, tol)


def active_constraints(
    set_: DiskConfigurationSet, q: NDArray[np.float64], tol: float
) -> ContactBasis:
    """Constraints with value at most ``tol``, violated ones included."""
    values = constraint_values(set_, q)
    jacobian = constraint_jacobian(set_, q)
    labels = constraint_labels(set_)
    active = np.flatnonzero(values <= tol)
    pairs = pair_indices(set_.n_disks)
    return ContactBasis(
        pairs=[pairs[k] for k in active if k < len(pairs)],
        walls=[int(k - len(pairs)) for k in active if k >= len(pairs)],
        labels=[labels[k] for k in active],
        gradients=jacobian[active].reshape(len(active), q.size),
        values=values[active],
    )


def actual_velocity(
    config: DiskConfiguration, desired: Sequence[float] | NDArray[np.float64]
) -> ActualVelocity:
    """
    The feasible velocity closest to ``desired`` in the least-squares sense.

    Returns:
        ActualVelocity: v = P_{C_q}(U), the multipliers and the contact basis used
    """
    u = as_vector(desired, config.q.size)
    basis = contact_basis(config)
    projection = project_cone(basis.gradients, u)
    if basis.size:
        logger.debug(
            f"{basis.size} active contacts, multipliers {projection.lambdas.tolist()}"
        )
    return ActualVelocity(v=projection.v, lambdas=projection.lambdas, basis=basis)
