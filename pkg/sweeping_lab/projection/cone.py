"""
Projection onto polyhedral cones {w : G_k . w >= 0} through the dual NNLS.
"""

from collections.abc import Sequence
from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import nnls

from ..errors import DimensionMismatchError, InvalidInputError
from ..types import as_vector


class ConeProjection(NamedTuple):
    v: NDArray[np.float64]
    lambdas: NDArray[np.float64]


def project_cone(
    gradients: Sequence[NDArray[np.float64]] | NDArray[np.float64],
    u: Sequence[float] | NDArray[np.float64],
) -> ConeProjection:
    """
    Project ``u`` onto K = {w : G_k . w >= 0 for all k}.

    The polar cone is {-sum lambda_k G_k, lambda >= 0}; its projection is found
    by the Lawson-Hanson active-set NNLS over lambda, so that
    v = u - P_polar(u) = u + G^T lambda and <v, u - v> = 0.

    Args:
        gradients: Constraint gradients G_k, one per row
        u: Vector to project

    Returns:
        ConeProjection: projected vector ``v`` and multipliers ``lambdas``

    Raises:
        InvalidInputError: If a gradient is zero
        DimensionMismatchError: If gradients and ``u`` differ in dimension
    """
    u = as_vector(u)
    g = np.asarray(gradients, dtype=np.float64)
    if g.size == 0:
        return ConeProjection(u.copy(), np.zeros(0))
    g = np.atleast_2d(g)
    if g.shape[1] != u.size:
        raise DimensionMismatchError(
            f"gradients have dimension {g.shape[1]}, vector has {u.size}"
        )
    if np.any(np.linalg.norm(g, axis=1) == 0.0):
        raise InvalidInputError("cone gradients must be nonzero")

    # Ties between duplicated gradients resolve by index order inside NNLS.
    lambdas, _ = nnls(-g.T, u, maxiter=max(50, 10 * g.shape[0]))
    v = u + g.T @ lambdas
    return ConeProjection(v, lambdas)
