"""
Duality maps J_p(x) = grad(|x|_p^p / p) of finite-dimensional l_p spaces.
"""

from collections.abc import Sequence
from typing import Annotated

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field

from ..errors import InvalidInputError
from ..types import as_vector

Array = NDArray[np.float64]


class PNormSpace(BaseModel):
    """R^dim with the l_p norm, p in [2, inf)."""

    model_config = ConfigDict(frozen=True)

    dim: Annotated[int, Field(ge=1)]
    p: Annotated[float, Field(ge=2, allow_inf_nan=False)]

    @property
    def conjugate(self) -> float:
        return self.p / (self.p - 1.0)


def norm(space: PNormSpace, x: Sequence[float] | Array) -> float:
    x = as_vector(x, space.dim)
    largest = float(np.max(np.abs(x)))
    if largest == 0.0:
        return 0.0
    # |x_k|^p overflows quickly for large p unless x is rescaled first.
    return largest * float(np.linalg.norm(x / largest, ord=space.p))


def dual_norm(space: PNormSpace, xi: Sequence[float] | Array) -> float:
    """Norm of the dual space, the l_q norm with 1/p + 1/q = 1."""
    xi = as_vector(xi, space.dim)
    return float(np.linalg.norm(xi, ord=space.conjugate))


def jp(space: PNormSpace, x: Sequence[float] | Array) -> Array:
    """
    Component k is sign(x_k) |x_k|^{p-1}; J_2 is the identity and J_p(0) = 0.
    """
    x = as_vector(x, space.dim)
    if space.p == 2.0:
        return np.array(x)
    return np.sign(x) * np.abs(x) ** (space.p - 1.0)


def norm_gradient(space: PNormSpace, x: Sequence[float] | Array) -> Array:
    """
    Gradient of the l_p norm, J_p(x) / |x|_p^{p-1}.

    Its pairing with x is |x|_p and its dual norm is 1.

    Raises:
        InvalidInputError: If x = 0, where the norm is not differentiable
    """
    x = as_vector(x, space.dim)
    value = norm(space, x)
    if value == 0.0:
        raise InvalidInputError("the norm is not differentiable at the origin")
    # Rescale first so |x_k|^{p-1} cannot overflow for large p.
    return jp(space, x / value)
