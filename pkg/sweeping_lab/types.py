"""
Numpy-backed field types for the pydantic models.
"""

from collections.abc import Sequence
from typing import Annotated, Any

import numpy as np
from numpy.typing import NDArray
from pydantic import PlainSerializer, PlainValidator

from .errors import DimensionMismatchError, InvalidInputError


def _frozen_array(value: Any) -> NDArray[np.float64]:
    """Copy ``value`` into a read-only float64 array."""
    try:
        array = np.array(value, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise ValueError(f"expected a numeric array, got {value!r}") from e
    array.setflags(write=False)
    return array


def _vector(value: Any) -> NDArray[np.float64]:
    array = _frozen_array(value)
    if array.ndim != 1 or array.size < 1:
        raise ValueError("a vector needs at least one coordinate")
    if not np.all(np.isfinite(array)):
        raise ValueError("vector coordinates must be finite")
    return array


def _to_list(array: NDArray[Any]) -> list[Any]:
    return array.tolist()  # type: ignore[no-any-return]


FloatArray = Annotated[
    NDArray[np.float64],
    PlainValidator(_frozen_array),
    PlainSerializer(_to_list, return_type=list),
]

Vector = Annotated[
    NDArray[np.float64],
    PlainValidator(_vector),
    PlainSerializer(_to_list, return_type=list),
]


def as_vector(x: Sequence[float] | NDArray[np.float64], dim: int | None = None) -> NDArray[np.float64]:
    """
    Convert ``x`` to a finite float vector, optionally checking its dimension.

    Raises:
        InvalidInputError: If ``x`` is not a finite 1-D array
        DimensionMismatchError: If ``dim`` is given and does not match
    """
    try:
        array = np.asarray(x, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise InvalidInputError(f"expected a numeric vector, got {x!r}") from e
    if array.ndim != 1 or array.size < 1 or not np.all(np.isfinite(array)):
        raise InvalidInputError("a vector must be 1-D, nonempty and finite")
    if dim is not None and array.size != dim:
        raise DimensionMismatchError(
            f"expected a vector of dimension {dim}, got {array.size}"
        )
    return array


def _int_array(value: Any) -> NDArray[np.int8]:
    try:
        array = np.array(value, dtype=np.int8)
    except (TypeError, ValueError) as e:
        raise ValueError(f"expected an integer array, got {value!r}") from e
    array.setflags(write=False)
    return array


IntArray = Annotated[
    NDArray[np.int8],
    PlainValidator(_int_array),
    PlainSerializer(_to_list, return_type=list),
]
