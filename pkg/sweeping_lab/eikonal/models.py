"""
Room descriptions and distance-to-exit grid fields.
"""

import math
from typing import Annotated, Final

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..types import FloatArray, IntArray, Vector

FREE: Final[int] = 0
OBSTACLE: Final[int] = 1
EXIT: Final[int] = 2

MODEL_CONFIG = ConfigDict(frozen=True, arbitrary_types_allowed=True, extra="forbid")


class Rectangle(BaseModel):
    """Axis-aligned obstacle [x_min, x_max] x [y_min, y_max]."""

    model_config = MODEL_CONFIG

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    @model_validator(mode="after")
    def _check_order(self) -> "Rectangle":
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise ValueError("rectangle corners are out of order")
        return self


class Segment(BaseModel):
    """Exit segment between two points of the plane."""

    model_config = MODEL_CONFIG

    start: Vector
    end: Vector

    @model_validator(mode="after")
    def _check_planar(self) -> "Segment":
        if self.start.size != 2 or self.end.size != 2:
            raise ValueError("exit segments are planar")
        return self

    def distance(self, points: np.ndarray) -> np.ndarray:
        """Distance from each point (last axis of size 2) to the segment."""
        direction = self.end - self.start
        length2 = float(np.dot(direction, direction))
        offset = points - self.start
        s = np.zeros(points.shape[:-1]) if length2 == 0.0 else offset @ direction / length2
        s = np.clip(s, 0.0, 1.0)[..., None]
        return np.linalg.norm(offset - s * direction, axis=-1)


class Room(BaseModel):
    """
    Rectangular room [0, width] x [0, height] sampled at nodes i * spacing.
    """

    model_config = MODEL_CONFIG

    width: Annotated[float, Field(gt=0, allow_inf_nan=False)]
    height: Annotated[float, Field(gt=0, allow_inf_nan=False)]
    spacing: Annotated[float, Field(gt=0, allow_inf_nan=False)]
    obstacles: list[Rectangle] = Field(default_factory=list)
    exits: Annotated[list[Segment], Field(min_length=1)]

    @property
    def shape(self) -> tuple[int, int]:
        return (
            int(math.floor(self.width / self.spacing + 1e-9)) + 1,
            int(math.floor(self.height / self.spacing + 1e-9)) + 1,
        )


class GridField(BaseModel):
    """
    Distance-to-exit values on a regular grid, indexed [i, j] with x = origin + i dx.

    Exit nodes hold 0, obstacle nodes and nodes cut off from every exit hold inf.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    origin: Vector
    spacing: Annotated[float, Field(gt=0)]
    values: FloatArray
    mask: IntArray

    @model_validator(mode="after")
    def _check_shapes(self) -> "GridField":
        if self.values.shape != self.mask.shape or self.values.ndim != 2:
            raise ValueError("values and mask must be 2-D arrays of the same shape")
        return self

    @property
    def dimensions(self) -> tuple[int, int]:
        nx, ny = self.values.shape
        return int(nx), int(ny)

    def node_position(self, i: int, j: int) -> np.ndarray:
        return self.origin + self.spacing * np.array([i, j], dtype=np.float64)
