"""
Crowd data models: configurations, contact bases and simulation outputs.
"""

import math
from typing import Annotated

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..catchup.models import Trajectory
from ..geometry.models import DiskConfigurationSet, Wall
from ..projection.models import ProjectionResult
from ..types import FloatArray, Vector

MODEL_CONFIG = ConfigDict(frozen=True, arbitrary_types_allowed=True)


class DiskConfiguration(BaseModel):
    """Centers q = (q_1x, q_1y, ..., q_Nx, q_Ny) of N disks of a common radius."""

    model_config = MODEL_CONFIG

    q: Vector
    radius: Annotated[float, Field(gt=0, allow_inf_nan=False)]
    walls: list[Wall] = Field(default_factory=list)
    prox_constant: Annotated[float, Field(gt=0)] = math.inf

    @model_validator(mode="after")
    def _check_even(self) -> "DiskConfiguration":
        if self.q.size % 2:
            raise ValueError("a configuration needs two coordinates per disk")
        return self

    @property
    def n_disks(self) -> int:
        return int(self.q.size // 2)

    @property
    def feasible_set(self) -> DiskConfigurationSet:
        return DiskConfigurationSet(
            n_disks=self.n_disks,
            radius=self.radius,
            walls=self.walls,
            prox_constant=self.prox_constant,
        )

    def moved(self, q: np.ndarray) -> "DiskConfiguration":
        return DiskConfiguration(
            q=q, radius=self.radius, walls=self.walls, prox_constant=self.prox_constant
        )


class ContactBasis(BaseModel):
    """Active constraints at a configuration and their gradients, one row each."""

    model_config = MODEL_CONFIG

    pairs: list[tuple[int, int]]
    walls: list[int] = Field(description="Indices of the active walls")
    labels: list[str]
    gradients: FloatArray
    values: FloatArray

    @property
    def size(self) -> int:
        return len(self.labels)


class ActualVelocity(BaseModel):
    """Feasible velocity closest to U and the Kuhn-Tucker multipliers of the contacts."""

    model_config = MODEL_CONFIG

    v: Vector
    lambdas: FloatArray
    basis: ContactBasis

    @property
    def normal_part(self) -> np.ndarray:
        """P_N(U) = U - v = -sum lambda_k G_k."""
        return -(self.basis.gradients.T @ self.lambdas) if self.basis.size else np.zeros_like(self.v)


class CrowdRun(BaseModel):
    """Both discretizations of dq/dt + N(Q, q) ∋ U(q)."""

    model_config = MODEL_CONFIG

    sweeping: Trajectory
    velocity: Trajectory
    velocity_multipliers: list[FloatArray]
    velocity_overlap: Annotated[
        float, Field(ge=0, description="Largest constraint violation of the velocity scheme")
    ] = 0.0

    @property
    def scheme_gap(self) -> float:
        """Sup-norm distance between the two schemes on the common grid."""
        return float(np.max(np.linalg.norm(self.sweeping.states - self.velocity.states, axis=1)))


class CorridorWitness(BaseModel):
    """The two-disk corridor configuration and its multivalued projection."""

    model_config = MODEL_CONFIG

    radius: float
    epsilon: float
    q0: Vector
    feasible_set: DiskConfigurationSet
    projection: ProjectionResult

    @property
    def expected_distance(self) -> float:
        return 2.0 * math.sqrt(self.radius * self.epsilon)
