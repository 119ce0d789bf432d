"""
Constraint-set and moving-set models.

Every set kind is a frozen pydantic model tagged by ``kind`` so that scenario
files parse directly into the discriminated union ``ConstraintSet``.
"""

import math
from collections.abc import Callable
from typing import Annotated, Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.optimize import linprog

from ..types import Vector

SET_CONFIG = ConfigDict(frozen=True, arbitrary_types_allowed=True, extra="forbid")

ProxConstant = Annotated[
    float, Field(gt=0, description="Declared prox-regularity constant (may be inf)")
]


class HalfSpace(BaseModel):
    """Closed half-space {x : <normal, x> <= offset}."""

    model_config = SET_CONFIG

    kind: Literal["half-space"] = "half-space"
    normal: Annotated[Vector, Field(description="Outward normal (nonzero)")]
    offset: Annotated[float, Field(allow_inf_nan=False)]
    prox_constant: ProxConstant = math.inf

    @model_validator(mode="after")
    def _check_normal(self) -> "HalfSpace":
        if not np.any(self.normal):
            raise ValueError("half-space normal must be nonzero")
        return self

    @property
    def dim(self) -> int:
        return int(self.normal.size)


class AxisBox(BaseModel):
    """Axis-aligned box {lower <= x <= upper}."""

    model_config = SET_CONFIG

    kind: Literal["axis-box"] = "axis-box"
    lower: Vector
    upper: Vector
    prox_constant: ProxConstant = math.inf

    @model_validator(mode="after")
    def _check_bounds(self) -> "AxisBox":
        if self.lower.size != self.upper.size:
            raise ValueError("box bounds must have the same dimension")
        if np.any(self.lower > self.upper):
            raise ValueError("box is empty: some lower bound exceeds its upper bound")
        return self

    @property
    def dim(self) -> int:
        return int(self.lower.size)


class BallExterior(BaseModel):
    """Complement of the open ball B(center, radius), which is radius-prox-regular."""

    model_config = SET_CONFIG

    kind: Literal["ball-exterior"] = "ball-exterior"
    center: Vector
    radius: Annotated[float, Field(gt=0, allow_inf_nan=False)]
    prox_constant: ProxConstant

    @model_validator(mode="before")
    @classmethod
    def _default_prox_constant(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("prox_constant") is None:
            data = {**data, "prox_constant": data.get("radius")}
        return data

    @model_validator(mode="after")
    def _check_prox_constant(self) -> "BallExterior":
        if self.prox_constant > self.radius:
            raise ValueError("ball-exterior prox_constant cannot exceed its radius")
        return self

    @property
    def dim(self) -> int:
        return int(self.center.size)


class CrossSet(BaseModel):
    """Planar union {x - cx <= 0} ∪ {y - cy <= 0}, the reentrant-corner example."""

    model_config = SET_CONFIG

    kind: Literal["cross-set"] = "cross-set"
    corner: Vector = Field(default_factory=lambda: np.zeros(2), validate_default=True)
    prox_constant: ProxConstant = math.inf

    @model_validator(mode="after")
    def _check_planar(self) -> "CrossSet":
        if self.corner.size != 2:
            raise ValueError("the cross-set lives in the plane")
        return self

    @property
    def dim(self) -> int:
        return 2


class HalfSpaceIntersection(BaseModel):
    """Finite intersection of half-spaces (a closed convex polyhedron)."""

    model_config = SET_CONFIG

    kind: Literal["half-space-intersection"] = "half-space-intersection"
    half_spaces: Annotated[list[HalfSpace], Field(min_length=1)]
    prox_constant: ProxConstant = math.inf

    @model_validator(mode="after")
    def _check_nonempty(self) -> "HalfSpaceIntersection":
        dims = {h.dim for h in self.half_spaces}
        if len(dims) != 1:
            raise ValueError("all half-spaces must share one dimension")
        a_ub, b_ub = self.matrix()
        result = linprog(
            np.zeros(self.dim), A_ub=a_ub, b_ub=b_ub, bounds=(None, None), method="highs"
        )
        if result.status == 2:
            raise ValueError("half-space intersection is empty")
        return self

    def matrix(self) -> tuple[np.ndarray, np.ndarray]:
        """Return (A, b) with the set written as A x <= b."""
        a = np.vstack([h.normal for h in self.half_spaces])
        b = np.array([h.offset for h in self.half_spaces])
        return a, b

    @property
    def dim(self) -> int:
        return self.half_spaces[0].dim


class Wall(BaseModel):
    """Axis-aligned bound on one disk center: q_i[axis] >= value or <= value."""

    model_config = SET_CONFIG

    disk: Annotated[int, Field(ge=0)]
    axis: Literal["x", "y"]
    side: Literal["lower", "upper"]
    value: Annotated[float, Field(allow_inf_nan=False)]

    @property
    def coordinate(self) -> int:
        return 2 * self.disk + (0 if self.axis == "x" else 1)


class DiskConfigurationSet(BaseModel):
    """
    Feasible configurations Q of N rigid disks of common radius.

    A configuration q in R^{2N} is feasible iff every pair satisfies
    D_ij(q) = |q_i - q_j| - 2 r >= 0 and every wall bound holds.
    """

    model_config = SET_CONFIG

    kind: Literal["disk-configuration"] = "disk-configuration"
    n_disks: Annotated[int, Field(ge=1)]
    radius: Annotated[float, Field(gt=0, allow_inf_nan=False)]
    walls: list[Wall] = Field(default_factory=list)
    prox_constant: ProxConstant = math.inf

    @model_validator(mode="after")
    def _check_walls(self) -> "DiskConfigurationSet":
        lower = np.full(self.dim, -np.inf)
        upper = np.full(self.dim, np.inf)
        for wall in self.walls:
            if wall.disk >= self.n_disks:
                raise ValueError(f"wall refers to disk {wall.disk} of {self.n_disks}")
            if wall.side == "lower":
                lower[wall.coordinate] = max(lower[wall.coordinate], wall.value)
            else:
                upper[wall.coordinate] = min(upper[wall.coordinate], wall.value)
        if np.any(lower > upper):
            raise ValueError("wall bounds leave no room for some disk")
        return self

    @property
    def dim(self) -> int:
        return 2 * self.n_disks


ConstraintSet = Annotated[
    HalfSpace
    | AxisBox
    | BallExterior
    | CrossSet
    | HalfSpaceIntersection
    | DiskConfigurationSet,
    Field(discriminator="kind"),
]

ANALYTIC_KINDS: frozenset[str] = frozenset(
    {"half-space", "axis-box", "ball-exterior", "cross-set"}
)


class FixedMotion(BaseModel):
    model_config = SET_CONFIG

    kind: Literal["fixed"] = "fixed"


class TranslationMotion(BaseModel):
    """C(t) = C_0 + t a."""

    model_config = SET_CONFIG

    kind: Literal["translation"] = "translation"
    velocity: Vector


class OscillatingMotion(BaseModel):
    """C(t) = C_0 + amplitude sin(frequency t) direction, Lipschitz in time."""

    model_config = SET_CONFIG

    kind: Literal["oscillation"] = "oscillation"
    direction: Vector
    amplitude: Annotated[float, Field(ge=0, allow_inf_nan=False)]
    frequency: Annotated[float, Field(ge=0, allow_inf_nan=False)]

    @property
    def lipschitz_constant(self) -> float:
        return self.amplitude * self.frequency * float(np.linalg.norm(self.direction))


class LipschitzMotion(BaseModel):
    """User rule t -> C(t) with declared H(C(t), C(s)) <= k |t - s|."""

    model_config = SET_CONFIG

    kind: Literal["lipschitz"] = "lipschitz"
    k: Annotated[float, Field(ge=0, allow_inf_nan=False)]
    rule: Annotated[Callable[[float], Any], Field(exclude=True)]


Motion = Annotated[
    FixedMotion | TranslationMotion | OscillatingMotion | LipschitzMotion,
    Field(discriminator="kind"),
]


class MovingSet(BaseModel):
    """A base set together with its motion law."""

    model_config = SET_CONFIG

    base: ConstraintSet
    motion: Motion = Field(default_factory=FixedMotion)

    @model_validator(mode="after")
    def _check_motion_dimension(self) -> "MovingSet":
        match self.motion:
            case TranslationMotion(velocity=v) | OscillatingMotion(direction=v):
                if v.size != self.base.dim:
                    raise ValueError(
                        f"motion vector has dimension {v.size}, set has {self.base.dim}"
                    )
        return self

    @property
    def dim(self) -> int:
        return self.base.dim
