"""
Perturbations, problems and discrete trajectories of the catching-up scheme.
"""

import math
from collections.abc import Callable
from typing import Annotated, Any, Literal

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..geometry.models import MovingSet
from ..geometry.sets import feasible, set_at
from ..types import FloatArray, Vector

MODEL_CONFIG = ConfigDict(frozen=True, arbitrary_types_allowed=True, extra="forbid")

Array = NDArray[np.float64]


class ConstantField(BaseModel):
    """f(x) = value."""

    model_config = MODEL_CONFIG

    kind: Literal["constant"] = "constant"
    value: Vector

    @property
    def dim(self) -> int:
        return int(self.value.size)

    @property
    def f_inf(self) -> float:
        return float(np.linalg.norm(self.value))

    @property
    def growth(self) -> float | None:
        return None

    @property
    def lipschitz(self) -> float:
        return 0.0

    def __call__(self, x: Array) -> Array:
        return np.array(self.value)


class LinearField(BaseModel):
    """
    f(x) = matrix x + shift.

    Unbounded, with linear growth |f(x)| <= L (1 + |x|) for
    L = max(|matrix|_2, |shift|).
    """

    model_config = MODEL_CONFIG

    kind: Literal["linear"] = "linear"
    matrix: FloatArray
    shift: Vector

    @model_validator(mode="after")
    def _check_shape(self) -> "LinearField":
        d = self.shift.size
        if self.matrix.shape != (d, d):
            raise ValueError(f"matrix must be {d}x{d}, got {self.matrix.shape}")
        if not np.all(np.isfinite(self.matrix)):
            raise ValueError("matrix entries must be finite")
        return self

    @property
    def dim(self) -> int:
        return int(self.shift.size)

    @property
    def f_inf(self) -> float | None:
        return float(np.linalg.norm(self.shift)) if not np.any(self.matrix) else None

    @property
    def growth(self) -> float:
        return max(float(np.linalg.norm(self.matrix, 2)), float(np.linalg.norm(self.shift)))

    @property
    def lipschitz(self) -> float:
        return float(np.linalg.norm(self.matrix, 2))

    def __call__(self, x: Array) -> Array:
        return self.matrix @ x + self.shift


class CallableField(BaseModel):
    """Arbitrary rule with a declared sup-norm bound or linear-growth constant."""

    model_config = MODEL_CONFIG

    kind: Literal["callable"] = "callable"
    rule: Annotated[Callable[[Array], Any], Field(exclude=True)]
    dimension: Annotated[int, Field(ge=1)]
    bound: Annotated[float | None, Field(gt=0, allow_inf_nan=False)] = None
    growth_constant: Annotated[float | None, Field(gt=0, allow_inf_nan=False)] = None
    lipschitz_constant: Annotated[float | None, Field(ge=0)] = None
    name: str = "callable"

    @model_validator(mode="after")
    def _check_declared_bound(self) -> "CallableField":
        if self.bound is None and self.growth_constant is None:
            raise ValueError("declare either a sup-norm bound or a growth constant")
        return self

    @property
    def dim(self) -> int:
        return self.dimension

    @property
    def f_inf(self) -> float | None:
        return self.bound

    @property
    def growth(self) -> float | None:
        return self.growth_constant

    @property
    def lipschitz(self) -> float | None:
        return self.lipschitz_constant

    def __call__(self, x: Array) -> Array:
        return np.asarray(self.rule(x), dtype=np.float64)


Perturbation = Annotated[
    ConstantField | LinearField | CallableField, Field(discriminator="kind")
]


class Problem(BaseModel):
    """
    u' + N(C(t), u) ∋ f(u) on [0, horizon] with u(0) = u0.

    ``r`` is the directional prox-regularity scale used by the step rule.
    """

    model_config = MODEL_CONFIG

    moving_set: MovingSet
    field: Perturbation
    u0: Vector
    horizon: Annotated[float, Field(gt=0, allow_inf_nan=False)]
    r: Annotated[float, Field(gt=0)]

    @model_validator(mode="after")
    def _check_initial_datum(self) -> "Problem":
        if self.field.dim != self.moving_set.dim or self.u0.size != self.moving_set.dim:
            raise ValueError(
                f"set, perturbation and u0 must share dimension {self.moving_set.dim}"
            )
        if not feasible(set_at(self.moving_set, 0.0), self.u0):
            raise ValueError("u0 must belong to C(0)")
        return self

    @property
    def dim(self) -> int:
        return self.moving_set.dim

    @property
    def linear_growth(self) -> bool:
        return self.field.f_inf is None


class Trajectory(BaseModel):
    """
    Discrete solution on the uniform grid t^i = i h.

    ``deltas[i]`` is (u^{i+1} - u^i - h f^i) / h, ``perturbations[i]`` the frozen
    value f^i = f(u^i), and ``bounds[i]`` the sup-norm bound of f used for step i.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    times: FloatArray
    states: FloatArray
    deltas: FloatArray
    perturbations: FloatArray
    bounds: FloatArray
    motion_speed: Annotated[float, Field(ge=0)] = 0.0
    ambiguous_steps: list[int] = Field(default_factory=list)
    multipliers: list[FloatArray] | None = None

    @model_validator(mode="after")
    def _check_shapes(self) -> "Trajectory":
        n = self.times.size - 1
        if self.states.shape[0] != n + 1:
            raise ValueError("one state per grid time is required")
        for name in ("deltas", "perturbations", "bounds"):
            if getattr(self, name).shape[0] != n:
                raise ValueError(f"{name} needs one entry per step")
        return self

    @property
    def n(self) -> int:
        return int(self.times.size - 1)

    @property
    def h(self) -> float:
        return float(self.times[1] - self.times[0]) if self.n else math.nan

    @property
    def dim(self) -> int:
        return int(self.states.shape[1])

    @property
    def final(self) -> Array:
        return np.array(self.states[-1])

    def at(self, t: float | Array) -> Array:
        """Piecewise-linear interpolant u_n evaluated at ``t``."""
        return np.stack(
            [np.interp(t, self.times, self.states[:, k]) for k in range(self.dim)],
            axis=-1,
        )


class StepResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    state: Vector
    ambiguous: bool = False
    multipliers: FloatArray | None = None


class ConvergenceRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    gap: Annotated[float, Field(ge=0, description="Sup-norm gap to the reference")]
    doubling_gap: float | None = None


class ConvergenceTable(BaseModel):
    """
    Sup-norm gaps to a reference, fitted order in 1/n and the Cauchy constant
    kappa = n gap(n, 2n) at the coarsest doubling pair.
    """

    model_config = ConfigDict(frozen=True)

    reference: Literal["closed-form", "finest-grid"]
    rows: list[ConvergenceRow]
    fitted_order: float | None = None
    exact: bool = False
    kappa: float | None = None
