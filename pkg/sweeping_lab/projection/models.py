"""
Projection data models.
"""

from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from ..types import FloatArray, Vector

RESULT_CONFIG = ConfigDict(frozen=True, arbitrary_types_allowed=True)


class ProjectionResult(BaseModel):
    """Nearest points of a set to a query point."""

    model_config = RESULT_CONFIG

    nearest: Annotated[list[Vector], Field(description="All minimizers found")]
    dist: Annotated[float, Field(ge=0, description="Distance to the set")]
    converged: bool
    iterations: Annotated[int, Field(ge=0)]
    multipliers: FloatArray | None = None

    @model_validator(mode="after")
    def _check_nearest(self) -> "ProjectionResult":
        if self.converged and not self.nearest:
            raise ValueError("a converged projection needs at least one nearest point")
        return self

    @property
    def ambiguous(self) -> bool:
        """True when more than one minimizer was found."""
        return len(self.nearest) > 1


class ProxViolation(BaseModel):
    """One sample at which directional prox-regularity failed."""

    model_config = RESULT_CONFIG

    x: Vector
    s: float
    stage: Literal["a", "b"]
    detail: str = ""


class DirectionalProxReport(BaseModel):
    """Outcome of a sampled (r, f) prox-regularity certification."""

    model_config = RESULT_CONFIG

    r: Annotated[float, Field(gt=0)]
    samples_checked: Annotated[int, Field(ge=0)]
    violations: list[ProxViolation] = Field(default_factory=list)
    method: str = "sampling check over the given points and scales, not a proof"

    @computed_field  # type: ignore[prop-decorator]
    @property
    def certified(self) -> bool:
        return not self.violations
