"""
Scenario file schema and the reports written by the subcommands.
"""

import math
from typing import Annotated, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from ..analysis.models import CheckReport, SuiteReport
from ..catchup.models import ConstantField, ConvergenceTable, LinearField, Perturbation, Problem
from ..crowd.models import DiskConfiguration
from ..crowd.simulation import exit_field
from ..eikonal.models import GridField, Room
from ..errors import InvalidInputError
from ..geometry.models import MovingSet, Wall
from ..types import Vector

PositiveBound = Annotated[float | None, Field(gt=0)]

SCENARIO_CONFIG = ConfigDict(frozen=True, arbitrary_types_allowed=True, extra="forbid")


class ExitFieldRule(BaseModel):
    """Spontaneous velocity of every disk from the distance-to-exit field of the room."""

    model_config = SCENARIO_CONFIG

    kind: Literal["exit-field"] = "exit-field"


ScenarioPerturbation = Annotated[
    ConstantField | LinearField | ExitFieldRule, Field(discriminator="kind")
]


class ToleranceOverrides(BaseModel):
    model_config = SCENARIO_CONFIG

    tol_feas: PositiveBound = None
    tol_proj: PositiveBound = None
    tol_active: PositiveBound = None
    multistart: Annotated[int | None, Field(ge=1)] = None
    step_multistart: Annotated[int | None, Field(ge=1)] = None
    dedup_radius: PositiveBound = None
    cost_rel_tol: PositiveBound = None
    solver_max_iter: Annotated[int | None, Field(ge=1)] = None


class DeclaredBounds(BaseModel):
    """
    Bounds the scenario author vouches for.

    ``f_inf`` and ``growth`` must dominate what the perturbation actually has,
    ``eta`` is the prox-regularity scale used when ``r`` is omitted.
    """

    model_config = SCENARIO_CONFIG

    f_inf: PositiveBound = None
    growth: PositiveBound = None
    eta: PositiveBound = None
    stability_constant: PositiveBound = None
    convergence_order: Annotated[float, Field(gt=0)] = 0.9


class CrowdSpec(BaseModel):
    model_config = SCENARIO_CONFIG

    radius: Annotated[float, Field(gt=0, allow_inf_nan=False)]
    centers: Annotated[list[tuple[float, float]], Field(min_length=1)]
    walls: list[Wall] = Field(default_factory=list)
    prox_constant: Annotated[float, Field(gt=0)] = math.inf

    def configuration(self) -> DiskConfiguration:
        return DiskConfiguration(
            q=np.array(self.centers, dtype=np.float64).ravel(),
            radius=self.radius,
            walls=self.walls,
            prox_constant=self.prox_constant,
        )


class Scenario(BaseModel):
    """
    One experiment: a (moving) set or a crowd, a perturbation, u0, horizon and grid.

    Field-only scenarios carry just a room.
    """

    model_config = SCENARIO_CONFIG

    schema_version: Literal[1]
    name: Annotated[str, Field(min_length=1)]
    set: MovingSet | None = None
    crowd: CrowdSpec | None = None
    room: Room | None = None
    perturbation: ScenarioPerturbation | None = None
    u0: Vector | None = None
    horizon: Annotated[float, Field(gt=0, allow_inf_nan=False)] = 1.0
    n: Annotated[int | None, Field(ge=1)] = None
    n_list: list[Annotated[int, Field(ge=1)]] | None = None
    r: PositiveBound = None
    seed: Annotated[int, Field(ge=0)] = 0
    tolerances: ToleranceOverrides = Field(default_factory=ToleranceOverrides)
    bounds: DeclaredBounds = Field(default_factory=DeclaredBounds)
    stability_v0: Vector | None = None

    @model_validator(mode="after")
    def _check_layout(self) -> "Scenario":
        if self.set is not None and self.crowd is not None:
            raise ValueError("give either a set or a crowd, not both")
        if self.set is None and self.crowd is None and self.room is None:
            raise ValueError("a scenario needs a set, a crowd or a room")
        if self.set is not None and self.u0 is None:
            raise ValueError("u0 is required together with a set")
        if self.crowd is not None and self.u0 is not None:
            raise ValueError("crowd scenarios take u0 from the disk centers")
        if (self.set is not None or self.crowd is not None) and self.perturbation is None:
            raise ValueError("a perturbation is required")
        if isinstance(self.perturbation, ExitFieldRule) and (
            self.crowd is None or self.room is None
        ):
            raise ValueError("the exit-field perturbation needs a crowd and a room")
        return self

    @model_validator(mode="after")
    def _check_declared_bounds(self) -> "Scenario":
        match self.perturbation:
            case ConstantField() as field if self.bounds.f_inf is not None:
                if field.f_inf > self.bounds.f_inf:
                    raise ValueError(
                        f"declared f_inf {self.bounds.f_inf} is below |f| = {field.f_inf}"
                    )
            case LinearField() as field if self.bounds.growth is not None:
                if field.growth > self.bounds.growth:
                    raise ValueError(
                        f"declared growth {self.bounds.growth} is below L = {field.growth}"
                    )
        return self

    @property
    def is_crowd(self) -> bool:
        return self.crowd is not None

    @property
    def needs_field(self) -> bool:
        return isinstance(self.perturbation, ExitFieldRule)

    def moving_set(self) -> MovingSet:
        if self.crowd is not None:
            return MovingSet(base=self.crowd.configuration().feasible_set)
        if self.set is None:
            raise InvalidInputError(f"scenario {self.name!r} has no set")
        return self.set

    def scale(self) -> float:
        """r, else the declared eta, else the prox-regularity constant of the set."""
        if self.r is not None:
            return self.r
        if self.bounds.eta is not None:
            return self.bounds.eta
        return float(self.moving_set().base.prox_constant)

    def field(self, grid: GridField | None = None) -> Perturbation:
        """
        Raises:
            InvalidInputError: If the scenario has no perturbation, or the exit field is missing
        """
        match self.perturbation:
            case ExitFieldRule():
                if grid is None or self.crowd is None:
                    raise InvalidInputError("the exit-field perturbation needs a solved room")
                return exit_field(grid, len(self.crowd.centers))
            case None:
                raise InvalidInputError(f"scenario {self.name!r} has no perturbation")
            case field:
                return field

    def problem(self, grid: GridField | None = None) -> Problem:
        """
        Raises:
            ValidationError: If the data do not fit together (dimensions, u0 outside C(0))
        """
        u0 = self.crowd.configuration().q if self.crowd is not None else self.u0
        return Problem(
            moving_set=self.moving_set(),
            field=self.field(grid),
            u0=u0,
            horizon=self.horizon,
            r=self.scale(),
        )


class RunReport(BaseModel):
    """Contents of ``audit.json`` after ``run``."""

    model_config = ConfigDict(frozen=True)

    scenario: str
    n: int
    h: float
    seed: int
    minimal_n: int
    ambiguous_steps: list[int]
    audit: CheckReport
    stability: CheckReport | None = None

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return self.audit.passed and (self.stability is None or self.stability.passed)


class ConvergenceReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    scenario: str
    seed: int
    table: ConvergenceTable
    check: CheckReport


class CrowdReport(BaseModel):
    """Contents of ``audit.json`` after ``crowd``."""

    model_config = ConfigDict(frozen=True)

    scenario: str
    n: int
    seed: int
    n_disks: int
    scheme_gap: float
    velocity_overlap: float
    ambiguous_steps: list[int]
    audit: CheckReport


class VerifyReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    requested: str
    seed: int
    suites: list[SuiteReport]

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)
