"""
Check report models.
"""

from typing import Annotated, Final

from pydantic import BaseModel, ConfigDict, Field, computed_field

MAX_RECORDED_VIOLATIONS: Final[int] = 100


class Violation(BaseModel):
    """One failed sample: what was checked, its inputs and the (negative) margin."""

    model_config = ConfigDict(frozen=True)

    label: str
    inputs: list[float] = Field(default_factory=list)
    margin: float


class CheckReport(BaseModel):
    """Outcome of one check: passes iff no sample violated it."""

    model_config = ConfigDict(frozen=True)

    name: str
    samples: Annotated[int, Field(ge=0)]
    violations: list[Violation] = Field(default_factory=list)
    violation_count: Annotated[int, Field(ge=0)] = 0
    worst_margin: float | None = None
    surrogate: str | None = Field(
        default=None, description="Discrete quantity audited in place of a continuous claim"
    )
    details: dict[str, float | None] = Field(default_factory=dict)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return self.violation_count == 0


class SuiteReport(BaseModel):
    """Reports of a named verification suite."""

    model_config = ConfigDict(frozen=True)

    suite: str
    reports: list[CheckReport]
    negative_control: bool = False

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)


class ReportBuilder:
    """Accumulates margins (negative means violated) into a CheckReport."""

    def __init__(self, name: str, tolerance: float = 0.0) -> None:
        self.name = name
        self.tolerance = tolerance
        self.samples = 0
        self.violation_count = 0
        self.violations: list[Violation] = []
        self.worst: float | None = None

    def record(self, margin: float, label: str, inputs: list[float] | None = None) -> bool:
        """Record one sample; returns whether it passed."""
        self.samples += 1
        self.worst = margin if self.worst is None else min(self.worst, margin)
        if margin >= -self.tolerance:
            return True
        self.violation_count += 1
        if len(self.violations) < MAX_RECORDED_VIOLATIONS:
            self.violations.append(Violation(label=label, inputs=inputs or [], margin=margin))
        return False

    def build(
        self, surrogate: str | None = None, details: dict[str, float | None] | None = None
    ) -> CheckReport:
        return CheckReport(
            name=self.name,
            samples=self.samples,
            violations=self.violations,
            violation_count=self.violation_count,
            worst_margin=self.worst,
            surrogate=surrogate,
            details=details or {},
        )
