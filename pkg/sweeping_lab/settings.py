"""
Numerical tolerance settings using Pydantic for environment-based configuration.
"""

from collections.abc import Iterator, Mapping
from contextlib import contextmanager
from typing import Any

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class ToleranceSettings(BaseSettings):
    """Tolerances and solver budgets shared by every module."""

    tol_feas: float = Field(
        default=1e-9, gt=0, description="Membership tolerance for iterative kinds"
    )
    tol_proj: float = Field(
        default=1e-8, gt=0, description="Absolute tolerance on projected coordinates"
    )
    tol_active: float = Field(
        default=1e-8, gt=0, description="Constraint value below which a contact is active"
    )
    multistart: int = Field(
        default=16, ge=1, description="Number of multistart seeds for nonconvex projections"
    )
    step_multistart: int = Field(
        default=4, ge=1, description="Multistart seeds used inside catching-up steps"
    )
    dedup_radius: float = Field(
        default=1e-6, gt=0, description="Minimizers closer than this are merged"
    )
    cost_rel_tol: float = Field(
        default=1e-6, gt=0, description="Relative cost gap for equal-cost minimizers"
    )
    solver_max_iter: int = Field(
        default=500, ge=1, description="Iteration budget of the constrained solver"
    )

    model_config = SettingsConfigDict(
        env_prefix="SWEEP_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


# Create a global instance
tolerance_settings = ToleranceSettings()


@contextmanager
def overridden(
    settings: ToleranceSettings, values: Mapping[str, Any]
) -> Iterator[ToleranceSettings]:
    """Temporarily replace some tolerances, restoring them on exit."""
    saved = {key: getattr(settings, key) for key in values}
    try:
        for key, value in values.items():
            setattr(settings, key, value)
        yield settings
    finally:
        for key, value in saved.items():
            setattr(settings, key, value)
