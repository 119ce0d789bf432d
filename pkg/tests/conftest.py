"""
Test configuration for the sweeping lab tests.
"""

import json
import math
from collections.abc import Callable
from pathlib import Path
from typing import Any

import pytest

from sweeping_lab.geometry.models import BallExterior, CrossSet, HalfSpace

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


@pytest.fixture
def lower_half_plane() -> HalfSpace:
    """{x_2 <= 0}."""
    return HalfSpace(normal=[0.0, 1.0], offset=0.0)


@pytest.fixture
def unit_ball_exterior() -> BallExterior:
    return BallExterior(center=[0.0, 0.0], radius=1.0)


@pytest.fixture
def cross_set() -> CrossSet:
    return CrossSet()


@pytest.fixture
def scenario_dir() -> Path:
    return SCENARIO_DIR


@pytest.fixture
def half_plane_payload() -> dict[str, Any]:
    """A minimal valid scenario, to be tweaked by tests."""
    return {
        "schema_version": 1,
        "name": "half-plane",
        "set": {"base": {"kind": "half-space", "normal": [0.0, 1.0], "offset": 0.0}},
        "perturbation": {"kind": "constant", "value": [1.0, 1.0]},
        "u0": [0.0, 0.0],
        "horizon": 1.0,
        "n": 20,
        "r": 1.0,
    }


@pytest.fixture
def ball_slide_payload() -> dict[str, Any]:
    theta = 3.0 * math.pi / 4.0
    return {
        "schema_version": 1,
        "name": "ball-slide",
        "set": {"base": {"kind": "ball-exterior", "center": [0.0, 0.0], "radius": 1.0}},
        "perturbation": {"kind": "constant", "value": [1.0, 0.0]},
        "u0": [math.cos(theta), math.sin(theta)],
        "horizon": 0.5,
        "n": 50,
        "n_list": [40, 80, 160],
        "r": 0.5,
    }


@pytest.fixture
def write_scenario(tmp_path: Path) -> Callable[[dict[str, Any] | str], Path]:
    """Write a scenario payload (or raw text) to a temporary file."""

    def write(payload: dict[str, Any] | str, name: str = "scenario.json") -> Path:
        path = tmp_path / name
        text = payload if isinstance(payload, str) else json.dumps(payload)
        path.write_text(text, encoding="utf-8")
        return path

    return write
